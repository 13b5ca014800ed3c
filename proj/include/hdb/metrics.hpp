#pragma once

#include "hdb/errors.hpp"
#include "hdb/ingest.hpp"
#include "hdb/model.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace hdb::metrics {

// Cost and emissions of a diet: sum of price-per-kcal x kcal and emissions
// x kcal over the selections, with a per-group breakdown. Totals are formed
// by summing the group subtotals so the decomposition is exact.
inline DietMetrics diet_metrics(const Diet &diet, const ingest::CountryDataset &country) {
    DietMetrics m;
    for (const DietSelection &sel : diet.selections) {
        const FoodItem *item = country.find_item(sel.item_id);
        if (!item) throw UnknownItemError(sel.item_id);
        GroupMetrics &g = m.per_group[group_index(sel.group)];
        g.cost_ppp_per_day += item->price_ppp_per_kcal * sel.quantity_kcal;
        g.emissions_kg_per_day += item->emissions_kg_per_kcal * sel.quantity_kcal;
    }
    for (const GroupMetrics &g : m.per_group) {
        m.cost_ppp_per_day += g.cost_ppp_per_day;
        m.emissions_kg_per_day += g.emissions_kg_per_day;
    }
    return m;
}

struct ItemShare {
    std::string item_id;
    FoodGroup group = FoodGroup::ASF;
    double energy_share = 0.0;
    double emission_share = 0.0;
};

// Pools one scenario's diets across countries and attributes shares of total
// dietary energy and total emissions to each item id. Each country counts
// once; shares sum to 1.
inline std::vector<ItemShare> item_share_table(std::span<const Diet> diets,
                                               std::span<const ingest::CountryDataset> countries) {
    std::map<std::string, ItemShare> by_item;
    double total_energy = 0.0;
    double total_emissions = 0.0;
    for (const Diet &diet : diets) {
        const ingest::CountryDataset *country = nullptr;
        for (const auto &c : countries) {
            if (c.country_code() == diet.country_code) {
                country = &c;
                break;
            }
        }
        if (!country) throw Error("no dataset for country " + diet.country_code);
        for (const DietSelection &sel : diet.selections) {
            const FoodItem *item = country->find_item(sel.item_id);
            if (!item) throw UnknownItemError(sel.item_id);
            auto [it, inserted] = by_item.try_emplace(sel.item_id);
            if (inserted) {
                it->second.item_id = sel.item_id;
                it->second.group = sel.group;
            }
            double emissions = item->emissions_kg_per_kcal * sel.quantity_kcal;
            it->second.energy_share += sel.quantity_kcal;
            it->second.emission_share += emissions;
            total_energy += sel.quantity_kcal;
            total_emissions += emissions;
        }
    }
    std::vector<ItemShare> out;
    out.reserve(by_item.size());
    for (auto &[id, share] : by_item) {
        if (total_energy > 0.0) share.energy_share /= total_energy;
        if (total_emissions > 0.0) share.emission_share /= total_emissions;
        out.push_back(std::move(share));
    }
    return out;
}

} // namespace hdb::metrics
