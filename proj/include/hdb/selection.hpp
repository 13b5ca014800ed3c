#pragma once

#include "hdb/ingest.hpp"
#include "hdb/metrics.hpp"
#include "hdb/model.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace hdb::selection {

struct DietResult {
    Diet diet;
    DietMetrics metrics;
};

namespace detail {

// The group quota is fixed, so the minimum over the whole basket decomposes
// into independent per-group rank-order selections: the k_g smallest items
// under a strict total order.
template <typename KeyFn>
std::vector<const FoodItem *> top_k_by(std::vector<const FoodItem *> items, std::size_t k,
                                       FoodGroup g, KeyFn key) {
    if (items.size() < k)
        throw InsufficientItemsError(std::string(to_string(g)), items.size(), k);
    std::sort(items.begin(), items.end(),
              [&](const FoodItem *a, const FoodItem *b) { return key(*a) < key(*b); });
    items.resize(k);
    return items;
}

inline DietResult assemble(const ingest::CountryDataset &country, DietScenario scenario,
                           const HdbTargets &targets,
                           const std::array<std::vector<const FoodItem *>, kGroupCount> &chosen) {
    Diet diet;
    diet.country_code = country.country_code();
    diet.scenario = scenario;
    for (FoodGroup g : kFoodGroups) {
        double quantity = targets.quantity_per_item(g);
        for (const FoodItem *item : chosen[group_index(g)])
            diet.selections.push_back({item->item_id, g, quantity});
    }
    validate_diet(diet, targets);
    DietMetrics m = metrics::diet_metrics(diet, country);
    return {std::move(diet), m};
}

} // namespace detail

// Diet 1: cheapest k_g items per group. Price ties break toward lower
// emissions, then item id.
inline DietResult lowest_cost_diet(const ingest::CountryDataset &country,
                                   const HdbTargets &targets) {
    std::array<std::vector<const FoodItem *>, kGroupCount> chosen;
    for (FoodGroup g : kFoodGroups) {
        chosen[group_index(g)] = detail::top_k_by(
            country.group_items(g), static_cast<std::size_t>(targets.item_count(g)), g,
            [](const FoodItem &it) {
                return std::make_tuple(it.price_ppp_per_kcal, it.emissions_kg_per_kcal,
                                       std::string_view(it.item_id));
            });
    }
    return detail::assemble(country, DietScenario::LowestCost, targets, chosen);
}

// Diet 2: least-emitting k_g items per group; emission ties go to the
// cheaper item, then item id.
inline DietResult lowest_emissions_diet(const ingest::CountryDataset &country,
                                        const HdbTargets &targets) {
    std::array<std::vector<const FoodItem *>, kGroupCount> chosen;
    for (FoodGroup g : kFoodGroups) {
        chosen[group_index(g)] = detail::top_k_by(
            country.group_items(g), static_cast<std::size_t>(targets.item_count(g)), g,
            [](const FoodItem &it) {
                return std::make_tuple(it.emissions_kg_per_kcal, it.price_ppp_per_kcal,
                                       std::string_view(it.item_id));
            });
    }
    return detail::assemble(country, DietScenario::LowestEmissions, targets, chosen);
}

// Diet 3: rank each group's FBS categories by kcal supply (ties by category
// name), take the top k_g, and within each category keep the least expensive
// matched item. Countries whose categories run out are ineligible.
inline DietResult most_common_diet(const ingest::CountryDataset &country,
                                   const HdbTargets &targets) {
    std::array<std::vector<const FoodItem *>, kGroupCount> chosen;
    for (FoodGroup g : kFoodGroups) {
        auto k = static_cast<std::size_t>(targets.item_count(g));

        // category -> cheapest matched item, plus the category's kcal supply
        std::map<std::string, const FoodItem *> cheapest;
        for (const FoodItem *it : country.group_items(g)) {
            if (!it->fbs_category || !it->fbs_category_kcal) continue;
            auto [slot, inserted] = cheapest.try_emplace(*it->fbs_category, it);
            if (!inserted) {
                const FoodItem *cur = slot->second;
                if (std::make_pair(it->price_ppp_per_kcal, std::string_view(it->item_id)) <
                    std::make_pair(cur->price_ppp_per_kcal, std::string_view(cur->item_id)))
                    slot->second = it;
            }
        }
        if (cheapest.size() < k)
            throw InsufficientItemsError(std::string(to_string(g)), cheapest.size(), k);

        std::vector<std::pair<std::string, const FoodItem *>> ranked(cheapest.begin(),
                                                                     cheapest.end());
        std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
            return std::make_pair(-*a.second->fbs_category_kcal, std::string_view(a.first)) <
                   std::make_pair(-*b.second->fbs_category_kcal, std::string_view(b.first));
        });
        ranked.resize(k);
        for (const auto &[category, item] : ranked) chosen[group_index(g)].push_back(item);
    }
    return detail::assemble(country, DietScenario::MostCommon, targets, chosen);
}

inline DietResult deterministic_diet(const ingest::CountryDataset &country,
                                     const HdbTargets &targets, DietScenario scenario) {
    switch (scenario) {
    case DietScenario::LowestCost: return lowest_cost_diet(country, targets);
    case DietScenario::LowestEmissions: return lowest_emissions_diet(country, targets);
    case DietScenario::MostCommon: return most_common_diet(country, targets);
    default: throw Error("not a deterministic scenario");
    }
}

} // namespace hdb::selection
