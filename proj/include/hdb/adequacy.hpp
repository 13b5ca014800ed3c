#pragma once

#include "hdb/errors.hpp"
#include "hdb/ingest.hpp"
#include "hdb/model.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <string>

namespace hdb::adequacy {

struct AdequacyResult {
    std::array<double, kNutrientCount> nar{}; // each capped at 1
    double mar = 0.0;                         // mean of the 16 ratios
};

// Nutrient adequacy of a diet. Gram quantities are recovered from each
// item's kcal quantity via its own energy density, so intake of nutrient n is
// sum over items of amount_per_100g[n] * quantity_kcal / kcal_per_100g.
// Ratios are capped at 1 before averaging.
inline AdequacyResult nutrient_adequacy(const Diet &diet,
                                        const std::map<std::string, NutrientProfile> &profiles,
                                        const NutrientRequirements &requirements,
                                        const ingest::CountryDataset &country) {
    validate(requirements);
    std::array<double, kNutrientCount> intake{};
    for (const DietSelection &sel : diet.selections) {
        const FoodItem *item = country.find_item(sel.item_id);
        if (!item) throw UnknownItemError(sel.item_id);
        auto pit = profiles.find(sel.item_id);
        if (pit == profiles.end()) throw MissingProfileError(sel.item_id);
        double portions_100g = sel.quantity_kcal / item->kcal_per_100g_edible;
        for (std::size_t n = 0; n < kNutrientCount; ++n)
            intake[n] += pit->second.amount_per_100g[n] * portions_100g;
    }
    AdequacyResult r;
    double sum = 0.0;
    for (std::size_t n = 0; n < kNutrientCount; ++n) {
        r.nar[n] = std::min(1.0, intake[n] / requirements.lower_bound[n]);
        sum += r.nar[n];
    }
    r.mar = sum / static_cast<double>(kNutrientCount);
    return r;
}

} // namespace hdb::adequacy
