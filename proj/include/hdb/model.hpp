#pragma once

#include "hdb/errors.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace hdb {

// Relative tolerance used for energy bookkeeping checks throughout the engine.
inline constexpr double kRelTol = 1e-9;

inline bool nearly_equal(double a, double b, double rel_tol = kRelTol) {
    double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= rel_tol * scale;
}

// ---------------------------------------------------------------------------
// Food groups
// ---------------------------------------------------------------------------

// The six food groups of the Healthy Diet Basket. Every item belongs to
// exactly one group.
enum class FoodGroup : int { ASF = 0, VEG = 1, SS = 2, FRT = 3, LNS = 4, OF = 5 };

inline constexpr std::size_t kGroupCount = 6;

inline constexpr std::array<FoodGroup, kGroupCount> kFoodGroups = {
    FoodGroup::ASF, FoodGroup::VEG, FoodGroup::SS,
    FoodGroup::FRT, FoodGroup::LNS, FoodGroup::OF};

inline constexpr std::string_view to_string(FoodGroup g) {
    switch (g) {
    case FoodGroup::ASF: return "ASF";
    case FoodGroup::VEG: return "VEG";
    case FoodGroup::SS:  return "SS";
    case FoodGroup::FRT: return "FRT";
    case FoodGroup::LNS: return "LNS";
    case FoodGroup::OF:  return "OF";
    }
    return "?";
}

inline std::optional<FoodGroup> parse_food_group(std::string_view s) {
    for (FoodGroup g : kFoodGroups) {
        if (s == to_string(g)) return g;
    }
    return std::nullopt;
}

inline constexpr std::size_t group_index(FoodGroup g) { return static_cast<std::size_t>(g); }

// ---------------------------------------------------------------------------
// Healthy Diet Basket targets
// ---------------------------------------------------------------------------

struct GroupTarget {
    double energy_kcal_per_day = 0.0;
    int item_count_k = 0;
};

// Per-group energy quotas and item counts. Defaults follow the Healthy Diet
// Basket: 2,330 kcal/day across 11 item slots in 6 groups, each selected item
// contributing an equal share E_g / k_g of its group's quota.
class HdbTargets {
  public:
    explicit HdbTargets(const std::array<GroupTarget, kGroupCount> &targets) : targets_(targets) {
        for (FoodGroup g : kFoodGroups) {
            const GroupTarget &t = targets_[group_index(g)];
            if (!(t.energy_kcal_per_day > 0.0) || !std::isfinite(t.energy_kcal_per_day)) {
                throw ValidationError("energy_kcal_per_day",
                                      "must be a positive finite value for group " +
                                          std::string(to_string(g)));
            }
            if (t.item_count_k < 1) {
                throw ValidationError("item_count_k", "must be a positive integer for group " +
                                                          std::string(to_string(g)));
            }
        }
    }

    double energy(FoodGroup g) const { return targets_[group_index(g)].energy_kcal_per_day; }
    int item_count(FoodGroup g) const { return targets_[group_index(g)].item_count_k; }

    // Per-item quantity Q = E_g / k_g, in kcal.
    double quantity_per_item(FoodGroup g) const {
        return energy(g) / static_cast<double>(item_count(g));
    }

    double total_energy() const {
        double sum = 0.0;
        for (const GroupTarget &t : targets_) sum += t.energy_kcal_per_day;
        return sum;
    }

    int total_slots() const {
        int n = 0;
        for (const GroupTarget &t : targets_) n += t.item_count_k;
        return n;
    }

  private:
    std::array<GroupTarget, kGroupCount> targets_;
};

// Default basket: 300 kcal animal-source foods over 2 items, 110 kcal
// vegetables over 3, 1,160 kcal starchy staples over 2, 160 kcal fruits
// over 2, 300 kcal legumes/nuts/seeds over 1, 300 kcal oils and fats over 1.
inline HdbTargets default_hdb_targets() {
    std::array<GroupTarget, kGroupCount> t{};
    t[group_index(FoodGroup::ASF)] = {300.0, 2};
    t[group_index(FoodGroup::VEG)] = {110.0, 3};
    t[group_index(FoodGroup::SS)] = {1160.0, 2};
    t[group_index(FoodGroup::FRT)] = {160.0, 2};
    t[group_index(FoodGroup::LNS)] = {300.0, 1};
    t[group_index(FoodGroup::OF)] = {300.0, 1};
    return HdbTargets(t);
}

// ---------------------------------------------------------------------------
// Food items
// ---------------------------------------------------------------------------

// One retail item in one country, fully normalized: price in PPP dollars per
// kcal, emissions in kg CO2e per kcal. kcal_per_100g_edible is kept so gram
// quantities can be recovered from kcal quantities downstream.
struct FoodItem {
    std::string country_code;
    std::string item_id;
    std::string display_name;
    FoodGroup group = FoodGroup::ASF;
    double price_ppp_per_kcal = 0.0;
    double emissions_kg_per_kcal = 0.0;
    double kcal_per_100g_edible = 0.0;
    std::optional<std::string> fbs_category;
    std::optional<double> fbs_category_kcal; // kcal/capita/day supplied for the category
};

inline void validate(const FoodItem &it) {
    if (it.country_code.empty()) throw ValidationError("country_code", "must not be empty");
    if (it.item_id.empty()) throw ValidationError("item_id", "must not be empty");
    if (!(it.price_ppp_per_kcal > 0.0) || !std::isfinite(it.price_ppp_per_kcal))
        throw ValidationError("price_ppp_per_kcal", "must be strictly positive");
    if (!(it.emissions_kg_per_kcal >= 0.0) || !std::isfinite(it.emissions_kg_per_kcal))
        throw ValidationError("emissions_kg_per_kcal", "must be non-negative");
    if (!(it.kcal_per_100g_edible > 0.0) || !std::isfinite(it.kcal_per_100g_edible))
        throw ValidationError("kcal_per_100g_edible", "must be strictly positive");
    if (it.fbs_category_kcal && !(*it.fbs_category_kcal >= 0.0))
        throw ValidationError("fbs_category_kcal", "must be non-negative");
}

// ---------------------------------------------------------------------------
// Diets
// ---------------------------------------------------------------------------

// Stable scenario numbering used in every output table.
enum class DietScenario : int {
    LowestCost = 1,
    LowestEmissions = 2,
    MostCommon = 3,
    WeightedRandom = 4,
    UniformRandom = 5,
};

inline constexpr std::array<DietScenario, 5> kAllScenarios = {
    DietScenario::LowestCost, DietScenario::LowestEmissions, DietScenario::MostCommon,
    DietScenario::WeightedRandom, DietScenario::UniformRandom};

inline constexpr int scenario_id(DietScenario s) { return static_cast<int>(s); }

inline std::optional<DietScenario> parse_scenario(int id) {
    if (id >= 1 && id <= 5) return static_cast<DietScenario>(id);
    return std::nullopt;
}

struct DietSelection {
    std::string item_id;
    FoodGroup group = FoodGroup::ASF;
    double quantity_kcal = 0.0;
};

// A scenario-tagged item selection for one country. For Monte Carlo scenarios
// a Diet holds a single draw and iteration_index identifies it.
struct Diet {
    std::string country_code;
    DietScenario scenario = DietScenario::LowestCost;
    std::vector<DietSelection> selections;
    std::optional<int> iteration_index;
};

// Checks group quotas, per-item quantities, within-group distinctness, and
// total energy against the targets. Pure function of (diet, targets).
inline void validate_diet(const Diet &diet, const HdbTargets &targets) {
    std::array<int, kGroupCount> counts{};
    std::array<std::unordered_set<std::string>, kGroupCount> seen;
    double total = 0.0;
    for (const DietSelection &sel : diet.selections) {
        std::size_t gi = group_index(sel.group);
        counts[gi] += 1;
        double expected = targets.quantity_per_item(sel.group);
        if (!nearly_equal(sel.quantity_kcal, expected)) {
            throw ValidationError("quantity_kcal",
                                  "selection " + sel.item_id + " must carry " +
                                      std::to_string(expected) + " kcal");
        }
        if (!seen[gi].insert(sel.item_id).second) {
            throw ValidationError("selections",
                                  "item " + sel.item_id + " appears twice in group " +
                                      std::string(to_string(sel.group)));
        }
        total += sel.quantity_kcal;
    }
    for (FoodGroup g : kFoodGroups) {
        if (counts[group_index(g)] != targets.item_count(g)) {
            throw ValidationError("selections",
                                  "group " + std::string(to_string(g)) + " has " +
                                      std::to_string(counts[group_index(g)]) +
                                      " selections, needs " +
                                      std::to_string(targets.item_count(g)));
        }
    }
    if (!nearly_equal(total, targets.total_energy())) {
        throw ValidationError("selections", "total energy " + std::to_string(total) +
                                                " != " + std::to_string(targets.total_energy()));
    }
}

inline bool diet_is_valid(const Diet &diet, const HdbTargets &targets) {
    try {
        validate_diet(diet, targets);
        return true;
    } catch (const ValidationError &) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// Diet metrics
// ---------------------------------------------------------------------------

struct GroupMetrics {
    double cost_ppp_per_day = 0.0;
    double emissions_kg_per_day = 0.0;
};

struct DietMetrics {
    double cost_ppp_per_day = 0.0;
    double emissions_kg_per_day = 0.0;
    std::array<GroupMetrics, kGroupCount> per_group{};

    const GroupMetrics &group(FoodGroup g) const { return per_group[group_index(g)]; }
};

// ---------------------------------------------------------------------------
// Income distributions and affordability parameters
// ---------------------------------------------------------------------------

struct IncomePoint {
    double population_share = 0.0;    // p in (0, 1]
    double income_ppp_per_day = 0.0;
};

// Per-country quantile function of daily income, as an ordered list of
// (population share, income) points.
struct IncomeDistribution {
    std::string country_code;
    std::vector<IncomePoint> points;
};

inline void validate(const IncomeDistribution &dist) {
    if (dist.points.size() < 2) throw ValidationError("points", "need at least 2 points");
    double prev_p = 0.0;
    double prev_income = -1.0;
    for (const IncomePoint &pt : dist.points) {
        if (!(pt.population_share > 0.0) || !(pt.population_share <= 1.0))
            throw ValidationError("population_share", "must lie in (0, 1]");
        if (!(pt.population_share > prev_p))
            throw ValidationError("population_share", "must be strictly increasing");
        if (!(pt.income_ppp_per_day >= 0.0))
            throw ValidationError("income_ppp_per_day", "must be non-negative");
        if (pt.income_ppp_per_day < prev_income)
            throw ValidationError("income_ppp_per_day", "must be non-decreasing");
        prev_p = pt.population_share;
        prev_income = pt.income_ppp_per_day;
    }
}

enum class IncomeClass : int { LIC = 0, LMIC = 1, UMIC = 2, HIC = 3 };

inline constexpr std::array<IncomeClass, 4> kIncomeClasses = {
    IncomeClass::LIC, IncomeClass::LMIC, IncomeClass::UMIC, IncomeClass::HIC};

inline constexpr std::string_view to_string(IncomeClass c) {
    switch (c) {
    case IncomeClass::LIC:  return "LIC";
    case IncomeClass::LMIC: return "LMIC";
    case IncomeClass::UMIC: return "UMIC";
    case IncomeClass::HIC:  return "HIC";
    }
    return "?";
}

inline std::optional<IncomeClass> parse_income_class(std::string_view s) {
    for (IncomeClass c : kIncomeClasses) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

// Default non-food expenditure shares by income class. Poverty lines carry no
// default and must come from configuration.
inline constexpr double default_nonfood_share(IncomeClass c) {
    switch (c) {
    case IncomeClass::LIC:  return 0.37;
    case IncomeClass::LMIC: return 0.44;
    case IncomeClass::UMIC: return 0.54;
    case IncomeClass::HIC:  return 0.54;
    }
    return 0.0;
}

struct ClassParams {
    double nonfood_share = 0.0;          // s in (0, 1)
    double poverty_line_ppp_per_day = 0.0;
};

struct AffordabilityParams {
    std::map<IncomeClass, ClassParams> classes;
    std::map<std::string, IncomeClass> country_class;
};

inline void validate(const AffordabilityParams &params) {
    for (const auto &[cls, p] : params.classes) {
        if (!(p.nonfood_share > 0.0) || !(p.nonfood_share < 1.0))
            throw ValidationError("nonfood_share", "must lie in (0, 1) for class " +
                                                       std::string(to_string(cls)));
        if (!(p.poverty_line_ppp_per_day > 0.0))
            throw ValidationError("poverty_line_ppp_per_day", "must be positive for class " +
                                                                  std::string(to_string(cls)));
    }
}

// ---------------------------------------------------------------------------
// Nutrients
// ---------------------------------------------------------------------------

// Protein plus 15 essential micronutrients, in a fixed canonical order.
inline constexpr std::size_t kNutrientCount = 16;

inline constexpr std::array<std::string_view, kNutrientCount> kNutrients = {
    "protein",   "calcium",   "iron",       "magnesium", "phosphorus", "zinc",
    "copper",    "selenium",  "vitamin_c",  "thiamin",   "riboflavin", "niacin",
    "vitamin_b6", "folate",   "vitamin_b12", "vitamin_a"};

inline std::optional<std::size_t> nutrient_index(std::string_view name) {
    for (std::size_t i = 0; i < kNutrientCount; ++i) {
        if (kNutrients[i] == name) return i;
    }
    return std::nullopt;
}

// Amounts per 100 g edible portion. Nutrients absent from the source data
// are zero.
struct NutrientProfile {
    std::string item_id;
    std::array<double, kNutrientCount> amount_per_100g{};
};

inline void validate(const NutrientProfile &profile) {
    for (std::size_t i = 0; i < kNutrientCount; ++i) {
        if (!(profile.amount_per_100g[i] >= 0.0))
            throw ValidationError("amount_per_100g",
                                  "must be non-negative for " + std::string(kNutrients[i]));
    }
}

// Lower bounds for a representative adult, same units as NutrientProfile.
struct NutrientRequirements {
    std::array<double, kNutrientCount> lower_bound{};
};

inline void validate(const NutrientRequirements &req) {
    for (std::size_t i = 0; i < kNutrientCount; ++i) {
        if (!(req.lower_bound[i] > 0.0))
            throw ValidationError("lower_bound",
                                  "must be positive for " + std::string(kNutrients[i]));
    }
}

} // namespace hdb
