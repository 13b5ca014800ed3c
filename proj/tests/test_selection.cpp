#include "hdb/selection.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

using namespace hdb;
using namespace hdb::selection;
using oracles::ItemSpec;
using oracles::make_country;

namespace {

// Country with one fully-populated set of groups where only the group under
// test varies; the rest get minimal filler items.
ingest::CountryDataset one_group_country(FoodGroup focus, const std::vector<ItemSpec> &items,
                                         const HdbTargets &targets) {
    std::vector<ItemSpec> specs = items;
    for (FoodGroup g : kFoodGroups) {
        if (g == focus) continue;
        for (int i = 0; i < targets.item_count(g); ++i) {
            ItemSpec s;
            s.id = std::string(to_string(g)) + "_fill" + std::to_string(i);
            s.group = g;
            s.price = 0.01;
            s.emissions = 0.001;
            s.category = "cat_" + s.id;
            s.category_kcal = 100.0;
            specs.push_back(s);
        }
    }
    return make_country("TST", specs);
}

} // namespace

TEST_CASE("lowest cost picks the cheapest oil") {
    HdbTargets t = default_hdb_targets();
    auto country = one_group_country(
        FoodGroup::OF,
        {{"oil_a", FoodGroup::OF, 0.002, 0.0, 100.0, "a", 1.0},
         {"oil_b", FoodGroup::OF, 0.001, 0.0, 100.0, "b", 1.0},
         {"oil_c", FoodGroup::OF, 0.003, 0.0, 100.0, "c", 1.0}},
        t);
    DietResult r = lowest_cost_diet(country, t);
    auto of_sel = std::find_if(r.diet.selections.begin(), r.diet.selections.end(),
                               [](const DietSelection &s) { return s.group == FoodGroup::OF; });
    REQUIRE(of_sel != r.diet.selections.end());
    CHECK(of_sel->item_id == "oil_b");
    CHECK_THAT(r.metrics.group(FoodGroup::OF).cost_ppp_per_day,
               Catch::Matchers::WithinRel(0.30, 1e-12));
}

TEST_CASE("group with exactly k items is selected whole") {
    HdbTargets t = default_hdb_targets();
    auto country = one_group_country(FoodGroup::ASF,
                                     {{"pricey", FoodGroup::ASF, 9.0, 0.5, 100.0, "p", 1.0},
                                      {"costly", FoodGroup::ASF, 8.0, 0.4, 100.0, "q", 1.0}},
                                     t);
    DietResult r = lowest_cost_diet(country, t);
    auto ids = oracles::sorted_ids(r.diet);
    CHECK(std::count(ids.begin(), ids.end(), "pricey") == 1);
    CHECK(std::count(ids.begin(), ids.end(), "costly") == 1);
}

TEST_CASE("insufficient items signals ineligibility with the group name") {
    HdbTargets t = default_hdb_targets();
    auto country = one_group_country(FoodGroup::VEG,
                                     {{"veg_1", FoodGroup::VEG, 0.001, 0.0, 100.0, "v1", 1.0},
                                      {"veg_2", FoodGroup::VEG, 0.001, 0.0, 100.0, "v2", 1.0}},
                                     t);
    try {
        lowest_cost_diet(country, t);
        FAIL("expected InsufficientItemsError");
    } catch (const InsufficientItemsError &e) {
        CHECK(e.group() == "VEG");
    }
    CHECK_THROWS_AS(lowest_emissions_diet(country, t), InsufficientItemsError);
}

TEST_CASE("paper-anchored staples: maize and wheat are the least-emitting pair") {
    HdbTargets t = default_hdb_targets();
    // per-kg factors over a uniform 360 kcal/100g density
    auto per_kcal = [](double per_kg) { return per_kg / 3600.0; };
    auto country = one_group_country(
        FoodGroup::SS,
        {{"rice", FoodGroup::SS, 0.001, per_kcal(2.19), 360.0, "rice", 1.0},
         {"wheat", FoodGroup::SS, 0.0012, per_kcal(0.57), 360.0, "wheat", 1.0},
         {"maize", FoodGroup::SS, 0.0014, per_kcal(0.48), 360.0, "maize", 1.0},
         {"oats", FoodGroup::SS, 0.002, per_kcal(0.67), 360.0, "oats", 1.0}},
        t);
    DietResult r = lowest_emissions_diet(country, t);
    auto ids = oracles::sorted_ids(r.diet);
    CHECK(std::count(ids.begin(), ids.end(), "maize") == 1);
    CHECK(std::count(ids.begin(), ids.end(), "wheat") == 1);
    CHECK(std::count(ids.begin(), ids.end(), "rice") == 0);
}

TEST_CASE("equal emissions break toward the cheaper item") {
    HdbTargets t = default_hdb_targets();
    auto country = one_group_country(FoodGroup::LNS,
                                     {{"dear", FoodGroup::LNS, 0.005, 0.001, 100.0, "d", 1.0},
                                      {"cheap", FoodGroup::LNS, 0.002, 0.001, 100.0, "c", 1.0}},
                                     t);
    DietResult r = lowest_emissions_diet(country, t);
    auto lns = std::find_if(r.diet.selections.begin(), r.diet.selections.end(),
                            [](const DietSelection &s) { return s.group == FoodGroup::LNS; });
    CHECK(lns->item_id == "cheap");
}

TEST_CASE("most common takes top categories by supply, cheapest item within") {
    HdbTargets t = default_hdb_targets();
    auto country = one_group_country(
        FoodGroup::SS,
        {{"rice_dear", FoodGroup::SS, 0.002, 0.0, 360.0, "rice", 800.0},
         {"rice_cheap", FoodGroup::SS, 0.001, 0.0, 360.0, "rice", 800.0},
         {"wheat", FoodGroup::SS, 0.0015, 0.0, 360.0, "wheat", 400.0},
         {"maize", FoodGroup::SS, 0.0005, 0.0, 360.0, "maize", 100.0}},
        t);
    DietResult r = most_common_diet(country, t);
    auto ids = oracles::sorted_ids(r.diet);
    // rice (800) and wheat (400) outrank maize (100); within rice the cheap one wins
    CHECK(std::count(ids.begin(), ids.end(), "rice_cheap") == 1);
    CHECK(std::count(ids.begin(), ids.end(), "wheat") == 1);
    CHECK(std::count(ids.begin(), ids.end(), "maize") == 0);
    CHECK(std::count(ids.begin(), ids.end(), "rice_dear") == 0);
}

TEST_CASE("category supply ties break by category name, stable under permutation") {
    HdbTargets t = default_hdb_targets();
    std::vector<ItemSpec> ss = {{"item_z", FoodGroup::SS, 0.001, 0.0, 360.0, "zeta", 500.0},
                                {"item_a", FoodGroup::SS, 0.001, 0.0, 360.0, "alpha", 500.0},
                                {"item_m", FoodGroup::SS, 0.001, 0.0, 360.0, "mu", 500.0}};
    auto pick = [&](const std::vector<ItemSpec> &order) {
        auto country = one_group_country(FoodGroup::SS, order, t);
        return oracles::sorted_ids(most_common_diet(country, t).diet);
    };
    auto baseline = pick(ss);
    // all supplies tie at 500; alpha and mu are the lexicographically first categories
    CHECK(std::count(baseline.begin(), baseline.end(), "item_a") == 1);
    CHECK(std::count(baseline.begin(), baseline.end(), "item_m") == 1);
    std::sort(ss.begin(), ss.end(), [](const ItemSpec &a, const ItemSpec &b) { return a.id > b.id; });
    CHECK(pick(ss) == baseline);
}

TEST_CASE("most common is unavailable without enough matched categories") {
    HdbTargets t = default_hdb_targets();
    // two categories for a k=2 group but one has no FBS record
    auto country = one_group_country(
        FoodGroup::FRT,
        {{"apple", FoodGroup::FRT, 0.001, 0.0, 100.0, "apples", 100.0},
         {"pear", FoodGroup::FRT, 0.001, 0.0, 100.0, "pears", -1.0}, // unmatched
         {"plum", FoodGroup::FRT, 0.001, 0.0, 100.0, "", -1.0}},     // no category
        t);
    CHECK_THROWS_AS(most_common_diet(country, t), InsufficientItemsError);
}

TEST_CASE("selection equals brute force on randomized fixtures") {
    HdbTargets t = default_hdb_targets();
    std::mt19937 gen(12345);
    for (int trial = 0; trial < 40; ++trial) {
        auto country = oracles::random_country(gen, "RND", t, 12);
        DietResult d1 = lowest_cost_diet(country, t);
        DietResult d2 = lowest_emissions_diet(country, t);
        DietResult d3 = most_common_diet(country, t);
        CHECK(oracles::sorted_ids(d1.diet) == oracles::brute_force_scenario(country, t, 1));
        CHECK(oracles::sorted_ids(d2.diet) == oracles::brute_force_scenario(country, t, 2));
        CHECK(oracles::sorted_ids(d3.diet) == oracles::brute_force_most_common(country, t));
        validate_diet(d1.diet, t);
        validate_diet(d2.diet, t);
        validate_diet(d3.diet, t);
        CHECK(d1.metrics.cost_ppp_per_day <= d2.metrics.cost_ppp_per_day);
        CHECK(d1.metrics.cost_ppp_per_day <= d3.metrics.cost_ppp_per_day);
        CHECK(d2.metrics.emissions_kg_per_day <= d1.metrics.emissions_kg_per_day);
        CHECK(d2.metrics.emissions_kg_per_day <= d3.metrics.emissions_kg_per_day);
    }
}

TEST_CASE("selection is invariant under input row permutation") {
    HdbTargets t = default_hdb_targets();
    std::mt19937 gen(777);
    auto country = oracles::random_country(gen, "PRM", t, 8);

    // rebuild with reversed item order
    std::vector<FoodItem> reversed(country.items().rbegin(), country.items().rend());
    ingest::CountryDataset shuffled("PRM", std::move(reversed));

    for (int scenario : {1, 2, 3}) {
        auto s = static_cast<DietScenario>(scenario);
        auto a = deterministic_diet(country, t, s);
        auto b = deterministic_diet(shuffled, t, s);
        CHECK(oracles::sorted_ids(a.diet) == oracles::sorted_ids(b.diet));
        CHECK(a.metrics.cost_ppp_per_day == b.metrics.cost_ppp_per_day);
    }
}
