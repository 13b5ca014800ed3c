#include "hdb/model.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hdb;

TEST_CASE("default basket totals") {
    HdbTargets t = default_hdb_targets();
    CHECK(t.total_energy() == 2330.0);
    CHECK(t.total_slots() == 11);
    CHECK(t.energy(FoodGroup::SS) == 1160.0);
    CHECK(t.item_count(FoodGroup::SS) == 2);
    CHECK(t.quantity_per_item(FoodGroup::SS) == 580.0);
    CHECK(t.quantity_per_item(FoodGroup::VEG) == Catch::Approx(110.0 / 3.0).epsilon(1e-15));
    CHECK(t.quantity_per_item(FoodGroup::FRT) == 80.0);
    CHECK(t.quantity_per_item(FoodGroup::ASF) == 150.0);
    CHECK(t.quantity_per_item(FoodGroup::LNS) == 300.0);
    CHECK(t.quantity_per_item(FoodGroup::OF) == 300.0);
}

TEST_CASE("targets reject non-positive entries") {
    std::array<GroupTarget, kGroupCount> t{};
    for (FoodGroup g : kFoodGroups) t[group_index(g)] = {100.0, 1};
    t[group_index(FoodGroup::FRT)].energy_kcal_per_day = 0.0;
    CHECK_THROWS_MATCHES(HdbTargets(t), ValidationError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("energy_kcal_per_day")));
    t[group_index(FoodGroup::FRT)].energy_kcal_per_day = 100.0;
    t[group_index(FoodGroup::OF)].item_count_k = 0;
    CHECK_THROWS_MATCHES(
        HdbTargets(t), ValidationError,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("item_count_k")));
}

TEST_CASE("food item invariants name the offending field") {
    FoodItem it;
    it.country_code = "AAA";
    it.item_id = "rice";
    it.group = FoodGroup::SS;
    it.price_ppp_per_kcal = 0.001;
    it.emissions_kg_per_kcal = 0.0;
    it.kcal_per_100g_edible = 360.0;
    CHECK_NOTHROW(validate(it));

    FoodItem bad = it;
    bad.price_ppp_per_kcal = 0.0;
    CHECK_THROWS_MATCHES(validate(bad), ValidationError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("price_ppp_per_kcal")));
    bad = it;
    bad.emissions_kg_per_kcal = -1e-9;
    CHECK_THROWS_MATCHES(validate(bad), ValidationError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("emissions_kg_per_kcal")));
    bad = it;
    bad.item_id.clear();
    CHECK_THROWS_MATCHES(
        validate(bad), ValidationError,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("item_id")));
}

namespace {

Diet basket_diet(const HdbTargets &t) {
    Diet d;
    d.country_code = "AAA";
    d.scenario = DietScenario::LowestCost;
    for (FoodGroup g : kFoodGroups) {
        for (int i = 0; i < t.item_count(g); ++i) {
            d.selections.push_back({std::string(to_string(g)) + std::to_string(i), g,
                                    t.quantity_per_item(g)});
        }
    }
    return d;
}

} // namespace

TEST_CASE("diet validation enforces quotas, quantities, distinctness") {
    HdbTargets t = default_hdb_targets();
    Diet good = basket_diet(t);
    CHECK(good.selections.size() == 11);
    CHECK_NOTHROW(validate_diet(good, t));

    SECTION("missing slot") {
        Diet d = good;
        d.selections.pop_back();
        CHECK_THROWS_AS(validate_diet(d, t), ValidationError);
    }
    SECTION("wrong quantity") {
        Diet d = good;
        d.selections[0].quantity_kcal *= 1.5;
        CHECK_THROWS_AS(validate_diet(d, t), ValidationError);
    }
    SECTION("duplicate item within group") {
        Diet d = good;
        d.selections[1].item_id = d.selections[0].item_id; // both ASF
        CHECK_THROWS_AS(validate_diet(d, t), ValidationError);
    }
    SECTION("same id in different groups is fine") {
        Diet d = good;
        d.selections[0].item_id = "shared";
        auto veg = std::find_if(d.selections.begin(), d.selections.end(),
                                [](const DietSelection &s) { return s.group == FoodGroup::VEG; });
        veg->item_id = "shared";
        CHECK_NOTHROW(validate_diet(d, t));
    }
}

TEST_CASE("income distribution invariants") {
    IncomeDistribution dist;
    dist.country_code = "AAA";
    dist.points = {{0.5, 2.0}, {1.0, 4.0}};
    CHECK_NOTHROW(validate(dist));

    dist.points = {{0.5, 2.0}};
    CHECK_THROWS_AS(validate(dist), ValidationError);

    dist.points = {{0.5, 2.0}, {0.5, 4.0}}; // p not strictly increasing
    CHECK_THROWS_AS(validate(dist), ValidationError);

    dist.points = {{0.5, 4.0}, {1.0, 2.0}}; // income decreasing
    CHECK_THROWS_AS(validate(dist), ValidationError);
}

TEST_CASE("default non-food shares") {
    CHECK(default_nonfood_share(IncomeClass::LIC) == 0.37);
    CHECK(default_nonfood_share(IncomeClass::LMIC) == 0.44);
    CHECK(default_nonfood_share(IncomeClass::UMIC) == 0.54);
    CHECK(default_nonfood_share(IncomeClass::HIC) == 0.54);
}

TEST_CASE("nutrient name table") {
    CHECK(kNutrientCount == 16);
    CHECK(nutrient_index("protein") == 0);
    CHECK(nutrient_index("vitamin_a") == 15);
    CHECK_FALSE(nutrient_index("sugar"));
}
