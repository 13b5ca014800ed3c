#include "hdb/ingest.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

using namespace hdb;
using namespace hdb::ingest;

namespace {

RawItemRecord raw(double price, double ppp_unused, double weight, double edible, double kcal100,
                  double factor) {
    (void)ppp_unused;
    RawItemRecord r;
    r.country_code = "AAA";
    r.item_id = "x";
    r.group_label = "OF";
    r.price_local = price;
    r.unit_net_weight_kg = weight;
    r.edible_fraction = edible;
    r.kcal_per_100g_edible = kcal100;
    r.emission_factor_kg_per_kg = factor;
    return r;
}

} // namespace

TEST_CASE("conversion chain matches hand-computed values") {
    // price_local, ppp, unit_kg, edible, kcal100, emissions factor,
    // expected PPP$/kcal, expected kg CO2e/kcal
    struct Row {
        double price, ppp, w, ef, kcal, factor, exp_price, exp_emis;
    };
    const Row rows[] = {
        {2.0, 2.0, 1.0, 1.0, 100.0, 3.0, 0.001, 0.003},
        {150.0, 50.0, 0.4, 1.0, 360.0, 2.19, 0.0020833333333333333, 0.0006083333333333333},
        {89.5, 17.25, 1.0, 0.87, 364.0, 0.57, 0.00163837495171828, 0.00017999242137173172},
        {3.2, 0.8, 0.5, 0.78, 365.0, 0.48, 0.0028099754127151387, 0.0001685985247629083},
        {12.0, 4.0, 2.0, 1.0, 389.0, 0.67, 0.00038560411311053987, 0.00017223650385604113},
        {7.5, 3.0, 0.25, 0.52, 60.0, 1.1, 0.03205128205128205, 0.0035256410256410257},
        {45.0, 15.0, 1.5, 0.91, 23.0, 0.35, 0.009555661729574774, 0.0016722408026755853},
        {0.99, 1.0, 0.2, 0.77, 52.0, 0.43, 0.012362637362637362, 0.001073926073926074},
        {640.0, 128.0, 5.0, 1.0, 884.0, 7.6, 0.00011312217194570136, 0.0008597285067873303},
        {19.99, 6.5, 0.75, 0.64, 155.0, 4.5, 0.00413358147229115, 0.0045362903225806455},
        {5.4, 1.8, 0.33, 0.95, 346.0, 0.9, 0.002765716182205382, 0.0002738059020383328},
        {220.0, 110.0, 1.0, 0.89, 61.0, 13.5, 0.003683919690550746, 0.024866457911217537},
        {14.25, 9.5, 0.9, 1.0, 717.0, 9.0, 0.00023245002324500232, 0.0012552301255230125},
        {2.75, 1.1, 0.5, 0.94, 89.0, 1.3, 0.005976571838393498, 0.0015539086779823093},
        {99.0, 33.0, 2.5, 0.82, 336.0, 2.5, 0.00043554006968641115, 0.0009073751451800233},
        {1.5, 0.75, 0.125, 0.66, 31.0, 0.7, 0.07820136852394917, 0.003421309872922776},
        {33.0, 22.0, 0.6, 1.0, 265.0, 24.0, 0.0009433962264150943, 0.009056603773584906},
        {8.2, 4.1, 0.45, 0.73, 47.0, 0.28, 0.012953787363580428, 0.0008160886039055669},
        {120.0, 60.0, 3.0, 0.88, 353.0, 1.06, 0.00021461069619709846, 0.00034123100695338654},
        {0.6, 0.3, 0.1, 0.5, 200.0, 0.0, 0.02, 0.0},
    };
    for (const Row &r : rows) {
        RawItemRecord rec = raw(r.price, 0, r.w, r.ef, r.kcal, r.factor);
        PppFactor f{"AAA", r.ppp};
        CHECK_THAT(price_to_ppp_per_kcal(rec, f),
                   Catch::Matchers::WithinRel(r.exp_price, 1e-12));
        if (r.exp_emis == 0.0)
            CHECK(emissions_to_kg_per_kcal(rec) == 0.0);
        else
            CHECK_THAT(emissions_to_kg_per_kcal(rec),
                       Catch::Matchers::WithinRel(r.exp_emis, 1e-12));
    }
}

TEST_CASE("conversion chain linearity properties") {
    std::mt19937 gen(20210901);
    std::uniform_real_distribution<double> price(0.01, 500.0);
    std::uniform_real_distribution<double> ppp(0.1, 200.0);
    std::uniform_real_distribution<double> weight(0.05, 10.0);
    std::uniform_real_distribution<double> edible(0.05, 1.0);
    std::uniform_real_distribution<double> kcal(10.0, 900.0);
    std::uniform_real_distribution<double> factor(0.0, 60.0);
    for (int i = 0; i < 1000; ++i) {
        RawItemRecord r = raw(price(gen), 0, weight(gen), edible(gen), kcal(gen), factor(gen));
        PppFactor f{"AAA", ppp(gen)};

        // halving the edible fraction doubles cost and emissions per kcal
        RawItemRecord half = r;
        half.edible_fraction = r.edible_fraction / 2.0;
        CHECK_THAT(price_to_ppp_per_kcal(half, f),
                   Catch::Matchers::WithinRel(2.0 * price_to_ppp_per_kcal(r, f), 1e-12));
        if (r.emission_factor_kg_per_kg > 0.0)
            CHECK_THAT(emissions_to_kg_per_kcal(half),
                       Catch::Matchers::WithinRel(2.0 * emissions_to_kg_per_kcal(r), 1e-12));

        // doubling the PPP factor halves PPP cost
        PppFactor f2{"AAA", 2.0 * f.ppp_local_per_international_dollar};
        CHECK_THAT(price_to_ppp_per_kcal(r, f2),
                   Catch::Matchers::WithinRel(0.5 * price_to_ppp_per_kcal(r, f), 1e-12));

        // doubling kcal density halves per-kcal emissions
        RawItemRecord dense = r;
        dense.kcal_per_100g_edible = 2.0 * r.kcal_per_100g_edible;
        if (r.emission_factor_kg_per_kg > 0.0)
            CHECK_THAT(emissions_to_kg_per_kcal(dense),
                       Catch::Matchers::WithinRel(0.5 * emissions_to_kg_per_kcal(r), 1e-12));
    }
}

TEST_CASE("clean fixture loads three countries with no drops") {
    InputPaths paths;
    paths.items_file = HDB_FIXTURES_DIR "/items.csv";
    paths.ppp_file = HDB_FIXTURES_DIR "/ppp.csv";
    paths.fbs_file = HDB_FIXTURES_DIR "/fbs.csv";
    paths.nutrients_file = HDB_FIXTURES_DIR "/nutrients.csv";
    paths.income_file = HDB_FIXTURES_DIR "/income.csv";
    paths.config_file = HDB_FIXTURES_DIR "/config.json";
    Dataset ds = load_dataset(paths);

    REQUIRE(ds.countries.size() == 3);
    CHECK(ds.report.dropped.empty());
    CHECK(ds.countries[0].country_code() == "AAA");
    CHECK(ds.countries[1].country_code() == "BBB");
    CHECK(ds.countries[2].country_code() == "CCC");
    CHECK(ds.countries[0].items().size() == 20);
    CHECK(ds.countries[2].items().size() == 18);

    // normalized values from hand-round numbers
    const FoodItem *rice = ds.countries[0].find_item("rice");
    REQUIRE(rice);
    CHECK_THAT(rice->price_ppp_per_kcal, Catch::Matchers::WithinRel(0.001, 1e-12));
    CHECK_THAT(rice->emissions_kg_per_kcal, Catch::Matchers::WithinRel(2.19 / 3600.0, 1e-12));
    REQUIRE(rice->fbs_category_kcal);
    CHECK(*rice->fbs_category_kcal == 800.0);

    // CCC has no tomato/spinach categories
    const FoodItem *ccc_milk = ds.countries[2].find_item("milk");
    REQUIRE(ccc_milk);
    REQUIRE(ccc_milk->fbs_category_kcal);
    CHECK(*ccc_milk->fbs_category_kcal == 100.0);
    const FoodItem *ccc_beef = ds.countries[2].find_item("beef");
    REQUIRE(ccc_beef);
    CHECK_FALSE(ccc_beef->fbs_category_kcal);

    // AAA eligible everywhere, BBB loses scenarios 3/4 to vegetables,
    // CCC has two vegetables and is eligible nowhere
    const HdbTargets &t = ds.config.targets;
    Eligibility ea = eligibility(ds.countries[0], t);
    CHECK(ea.scenario == std::array<bool, 5>{true, true, true, true, true});
    Eligibility eb = eligibility(ds.countries[1], t);
    CHECK(eb.scenario == std::array<bool, 5>{true, true, false, false, true});
    CHECK_THAT(eb.reason[2], Catch::Matchers::ContainsSubstring("VEG"));
    Eligibility ec = eligibility(ds.countries[2], t);
    CHECK(ec.scenario == std::array<bool, 5>{false, false, false, false, false});
    CHECK_FALSE(ec.any());

    // config round trip
    REQUIRE(ds.config.requirements);
    CHECK(ds.config.requirements->lower_bound[0] == 50.0);
    CHECK(ds.config.afford.country_class.at("AAA") == IncomeClass::UMIC);
    CHECK(ds.config.afford.classes.at(IncomeClass::UMIC).nonfood_share == 0.54);
    CHECK(ds.config.afford.classes.at(IncomeClass::LIC).poverty_line_ppp_per_day == 2.15);

    // income distributions
    REQUIRE(ds.incomes.count("AAA"));
    CHECK(ds.incomes.at("AAA").points.size() == 10);
    CHECK_FALSE(ds.incomes.count("CCC"));
}

TEST_CASE("dirty fixture drops rows with machine-readable reasons") {
    InputPaths paths;
    paths.items_file = HDB_FIXTURES_DIR "/items_dirty.csv";
    paths.ppp_file = HDB_FIXTURES_DIR "/ppp_dirty.csv";
    paths.fbs_file = HDB_FIXTURES_DIR "/fbs_dirty.csv";
    Dataset ds = load_dataset(paths);

    REQUIRE(ds.countries.size() == 1);
    CHECK(ds.countries[0].items().size() == 1); // only good_oil survives
    REQUIRE(ds.report.dropped.size() == 6);

    auto reason_of = [&](std::size_t line) -> std::string {
        for (const DroppedRow &row : ds.report.dropped)
            if (row.line == line) return row.reason_code;
        return "";
    };
    CHECK(reason_of(2) == "edible_fraction_out_of_range");
    CHECK(reason_of(3) == "price_not_positive");
    CHECK(reason_of(4) == "price_not_positive");
    CHECK(reason_of(5) == "unknown_food_group");
    CHECK(reason_of(6) == "emission_factor_negative");
    CHECK(reason_of(7) == "missing_ppp_factor");
}

TEST_CASE("schema problems are fatal with line numbers") {
    ValidationReport report;

    SECTION("bad header") {
        std::istringstream in("country,factor\nAAA,1\n");
        CHECK_THROWS_AS(parse_ppp_csv(in, "ppp.csv", report), CsvError);
    }
    SECTION("unparsable number") {
        std::istringstream in("country_code,ppp_factor\nAAA,abc\n");
        try {
            parse_ppp_csv(in, "ppp.csv", report);
            FAIL("expected CsvError");
        } catch (const CsvError &e) {
            CHECK(e.line() == 2);
        }
    }
    SECTION("duplicate country in ppp") {
        std::istringstream in("country_code,ppp_factor\nAAA,1\nAAA,2\n");
        CHECK_THROWS_AS(parse_ppp_csv(in, "ppp.csv", report), CsvError);
    }
    SECTION("duplicate (country, item)") {
        std::istringstream in(
            "country_code,item_id,display_name,food_group,price_local,unit_net_weight_kg,"
            "edible_fraction,kcal_per_100g_edible,emission_factor_kg_per_kg,fbs_category\n"
            "AAA,rice,Rice,SS,1,1,1,360,0.5,\n"
            "AAA,rice,Rice again,SS,2,1,1,360,0.5,\n");
        std::map<std::string, PppFactor> ppp{{"AAA", {"AAA", 1.0}}};
        CHECK_THROWS_AS(parse_items_csv(in, "items.csv", ppp, report), CsvError);
    }
    SECTION("wrong field count") {
        std::istringstream in("country_code,ppp_factor\nAAA\n");
        CHECK_THROWS_AS(parse_ppp_csv(in, "ppp.csv", report), CsvError);
    }
    SECTION("duplicate (country, category) in fbs") {
        std::istringstream in(
            "country_code,fbs_category,kcal_per_capita_per_day\nAAA,rice,1\nAAA,rice,2\n");
        CHECK_THROWS_AS(parse_fbs_csv(in, "fbs.csv", report), CsvError);
    }
}

TEST_CASE("attach_fbs_shares joins on (country, category)") {
    std::vector<FoodItem> items(3);
    items[0].country_code = "AAA";
    items[0].item_id = "a";
    items[0].fbs_category = "rice";
    items[1].country_code = "AAA";
    items[1].item_id = "b";
    items[1].fbs_category = "quinoa"; // no record
    items[2].country_code = "BBB";
    items[2].item_id = "c";
    items[2].fbs_category = "rice"; // other country's rice
    std::vector<FbsRecord> fbs = {{"AAA", "rice", 500.0}, {"BBB", "rice", 200.0}};
    attach_fbs_shares(items, fbs);
    REQUIRE(items[0].fbs_category_kcal);
    CHECK(*items[0].fbs_category_kcal == 500.0);
    CHECK_FALSE(items[1].fbs_category_kcal);
    REQUIRE(items[2].fbs_category_kcal);
    CHECK(*items[2].fbs_category_kcal == 200.0);
}

TEST_CASE("category kcal is shared by all matched items, split downstream") {
    std::vector<FoodItem> items(2);
    for (auto &it : items) {
        it.country_code = "AAA";
        it.group = FoodGroup::SS;
        it.price_ppp_per_kcal = 0.001;
        it.kcal_per_100g_edible = 360.0;
        it.fbs_category = "rice";
    }
    items[0].item_id = "rice_long";
    items[1].item_id = "rice_short";
    attach_fbs_shares(items, {{"AAA", "rice", 500.0}});
    CHECK(*items[0].fbs_category_kcal == 500.0);
    CHECK(*items[1].fbs_category_kcal == 500.0);

    ingest::CountryDataset country("AAA", std::move(items));
    CHECK(country.category_share_count("rice") == 2);
    CHECK(country.fbs_item_weight(*country.find_item("rice_long")) == 250.0);
    CHECK(country.fbs_item_weight(*country.find_item("rice_short")) == 250.0);
}

TEST_CASE("income parsing validates rows") {
    ValidationReport report;
    std::istringstream in("country_code,percentile,income_ppp_per_day\n"
                          "AAA,0,1\n"    // percentile out of range
                          "AAA,50,-2\n"  // negative income
                          "AAA,20,1\n"
                          "AAA,40,0.5\n" // breaks monotonicity after sort
                          "AAA,60,3\n"
                          "BBB,10,1\n"); // lone point -> too few
    auto incomes = parse_income_csv(in, "income.csv", report);
    REQUIRE(incomes.count("AAA"));
    CHECK(incomes.at("AAA").points.size() == 2);
    CHECK_FALSE(incomes.count("BBB"));

    std::vector<std::string> reasons;
    for (const DroppedRow &row : report.dropped) reasons.push_back(row.reason_code);
    CHECK_THAT(reasons, Catch::Matchers::UnorderedEquals(std::vector<std::string>{
                            "percentile_out_of_range", "income_negative",
                            "income_not_monotone", "too_few_income_points"}));
}

TEST_CASE("loading is deterministic") {
    InputPaths paths;
    paths.items_file = HDB_FIXTURES_DIR "/items.csv";
    paths.ppp_file = HDB_FIXTURES_DIR "/ppp.csv";
    paths.fbs_file = HDB_FIXTURES_DIR "/fbs.csv";
    Dataset a = load_dataset(paths);
    Dataset b = load_dataset(paths);
    REQUIRE(a.countries.size() == b.countries.size());
    for (std::size_t i = 0; i < a.countries.size(); ++i) {
        REQUIRE(a.countries[i].items().size() == b.countries[i].items().size());
        for (std::size_t j = 0; j < a.countries[i].items().size(); ++j) {
            const FoodItem &x = a.countries[i].items()[j];
            const FoodItem &y = b.countries[i].items()[j];
            CHECK(x.item_id == y.item_id);
            CHECK(x.price_ppp_per_kcal == y.price_ppp_per_kcal);
            CHECK(x.emissions_kg_per_kcal == y.emissions_kg_per_kcal);
        }
    }
}
