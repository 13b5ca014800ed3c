#pragma once

#include "hdb/config.hpp"
#include "hdb/csv.hpp"
#include "hdb/errors.hpp"
#include "hdb/model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hdb::ingest {

// ---------------------------------------------------------------------------
// Raw input records
// ---------------------------------------------------------------------------

// One items.csv row before normalization: local price per unit sold plus the
// composition data needed to express it per kcal.
struct RawItemRecord {
    std::string country_code;
    std::string item_id;
    std::string display_name;
    std::string group_label;
    double price_local = 0.0;            // local currency per unit sold
    double unit_net_weight_kg = 0.0;     // as purchased
    double edible_fraction = 0.0;        // (0, 1]
    double kcal_per_100g_edible = 0.0;
    double emission_factor_kg_per_kg = 0.0; // cradle-to-retail, per kg as purchased
    std::optional<std::string> fbs_category;
};

struct PppFactor {
    std::string country_code;
    double ppp_local_per_international_dollar = 0.0;
};

struct FbsRecord {
    std::string country_code;
    std::string fbs_category;
    double kcal_per_capita_per_day = 0.0;
};

// ---------------------------------------------------------------------------
// Unit conversion chain
// ---------------------------------------------------------------------------

// Local price per unit -> PPP dollars per kcal. The unit provides
// weight_kg * edible_fraction * kcal_per_100g * 10 kcal of dietary energy
// (x10 converts kcal/100 g to kcal/kg).
inline double price_to_ppp_per_kcal(const RawItemRecord &r, const PppFactor &f) {
    double kcal_per_unit =
        r.unit_net_weight_kg * r.edible_fraction * r.kcal_per_100g_edible * 10.0;
    return (r.price_local / f.ppp_local_per_international_dollar) / kcal_per_unit;
}

// Emission factor per kg as purchased -> kg CO2e per kcal. One kg as
// purchased yields edible_fraction * kcal_per_100g * 10 kcal.
inline double emissions_to_kg_per_kcal(const RawItemRecord &r) {
    return r.emission_factor_kg_per_kg /
           (r.edible_fraction * r.kcal_per_100g_edible * 10.0);
}

// ---------------------------------------------------------------------------
// Validation report
// ---------------------------------------------------------------------------

struct DroppedRow {
    std::string file;
    std::size_t line = 0;
    std::string reason_code; // machine readable
    std::string detail;
};

struct ValidationReport {
    std::vector<DroppedRow> dropped;
    std::size_t items_loaded = 0;
    std::size_t fbs_matched_items = 0;   // items carrying an FBS kcal share
    std::size_t fbs_unmatched_items = 0; // items excluded from scenarios 3 and 4

    void drop(const std::string &file, std::size_t line, std::string reason,
              std::string detail = "") {
        dropped.push_back({file, line, std::move(reason), std::move(detail)});
    }
};

// ---------------------------------------------------------------------------
// Per-country dataset
// ---------------------------------------------------------------------------

class CountryDataset {
  public:
    CountryDataset(std::string country_code, std::vector<FoodItem> items)
        : country_code_(std::move(country_code)), items_(std::move(items)) {
        std::sort(items_.begin(), items_.end(),
                  [](const FoodItem &a, const FoodItem &b) { return a.item_id < b.item_id; });
        for (const FoodItem &it : items_) {
            if (it.fbs_category) category_counts_[*it.fbs_category] += 1;
        }
    }

    const std::string &country_code() const { return country_code_; }
    const std::vector<FoodItem> &items() const { return items_; }

    const FoodItem *find_item(const std::string &item_id) const {
        auto it = std::lower_bound(
            items_.begin(), items_.end(), item_id,
            [](const FoodItem &a, const std::string &id) { return a.item_id < id; });
        if (it == items_.end() || it->item_id != item_id) return nullptr;
        return &*it;
    }

    // Items of one group, in item_id order.
    std::vector<const FoodItem *> group_items(FoodGroup g) const {
        std::vector<const FoodItem *> out;
        for (const FoodItem &it : items_) {
            if (it.group == g) out.push_back(&it);
        }
        return out;
    }

    // Number of items in this country sharing an FBS category; used to split
    // category-level kcal supply evenly across matched items.
    std::size_t category_share_count(const std::string &category) const {
        auto it = category_counts_.find(category);
        return it == category_counts_.end() ? 0 : it->second;
    }

    // Scenario-4 sampling weight: the item's equal share of its category's
    // kcal supply. Zero when the item has no FBS match.
    double fbs_item_weight(const FoodItem &item) const {
        if (!item.fbs_category || !item.fbs_category_kcal) return 0.0;
        auto n = category_share_count(*item.fbs_category);
        if (n == 0) return 0.0;
        return *item.fbs_category_kcal / static_cast<double>(n);
    }

  private:
    std::string country_code_;
    std::vector<FoodItem> items_;
    std::map<std::string, std::size_t> category_counts_;
};

// ---------------------------------------------------------------------------
// Scenario eligibility
// ---------------------------------------------------------------------------

struct Eligibility {
    std::array<bool, 5> scenario{};             // index 0 = scenario 1
    std::array<std::string, 5> reason{};        // empty when eligible

    bool eligible(DietScenario s) const { return scenario[scenario_id(s) - 1]; }
    bool any() const {
        return std::any_of(scenario.begin(), scenario.end(), [](bool b) { return b; });
    }
};

inline Eligibility eligibility(const CountryDataset &ds, const HdbTargets &targets) {
    Eligibility e;
    for (int i = 0; i < 5; ++i) e.scenario[i] = true;
    for (FoodGroup g : kFoodGroups) {
        auto items = ds.group_items(g);
        auto k = static_cast<std::size_t>(targets.item_count(g));
        auto note = [&](int scen, const std::string &what, std::size_t have) {
            e.scenario[scen - 1] = false;
            std::string &r = e.reason[scen - 1];
            if (!r.empty()) r += "; ";
            r += std::string(to_string(g)) + ": " + std::to_string(have) + " " + what +
                 ", need " + std::to_string(k);
        };
        if (items.size() < k) {
            note(1, "items", items.size());
            note(2, "items", items.size());
            note(5, "items", items.size());
        }
        std::set<std::string> categories;
        std::size_t weighted = 0;
        for (const FoodItem *it : items) {
            if (it->fbs_category && it->fbs_category_kcal) categories.insert(*it->fbs_category);
            if (ds.fbs_item_weight(*it) > 0.0) ++weighted;
        }
        if (categories.size() < k) note(3, "matched categories", categories.size());
        if (weighted < k) note(4, "weighted items", weighted);
    }
    return e;
}

// ---------------------------------------------------------------------------
// File parsing
// ---------------------------------------------------------------------------

namespace detail {

inline void expect_header(const std::vector<std::string> &got,
                          const std::vector<std::string> &want, const std::string &file) {
    if (got != want) {
        std::string expected;
        for (std::size_t i = 0; i < want.size(); ++i) {
            if (i > 0) expected += ',';
            expected += want[i];
        }
        throw CsvError(file, 1, "unexpected header; expected: " + expected);
    }
}

inline void expect_field_count(const std::vector<std::string> &row, std::size_t n,
                               const std::string &file, std::size_t line) {
    if (row.size() != n)
        throw CsvError(file, line, "expected " + std::to_string(n) + " fields, got " +
                                       std::to_string(row.size()));
}

} // namespace detail

inline std::map<std::string, PppFactor> parse_ppp_csv(std::istream &in, const std::string &file,
                                                      ValidationReport &report) {
    csv::Reader reader(in, file);
    auto header = reader.next_row();
    if (!header) throw CsvError(file, 0, "empty file");
    detail::expect_header(*header, {"country_code", "ppp_factor"}, file);
    std::map<std::string, PppFactor> out;
    while (auto row = reader.next_row()) {
        detail::expect_field_count(*row, 2, file, reader.line());
        const std::string &country = (*row)[0];
        double ppp = csv::parse_double((*row)[1], file, reader.line(), "ppp_factor");
        if (country.empty()) {
            report.drop(file, reader.line(), "country_code_empty");
            continue;
        }
        if (!(ppp > 0.0)) {
            report.drop(file, reader.line(), "ppp_factor_not_positive", country);
            continue;
        }
        if (out.count(country))
            throw CsvError(file, reader.line(), "duplicate country: " + country);
        out[country] = PppFactor{country, ppp};
    }
    return out;
}

inline std::vector<FbsRecord> parse_fbs_csv(std::istream &in, const std::string &file,
                                            ValidationReport &report) {
    csv::Reader reader(in, file);
    auto header = reader.next_row();
    if (!header) throw CsvError(file, 0, "empty file");
    detail::expect_header(*header, {"country_code", "fbs_category", "kcal_per_capita_per_day"},
                          file);
    std::vector<FbsRecord> out;
    std::set<std::pair<std::string, std::string>> seen;
    while (auto row = reader.next_row()) {
        detail::expect_field_count(*row, 3, file, reader.line());
        FbsRecord rec{(*row)[0], (*row)[1],
                      csv::parse_double((*row)[2], file, reader.line(), "kcal_per_capita_per_day")};
        if (rec.country_code.empty()) {
            report.drop(file, reader.line(), "country_code_empty");
            continue;
        }
        if (rec.fbs_category.empty()) {
            report.drop(file, reader.line(), "fbs_category_empty", rec.country_code);
            continue;
        }
        if (!(rec.kcal_per_capita_per_day >= 0.0)) {
            report.drop(file, reader.line(), "fbs_kcal_negative",
                        rec.country_code + "/" + rec.fbs_category);
            continue;
        }
        if (!seen.insert({rec.country_code, rec.fbs_category}).second)
            throw CsvError(file, reader.line(),
                           "duplicate (country, category): " + rec.country_code + ", " +
                               rec.fbs_category);
        out.push_back(std::move(rec));
    }
    return out;
}

// Joins category-level kcal supply onto items. Items without a match keep an
// empty fbs_category_kcal and stay out of scenarios 3 and 4.
inline void attach_fbs_shares(std::vector<FoodItem> &items, const std::vector<FbsRecord> &fbs) {
    std::map<std::pair<std::string, std::string>, double> supply;
    for (const FbsRecord &rec : fbs)
        supply[{rec.country_code, rec.fbs_category}] = rec.kcal_per_capita_per_day;
    for (FoodItem &item : items) {
        item.fbs_category_kcal.reset();
        if (!item.fbs_category) continue;
        auto it = supply.find({item.country_code, *item.fbs_category});
        if (it != supply.end()) item.fbs_category_kcal = it->second;
    }
}

inline std::vector<FoodItem> parse_items_csv(std::istream &in, const std::string &file,
                                             const std::map<std::string, PppFactor> &ppp,
                                             ValidationReport &report) {
    csv::Reader reader(in, file);
    auto header = reader.next_row();
    if (!header) throw CsvError(file, 0, "empty file");
    detail::expect_header(*header,
                          {"country_code", "item_id", "display_name", "food_group",
                           "price_local", "unit_net_weight_kg", "edible_fraction",
                           "kcal_per_100g_edible", "emission_factor_kg_per_kg", "fbs_category"},
                          file);
    std::vector<FoodItem> out;
    std::set<std::pair<std::string, std::string>> seen;
    while (auto row = reader.next_row()) {
        detail::expect_field_count(*row, 10, file, reader.line());
        std::size_t line = reader.line();
        RawItemRecord raw;
        raw.country_code = (*row)[0];
        raw.item_id = (*row)[1];
        raw.display_name = (*row)[2];
        raw.group_label = (*row)[3];
        raw.price_local = csv::parse_double((*row)[4], file, line, "price_local");
        raw.unit_net_weight_kg = csv::parse_double((*row)[5], file, line, "unit_net_weight_kg");
        raw.edible_fraction = csv::parse_double((*row)[6], file, line, "edible_fraction");
        raw.kcal_per_100g_edible =
            csv::parse_double((*row)[7], file, line, "kcal_per_100g_edible");
        raw.emission_factor_kg_per_kg =
            csv::parse_double((*row)[8], file, line, "emission_factor_kg_per_kg");
        if (!(*row)[9].empty()) raw.fbs_category = (*row)[9];

        if (raw.country_code.empty()) {
            report.drop(file, line, "country_code_empty");
            continue;
        }
        if (raw.item_id.empty()) {
            report.drop(file, line, "item_id_empty", raw.country_code);
            continue;
        }
        std::string key = raw.country_code + "/" + raw.item_id;
        auto group = parse_food_group(raw.group_label);
        if (!group) {
            report.drop(file, line, "unknown_food_group", key + ": " + raw.group_label);
            continue;
        }
        if (!(raw.price_local > 0.0)) {
            report.drop(file, line, "price_not_positive", key);
            continue;
        }
        if (!(raw.unit_net_weight_kg > 0.0)) {
            report.drop(file, line, "unit_net_weight_not_positive", key);
            continue;
        }
        if (!(raw.edible_fraction > 0.0 && raw.edible_fraction <= 1.0)) {
            report.drop(file, line, "edible_fraction_out_of_range", key);
            continue;
        }
        if (!(raw.kcal_per_100g_edible > 0.0)) {
            report.drop(file, line, "kcal_density_not_positive", key);
            continue;
        }
        if (raw.emission_factor_kg_per_kg < 0.0) {
            report.drop(file, line, "emission_factor_negative", key);
            continue;
        }
        auto fit = ppp.find(raw.country_code);
        if (fit == ppp.end()) {
            report.drop(file, line, "missing_ppp_factor", key);
            continue;
        }
        if (!seen.insert({raw.country_code, raw.item_id}).second)
            throw CsvError(file, line, "duplicate (country, item_id): " + key);

        FoodItem item;
        item.country_code = raw.country_code;
        item.item_id = raw.item_id;
        item.display_name = raw.display_name;
        item.group = *group;
        item.price_ppp_per_kcal = price_to_ppp_per_kcal(raw, fit->second);
        item.emissions_kg_per_kcal = emissions_to_kg_per_kcal(raw);
        item.kcal_per_100g_edible = raw.kcal_per_100g_edible;
        item.fbs_category = raw.fbs_category;
        validate(item);
        out.push_back(std::move(item));
    }
    return out;
}

inline std::map<std::string, NutrientProfile>
parse_nutrients_csv(std::istream &in, const std::string &file, ValidationReport &report) {
    csv::Reader reader(in, file);
    auto header = reader.next_row();
    if (!header) throw CsvError(file, 0, "empty file");
    detail::expect_header(*header, {"item_id", "nutrient", "amount_per_100g_edible"}, file);
    std::map<std::string, NutrientProfile> out;
    std::set<std::pair<std::string, std::string>> seen;
    while (auto row = reader.next_row()) {
        detail::expect_field_count(*row, 3, file, reader.line());
        const std::string &item_id = (*row)[0];
        const std::string &nutrient = (*row)[1];
        double amount = csv::parse_double((*row)[2], file, reader.line(), "amount_per_100g_edible");
        if (item_id.empty()) {
            report.drop(file, reader.line(), "item_id_empty");
            continue;
        }
        auto idx = nutrient_index(nutrient);
        if (!idx) {
            report.drop(file, reader.line(), "unknown_nutrient", item_id + ": " + nutrient);
            continue;
        }
        if (amount < 0.0) {
            report.drop(file, reader.line(), "negative_amount", item_id + ": " + nutrient);
            continue;
        }
        if (!seen.insert({item_id, nutrient}).second)
            throw CsvError(file, reader.line(),
                           "duplicate (item_id, nutrient): " + item_id + ", " + nutrient);
        auto [it, inserted] = out.try_emplace(item_id);
        if (inserted) it->second.item_id = item_id;
        it->second.amount_per_100g[*idx] = amount;
    }
    return out;
}

inline std::map<std::string, IncomeDistribution>
parse_income_csv(std::istream &in, const std::string &file, ValidationReport &report) {
    csv::Reader reader(in, file);
    auto header = reader.next_row();
    if (!header) throw CsvError(file, 0, "empty file");
    detail::expect_header(*header, {"country_code", "percentile", "income_ppp_per_day"}, file);

    struct Row {
        double percentile;
        double income;
        std::size_t line;
    };
    std::map<std::string, std::vector<Row>> rows;
    std::set<std::pair<std::string, double>> seen;
    while (auto row = reader.next_row()) {
        detail::expect_field_count(*row, 3, file, reader.line());
        const std::string &country = (*row)[0];
        double pct = csv::parse_double((*row)[1], file, reader.line(), "percentile");
        double income = csv::parse_double((*row)[2], file, reader.line(), "income_ppp_per_day");
        if (country.empty()) {
            report.drop(file, reader.line(), "country_code_empty");
            continue;
        }
        if (!(pct > 0.0 && pct <= 100.0)) {
            report.drop(file, reader.line(), "percentile_out_of_range", country);
            continue;
        }
        if (income < 0.0) {
            report.drop(file, reader.line(), "income_negative", country);
            continue;
        }
        if (!seen.insert({country, pct}).second)
            throw CsvError(file, reader.line(),
                           "duplicate (country, percentile): " + country + ", " +
                               csv::format_double(pct));
        rows[country].push_back({pct, income, reader.line()});
    }

    std::map<std::string, IncomeDistribution> out;
    for (auto &[country, list] : rows) {
        std::sort(list.begin(), list.end(),
                  [](const Row &a, const Row &b) { return a.percentile < b.percentile; });
        IncomeDistribution dist;
        dist.country_code = country;
        double prev_income = -1.0;
        for (const Row &r : list) {
            if (r.income < prev_income) {
                report.drop(file, r.line, "income_not_monotone", country);
                continue;
            }
            dist.points.push_back({r.percentile / 100.0, r.income});
            prev_income = r.income;
        }
        if (dist.points.size() < 2) {
            report.drop(file, list.back().line, "too_few_income_points", country);
            continue;
        }
        validate(dist);
        out[country] = std::move(dist);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dataset assembly
// ---------------------------------------------------------------------------

struct InputPaths {
    std::string items_file;
    std::string ppp_file;
    std::string fbs_file;
    std::optional<std::string> nutrients_file;
    std::optional<std::string> income_file;
    std::optional<std::string> config_file;
};

struct Dataset {
    std::vector<CountryDataset> countries; // sorted by country code
    std::map<std::string, NutrientProfile> profiles;
    std::map<std::string, IncomeDistribution> incomes;
    Config config;
    ValidationReport report;

    const CountryDataset *find_country(const std::string &code) const {
        auto it = std::lower_bound(countries.begin(), countries.end(), code,
                                   [](const CountryDataset &c, const std::string &k) {
                                       return c.country_code() < k;
                                   });
        if (it == countries.end() || it->country_code() != code) return nullptr;
        return &*it;
    }
};

namespace detail {

inline std::ifstream open_or_throw(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw CsvError(path, 0, "cannot open file");
    return in;
}

} // namespace detail

// Loads and normalizes every input. Row-level problems are dropped and
// reported; schema-level problems throw CsvError. The result is a pure
// function of the input bytes.
inline Dataset load_dataset(const InputPaths &paths) {
    Dataset ds;

    auto ppp_in = detail::open_or_throw(paths.ppp_file);
    auto ppp = parse_ppp_csv(ppp_in, paths.ppp_file, ds.report);

    auto items_in = detail::open_or_throw(paths.items_file);
    std::vector<FoodItem> items = parse_items_csv(items_in, paths.items_file, ppp, ds.report);

    auto fbs_in = detail::open_or_throw(paths.fbs_file);
    auto fbs = parse_fbs_csv(fbs_in, paths.fbs_file, ds.report);
    attach_fbs_shares(items, fbs);

    ds.report.items_loaded = items.size();
    for (const FoodItem &it : items) {
        if (it.fbs_category_kcal)
            ++ds.report.fbs_matched_items;
        else
            ++ds.report.fbs_unmatched_items;
    }

    std::map<std::string, std::vector<FoodItem>> by_country;
    for (FoodItem &it : items) by_country[it.country_code].push_back(std::move(it));
    for (auto &[code, list] : by_country)
        ds.countries.emplace_back(code, std::move(list));

    if (paths.nutrients_file) {
        auto in = detail::open_or_throw(*paths.nutrients_file);
        ds.profiles = parse_nutrients_csv(in, *paths.nutrients_file, ds.report);
        for (const auto &[id, profile] : ds.profiles) validate(profile);
    }
    if (paths.income_file) {
        auto in = detail::open_or_throw(*paths.income_file);
        ds.incomes = parse_income_csv(in, *paths.income_file, ds.report);
    }
    if (paths.config_file) ds.config = parse_config_file(*paths.config_file);

    return ds;
}

} // namespace hdb::ingest
