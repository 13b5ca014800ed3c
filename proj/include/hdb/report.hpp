#pragma once

#include "hdb/adequacy.hpp"
#include "hdb/afford.hpp"
#include "hdb/csv.hpp"
#include "hdb/ingest.hpp"
#include "hdb/metrics.hpp"
#include "hdb/rng.hpp"
#include "hdb/selection.hpp"
#include "hdb/simulate.hpp"
#include "hdb/stats.hpp"

#include <json.hpp>

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hdb::report {

inline constexpr std::string_view kToolVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Computed analysis state
// ---------------------------------------------------------------------------

// Everything derived from one dataset: eligibility, the deterministic diets
// (scenarios 1-3) and the Monte Carlo runs (4-5), all indexed by country in
// country-code order. Ineligible combinations hold nullopt.
struct Analysis {
    ingest::Dataset data;
    std::vector<ingest::Eligibility> eligibility;
    std::array<std::vector<std::optional<selection::DietResult>>, 3> deterministic;
    std::array<std::vector<std::optional<simulate::SimulationResult>>, 2> simulations;
    int iterations = 0;
    std::uint64_t seed = 0;

    const std::optional<selection::DietResult> &det(std::size_t country_idx,
                                                    DietScenario s) const {
        return deterministic[static_cast<std::size_t>(scenario_id(s)) - 1][country_idx];
    }
    const std::optional<simulate::SimulationResult> &sim(std::size_t country_idx,
                                                         DietScenario s) const {
        return simulations[static_cast<std::size_t>(scenario_id(s)) - 4][country_idx];
    }
};

// ---------------------------------------------------------------------------
// Table writers
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fd(double v) { return csv::format_double(v); }

inline std::vector<std::string> group_metric_columns(std::string_view prefix) {
    std::vector<std::string> cols;
    for (FoodGroup g : kFoodGroups) {
        std::string name(to_string(g));
        for (char &c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        cols.push_back(std::string(prefix) + "_" + name);
    }
    return cols;
}

} // namespace detail

inline csv::Writer eligibility_table(const Analysis &a) {
    csv::Writer w({"country_code", "scenario_1", "scenario_2", "scenario_3", "scenario_4",
                   "scenario_5", "notes"});
    for (std::size_t i = 0; i < a.data.countries.size(); ++i) {
        const ingest::Eligibility &e = a.eligibility[i];
        std::string notes;
        for (int s = 0; s < 5; ++s) {
            if (e.reason[s].empty()) continue;
            if (!notes.empty()) notes += " | ";
            notes += "scenario " + std::to_string(s + 1) + ": " + e.reason[s];
        }
        w.row({a.data.countries[i].country_code(), e.scenario[0] ? "1" : "0",
               e.scenario[1] ? "1" : "0", e.scenario[2] ? "1" : "0", e.scenario[3] ? "1" : "0",
               e.scenario[4] ? "1" : "0", notes});
    }
    return w;
}

inline csv::Writer validation_table(const ingest::ValidationReport &report) {
    csv::Writer w({"file", "line", "reason_code", "detail"});
    for (const ingest::DroppedRow &row : report.dropped)
        w.row({row.file, std::to_string(row.line), row.reason_code, row.detail});
    return w;
}

inline csv::Writer diets_table(const Analysis &a) {
    csv::Writer w({"country_code", "scenario", "group", "item_id", "quantity_kcal"});
    for (std::size_t i = 0; i < a.data.countries.size(); ++i) {
        for (DietScenario s :
             {DietScenario::LowestCost, DietScenario::LowestEmissions, DietScenario::MostCommon}) {
            const auto &result = a.det(i, s);
            if (!result) continue;
            for (const DietSelection &sel : result->diet.selections)
                w.row({result->diet.country_code, std::to_string(scenario_id(s)),
                       std::string(to_string(sel.group)), sel.item_id,
                       detail::fd(sel.quantity_kcal)});
        }
    }
    return w;
}

inline csv::Writer metrics_table(const Analysis &a) {
    std::vector<std::string> header = {"country_code", "scenario", "cost_ppp_per_day",
                                       "emissions_kg_per_day"};
    for (const std::string &c : detail::group_metric_columns("cost")) header.push_back(c);
    for (const std::string &c : detail::group_metric_columns("emissions")) header.push_back(c);
    csv::Writer w(header);
    for (std::size_t i = 0; i < a.data.countries.size(); ++i) {
        for (DietScenario s :
             {DietScenario::LowestCost, DietScenario::LowestEmissions, DietScenario::MostCommon}) {
            const auto &result = a.det(i, s);
            if (!result) continue;
            std::vector<std::string> row = {result->diet.country_code,
                                            std::to_string(scenario_id(s)),
                                            detail::fd(result->metrics.cost_ppp_per_day),
                                            detail::fd(result->metrics.emissions_kg_per_day)};
            for (FoodGroup g : kFoodGroups)
                row.push_back(detail::fd(result->metrics.group(g).cost_ppp_per_day));
            for (FoodGroup g : kFoodGroups)
                row.push_back(detail::fd(result->metrics.group(g).emissions_kg_per_day));
            w.row(row);
        }
    }
    return w;
}

inline csv::Writer simulation_summary_table(const Analysis &a) {
    csv::Writer w({"country_code", "scenario", "iterations", "cost_mean", "cost_sd", "cost_p2_5",
                   "cost_p25", "cost_p50", "cost_p75", "cost_p97_5", "emissions_mean",
                   "emissions_sd", "emissions_p2_5", "emissions_p25", "emissions_p50",
                   "emissions_p75", "emissions_p97_5"});
    for (DietScenario s : {DietScenario::WeightedRandom, DietScenario::UniformRandom}) {
        std::vector<std::vector<double>> columns(14);
        std::size_t rows = 0;
        for (std::size_t i = 0; i < a.data.countries.size(); ++i) {
            const auto &result = a.sim(i, s);
            if (!result) continue;
            const simulate::SimulationSummary &sum = result->summary;
            std::array<double, 14> vals = {
                sum.cost.mean,      sum.cost.sd,        sum.cost.p2_5,      sum.cost.p25,
                sum.cost.p50,       sum.cost.p75,       sum.cost.p97_5,     sum.emissions.mean,
                sum.emissions.sd,   sum.emissions.p2_5, sum.emissions.p25,  sum.emissions.p50,
                sum.emissions.p75,  sum.emissions.p97_5};
            std::vector<std::string> row = {sum.country_code, std::to_string(scenario_id(s)),
                                            std::to_string(sum.iterations)};
            for (std::size_t c = 0; c < vals.size(); ++c) {
                row.push_back(detail::fd(vals[c]));
                columns[c].push_back(vals[c]);
            }
            w.row(row);
            ++rows;
        }
        if (rows > 0) {
            // simple per-column mean over countries
            std::vector<std::string> row = {"global_average", std::to_string(scenario_id(s)),
                                            std::to_string(a.iterations)};
            for (const auto &col : columns) {
                double sum = 0.0;
                for (double v : col) sum += v;
                row.push_back(detail::fd(sum / static_cast<double>(col.size())));
            }
            w.row(row);
        }
    }
    return w;
}

inline csv::Writer draws_table(const Analysis &a) {
    csv::Writer w(
        {"country_code", "scenario", "iteration", "cost_ppp_per_day", "emissions_kg_per_day"});
    for (DietScenario s : {DietScenario::WeightedRandom, DietScenario::UniformRandom}) {
        for (std::size_t i = 0; i < a.data.countries.size(); ++i) {
            const auto &result = a.sim(i, s);
            if (!result) continue;
            for (const simulate::DrawRecord &d : result->draws)
                w.row({result->summary.country_code, std::to_string(scenario_id(s)),
                       std::to_string(d.iteration), detail::fd(d.cost_ppp_per_day),
                       detail::fd(d.emissions_kg_per_day)});
        }
    }
    return w;
}

// ---------------------------------------------------------------------------
// Cross-country summary statistics
// ---------------------------------------------------------------------------

namespace detail {

// Scenario samples for one metric: country-level values for scenarios 1-3,
// every Monte Carlo draw for 4-5.
struct ScenarioSamples {
    std::array<std::vector<double>, 5> values;
};

template <typename DetFn, typename DrawFn>
ScenarioSamples collect_samples(const Analysis &a, DetFn det_value, DrawFn draw_value) {
    ScenarioSamples s;
    for (std::size_t i = 0; i < a.data.countries.size(); ++i) {
        for (DietScenario scen :
             {DietScenario::LowestCost, DietScenario::LowestEmissions, DietScenario::MostCommon}) {
            const auto &result = a.det(i, scen);
            if (result) s.values[scenario_id(scen) - 1].push_back(det_value(*result));
        }
        for (DietScenario scen : {DietScenario::WeightedRandom, DietScenario::UniformRandom}) {
            const auto &result = a.sim(i, scen);
            if (!result) continue;
            for (const simulate::DrawRecord &d : result->draws)
                s.values[scenario_id(scen) - 1].push_back(draw_value(d));
        }
    }
    return s;
}

inline void write_scenario_stats(csv::Writer &w, const ScenarioSamples &samples,
                                 const std::vector<std::string> &prefix_fields) {
    const std::vector<double> &baseline = samples.values[0];
    for (int scen = 1; scen <= 5; ++scen) {
        const std::vector<double> &vals = samples.values[scen - 1];
        if (vals.empty()) continue;
        stats::SummaryStats s = stats::summarize(vals);
        std::string p = "na";
        if (scen != 1 && baseline.size() >= 2 && vals.size() >= 2)
            p = stats::format_p_value(stats::welch_t_test(vals, baseline).two_sided_p);
        std::vector<std::string> row = prefix_fields;
        row.push_back(std::to_string(scen));
        row.push_back(std::to_string(s.n));
        row.push_back(fd(s.mean));
        row.push_back(fd(s.sd));
        row.push_back(fd(s.p25));
        row.push_back(fd(s.p50));
        row.push_back(fd(s.p75));
        row.push_back(p);
        w.row(row);
    }
}

} // namespace detail

// Per-scenario totals (one table for costs, one for emissions): n, mean, SD,
// quartiles, and a Welch test against the scenario-1 country sample.
inline csv::Writer scenario_stats_table(const Analysis &a, bool emissions) {
    csv::Writer w({"scenario", "obs", "mean", "sd", "p25", "p50", "p75",
                   "p_value_vs_scenario_1"});
    auto samples = detail::collect_samples(
        a,
        [&](const selection::DietResult &r) {
            return emissions ? r.metrics.emissions_kg_per_day : r.metrics.cost_ppp_per_day;
        },
        [&](const simulate::DrawRecord &d) {
            return emissions ? d.emissions_kg_per_day : d.cost_ppp_per_day;
        });
    detail::write_scenario_stats(w, samples, {});
    return w;
}

// Same layout broken down by food group.
inline csv::Writer group_stats_table(const Analysis &a, bool emissions) {
    csv::Writer w({"group", "scenario", "obs", "mean", "sd", "p25", "p50", "p75",
                   "p_value_vs_scenario_1"});
    for (FoodGroup g : kFoodGroups) {
        auto samples = detail::collect_samples(
            a,
            [&](const selection::DietResult &r) {
                return emissions ? r.metrics.group(g).emissions_kg_per_day
                                 : r.metrics.group(g).cost_ppp_per_day;
            },
            [&](const simulate::DrawRecord &d) {
                return emissions ? d.per_group[group_index(g)].emissions_kg_per_day
                                 : d.per_group[group_index(g)].cost_ppp_per_day;
            });
        detail::write_scenario_stats(w, samples, {std::string(to_string(g))});
    }
    return w;
}

inline csv::Writer item_shares_table(const Analysis &a) {
    csv::Writer w({"scenario", "item_id", "group", "energy_share", "emission_share"});
    for (DietScenario s :
         {DietScenario::LowestCost, DietScenario::LowestEmissions, DietScenario::MostCommon}) {
        std::vector<Diet> diets;
        for (std::size_t i = 0; i < a.data.countries.size(); ++i) {
            const auto &result = a.det(i, s);
            if (result) diets.push_back(result->diet);
        }
        if (diets.empty()) continue;
        for (const metrics::ItemShare &share :
             metrics::item_share_table(diets, a.data.countries))
            w.row({std::to_string(scenario_id(s)), share.item_id,
                   std::string(to_string(share.group)), detail::fd(share.energy_share),
                   detail::fd(share.emission_share)});
    }
    return w;
}

// PUA per country and scenario. Scenarios 1-3 use the diet cost; 4-5 use the
// median draw cost. Countries lacking an income distribution or class
// assignment are skipped and listed in `notices`.
inline csv::Writer pua_table(const Analysis &a, std::vector<std::string> &notices) {
    csv::Writer w({"country_code", "scenario", "diet_cost_ppp_per_day", "pua"});
    const AffordabilityParams &params = a.data.config.afford;
    for (std::size_t i = 0; i < a.data.countries.size(); ++i) {
        const std::string &code = a.data.countries[i].country_code();
        auto dist = a.data.incomes.find(code);
        if (dist == a.data.incomes.end()) {
            notices.push_back("pua: no income distribution for " + code);
            continue;
        }
        auto cls = params.country_class.find(code);
        if (cls == params.country_class.end()) {
            notices.push_back("pua: no income-class assignment for " + code);
            continue;
        }
        auto emit = [&](DietScenario s, double cost) {
            double value = afford::pua(cost, dist->second, params, cls->second);
            w.row({code, std::to_string(scenario_id(s)), detail::fd(cost), detail::fd(value)});
        };
        for (DietScenario s :
             {DietScenario::LowestCost, DietScenario::LowestEmissions, DietScenario::MostCommon}) {
            const auto &result = a.det(i, s);
            if (result) emit(s, result->metrics.cost_ppp_per_day);
        }
        for (DietScenario s : {DietScenario::WeightedRandom, DietScenario::UniformRandom}) {
            const auto &result = a.sim(i, s);
            if (result) emit(s, result->summary.cost.p50);
        }
    }
    return w;
}

// Per-nutrient adequacy ratios plus the MAR row, for scenarios 1-3.
inline csv::Writer adequacy_table(const Analysis &a, std::vector<std::string> &notices) {
    csv::Writer w({"country_code", "scenario", "nutrient", "value"});
    if (!a.data.config.requirements) {
        notices.push_back("adequacy: no nutrient requirements configured");
        return w;
    }
    for (std::size_t i = 0; i < a.data.countries.size(); ++i) {
        const ingest::CountryDataset &country = a.data.countries[i];
        for (DietScenario s :
             {DietScenario::LowestCost, DietScenario::LowestEmissions, DietScenario::MostCommon}) {
            const auto &result = a.det(i, s);
            if (!result) continue;
            try {
                adequacy::AdequacyResult r = adequacy::nutrient_adequacy(
                    result->diet, a.data.profiles, *a.data.config.requirements, country);
                for (std::size_t n = 0; n < kNutrientCount; ++n)
                    w.row({country.country_code(), std::to_string(scenario_id(s)),
                           std::string(kNutrients[n]), detail::fd(r.nar[n])});
                w.row({country.country_code(), std::to_string(scenario_id(s)), "MAR",
                       detail::fd(r.mar)});
            } catch (const MissingProfileError &e) {
                notices.push_back("adequacy: " + country.country_code() + " scenario " +
                                  std::to_string(scenario_id(s)) + ": " + e.what());
            }
        }
    }
    return w;
}

inline csv::Writer item_counts_table(const Analysis &a) {
    std::vector<std::string> header = {"country_code"};
    for (const std::string &c : detail::group_metric_columns("items")) header.push_back(c);
    header.push_back("total");
    csv::Writer w(header);
    for (const ingest::CountryDataset &country : a.data.countries) {
        std::vector<std::string> row = {country.country_code()};
        std::size_t total = 0;
        for (FoodGroup g : kFoodGroups) {
            std::size_t n = country.group_items(g).size();
            row.push_back(std::to_string(n));
            total += n;
        }
        row.push_back(std::to_string(total));
        w.row(row);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Metadata sidecar
// ---------------------------------------------------------------------------

inline std::string file_digest(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "missing";
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(rng::fnv1a64(bytes)));
    return buf;
}

// Machine-readable record of what produced an output directory. Contains no
// timestamps or host details: identical inputs and options must produce
// identical bytes.
inline nlohmann::json run_metadata(const ingest::InputPaths &paths, std::uint64_t seed,
                                   int iterations, const std::vector<std::string> &notices) {
    nlohmann::json meta;
    meta["tool"] = "dietbench";
    meta["tool_version"] = std::string(kToolVersion);
    meta["generator"] = std::string(rng::kGeneratorId);
    meta["seed"] = seed;
    meta["iterations"] = iterations;
    nlohmann::json inputs;
    inputs["items"] = {{"path", paths.items_file}, {"digest", file_digest(paths.items_file)}};
    inputs["ppp"] = {{"path", paths.ppp_file}, {"digest", file_digest(paths.ppp_file)}};
    inputs["fbs"] = {{"path", paths.fbs_file}, {"digest", file_digest(paths.fbs_file)}};
    if (paths.nutrients_file)
        inputs["nutrients"] = {{"path", *paths.nutrients_file},
                               {"digest", file_digest(*paths.nutrients_file)}};
    if (paths.income_file)
        inputs["income"] = {{"path", *paths.income_file},
                            {"digest", file_digest(*paths.income_file)}};
    if (paths.config_file)
        inputs["config"] = {{"path", *paths.config_file},
                            {"digest", file_digest(*paths.config_file)}};
    meta["inputs"] = inputs;
    meta["notices"] = notices;
    return meta;
}

} // namespace hdb::report
