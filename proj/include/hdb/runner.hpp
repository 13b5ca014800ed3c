#pragma once

#include "hdb/report.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace hdb::runner {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1; // some countries skipped
inline constexpr int kExitFatal = 2;

struct RunOptions {
    ingest::InputPaths paths;
    std::string out_dir;
    std::vector<int> scenarios; // subset of 1..5; empty = all applicable
    int iterations = 1000;
    std::uint64_t seed = 0;
    int threads = 1;
    bool write_draws = false;
};

namespace detail {

// Index-addressed parallel loop: every index writes only its own slot, so
// results cannot depend on thread count or scheduling.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load()) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    auto count = static_cast<std::size_t>(threads);
    if (count > n) count = n;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (std::thread &t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline bool wants(const RunOptions &opt, int scenario) {
    if (opt.scenarios.empty()) return true;
    for (int s : opt.scenarios)
        if (s == scenario) return true;
    return false;
}

} // namespace detail

// Loads the dataset and computes everything the requested scenarios need.
inline report::Analysis analyze(const RunOptions &opt) {
    report::Analysis a;
    a.data = ingest::load_dataset(opt.paths);
    a.iterations = opt.iterations;
    a.seed = opt.seed;
    const HdbTargets &targets = a.data.config.targets;
    std::size_t n = a.data.countries.size();

    a.eligibility.resize(n);
    for (auto &v : a.deterministic) v.resize(n);
    for (auto &v : a.simulations) v.resize(n);

    detail::parallel_for(n, opt.threads, [&](std::size_t i) {
        const ingest::CountryDataset &country = a.data.countries[i];
        a.eligibility[i] = ingest::eligibility(country, targets);
        for (DietScenario s :
             {DietScenario::LowestCost, DietScenario::LowestEmissions, DietScenario::MostCommon}) {
            int id = scenario_id(s);
            if (!detail::wants(opt, id) || !a.eligibility[i].eligible(s)) continue;
            a.deterministic[id - 1][i] = selection::deterministic_diet(country, targets, s);
        }
        for (DietScenario s : {DietScenario::WeightedRandom, DietScenario::UniformRandom}) {
            int id = scenario_id(s);
            if (!detail::wants(opt, id) || !a.eligibility[i].eligible(s)) continue;
            simulate::SimulationConfig cfg;
            cfg.iterations = opt.iterations;
            cfg.master_seed = opt.seed;
            cfg.scenario = s;
            a.simulations[id - 4][i] = simulate::run_simulation(country, targets, cfg);
        }
    });
    return a;
}

namespace detail {

inline void ensure_out_dir(const std::string &out_dir) {
    std::filesystem::create_directories(out_dir);
}

inline void write(const std::string &out_dir, const std::string &name, const csv::Writer &w) {
    w.write_to((std::filesystem::path(out_dir) / name).string());
}

inline void write_metadata(const RunOptions &opt, const std::vector<std::string> &notices) {
    nlohmann::json meta = report::run_metadata(opt.paths, opt.seed, opt.iterations, notices);
    std::ofstream out(std::filesystem::path(opt.out_dir) / "metadata.json", std::ios::binary);
    out << meta.dump(2) << "\n";
}

// Partial when any country misses any requested scenario.
inline int completion_code(const report::Analysis &a, const RunOptions &opt,
                           std::initializer_list<int> scenario_ids) {
    bool any_eligible = false;
    bool any_skipped = false;
    for (const ingest::Eligibility &e : a.eligibility) {
        for (int id : scenario_ids) {
            if (!wants(opt, id)) continue;
            if (e.scenario[id - 1])
                any_eligible = true;
            else
                any_skipped = true;
        }
    }
    if (!any_eligible) return kExitPartial;
    return any_skipped ? kExitPartial : kExitOk;
}

} // namespace detail

// Prints the eligibility matrix and dropped-row report; writes nothing.
inline int cmd_validate(const RunOptions &opt, std::ostream &log) {
    report::Analysis a;
    a.data = ingest::load_dataset(opt.paths);
    const HdbTargets &targets = a.data.config.targets;
    a.eligibility.resize(a.data.countries.size());
    for (std::size_t i = 0; i < a.data.countries.size(); ++i)
        a.eligibility[i] = ingest::eligibility(a.data.countries[i], targets);

    log << "countries: " << a.data.countries.size() << "\n";
    log << "items loaded: " << a.data.report.items_loaded
        << ", rows dropped: " << a.data.report.dropped.size() << "\n";
    log << "fbs matched items: " << a.data.report.fbs_matched_items
        << ", unmatched: " << a.data.report.fbs_unmatched_items << "\n";
    for (int s = 1; s <= 5; ++s) {
        std::size_t eligible = 0;
        for (const ingest::Eligibility &e : a.eligibility)
            if (e.scenario[s - 1]) ++eligible;
        log << eligible << " countries eligible for scenario " << s << "\n";
    }
    for (std::size_t i = 0; i < a.data.countries.size(); ++i) {
        const ingest::Eligibility &e = a.eligibility[i];
        for (int s = 0; s < 5; ++s) {
            if (!e.reason[s].empty())
                log << a.data.countries[i].country_code() << " ineligible for scenario "
                    << (s + 1) << ": " << e.reason[s] << "\n";
        }
    }
    for (const ingest::DroppedRow &row : a.data.report.dropped)
        log << "dropped " << row.file << ":" << row.line << " " << row.reason_code
            << (row.detail.empty() ? "" : " (" + row.detail + ")") << "\n";

    bool any = false;
    for (const ingest::Eligibility &e : a.eligibility) any = any || e.any();
    return any ? kExitOk : kExitPartial;
}

// Deterministic diets (scenarios 1-3) with their metrics.
inline int cmd_diets(const RunOptions &opt, std::ostream &log) {
    RunOptions scoped = opt;
    if (scoped.scenarios.empty()) scoped.scenarios = {1, 2, 3};
    report::Analysis a = analyze(scoped);
    detail::ensure_out_dir(opt.out_dir);
    detail::write(opt.out_dir, "diets.csv", report::diets_table(a));
    detail::write(opt.out_dir, "metrics.csv", report::metrics_table(a));
    detail::write(opt.out_dir, "eligibility.csv", report::eligibility_table(a));
    detail::write(opt.out_dir, "validation.csv", report::validation_table(a.data.report));
    std::vector<std::string> notices;
    for (std::size_t i = 0; i < a.data.countries.size(); ++i) {
        for (int id : {1, 2, 3}) {
            if (detail::wants(scoped, id) && !a.eligibility[i].scenario[id - 1]) {
                std::string note = a.data.countries[i].country_code() +
                                   " skipped for scenario " + std::to_string(id) + ": " +
                                   a.eligibility[i].reason[id - 1];
                notices.push_back(note);
                log << note << "\n";
            }
        }
    }
    detail::write_metadata(scoped, notices);
    return detail::completion_code(a, scoped, {1, 2, 3});
}

// Monte Carlo scenarios 4-5: per-country distribution summaries and,
// optionally, the draw-level table.
inline int cmd_simulate(const RunOptions &opt, std::ostream &log) {
    RunOptions scoped = opt;
    if (scoped.scenarios.empty()) scoped.scenarios = {4, 5};
    for (int s : scoped.scenarios)
        if (s != 4 && s != 5) throw Error("simulate handles scenarios 4 and 5 only");
    report::Analysis a = analyze(scoped);
    detail::ensure_out_dir(opt.out_dir);
    detail::write(opt.out_dir, "simulation_summary.csv", report::simulation_summary_table(a));
    if (opt.write_draws) detail::write(opt.out_dir, "draws.csv", report::draws_table(a));
    detail::write(opt.out_dir, "eligibility.csv", report::eligibility_table(a));
    detail::write(opt.out_dir, "validation.csv", report::validation_table(a.data.report));
    std::vector<std::string> notices;
    for (std::size_t i = 0; i < a.data.countries.size(); ++i) {
        for (int id : scoped.scenarios) {
            if (!a.eligibility[i].scenario[id - 1]) {
                std::string note = a.data.countries[i].country_code() +
                                   " skipped for scenario " + std::to_string(id) + ": " +
                                   a.eligibility[i].reason[id - 1];
                notices.push_back(note);
                log << note << "\n";
            }
        }
    }
    detail::write_metadata(scoped, notices);
    return detail::completion_code(a, scoped, {4, 5});
}

// Everything the inputs allow: diets, simulations, summary statistics, item
// shares, affordability, adequacy, and item counts. Sections whose inputs
// are missing are dropped with a notice rather than failing the run.
inline int cmd_report(const RunOptions &opt, std::ostream &log) {
    RunOptions scoped = opt;
    scoped.scenarios = {1, 2, 3, 4, 5};
    report::Analysis a = analyze(scoped);
    detail::ensure_out_dir(opt.out_dir);
    std::vector<std::string> notices;

    detail::write(opt.out_dir, "diets.csv", report::diets_table(a));
    detail::write(opt.out_dir, "metrics.csv", report::metrics_table(a));
    detail::write(opt.out_dir, "eligibility.csv", report::eligibility_table(a));
    detail::write(opt.out_dir, "validation.csv", report::validation_table(a.data.report));
    detail::write(opt.out_dir, "simulation_summary.csv", report::simulation_summary_table(a));
    if (opt.write_draws) detail::write(opt.out_dir, "draws.csv", report::draws_table(a));
    detail::write(opt.out_dir, "stats_costs.csv", report::scenario_stats_table(a, false));
    detail::write(opt.out_dir, "stats_emissions.csv", report::scenario_stats_table(a, true));
    detail::write(opt.out_dir, "stats_costs_by_group.csv", report::group_stats_table(a, false));
    detail::write(opt.out_dir, "stats_emissions_by_group.csv",
                  report::group_stats_table(a, true));
    detail::write(opt.out_dir, "item_shares.csv", report::item_shares_table(a));
    detail::write(opt.out_dir, "item_counts.csv", report::item_counts_table(a));

    if (a.data.incomes.empty()) {
        notices.push_back("pua: no income data supplied; section omitted");
    } else if (a.data.config.afford.classes.empty()) {
        notices.push_back("pua: no affordability configuration; section omitted");
    } else {
        detail::write(opt.out_dir, "pua.csv", report::pua_table(a, notices));
    }
    if (a.data.profiles.empty()) {
        notices.push_back("adequacy: no nutrient data supplied; section omitted");
    } else if (!a.data.config.requirements) {
        notices.push_back("adequacy: no nutrient requirements configured; section omitted");
    } else {
        detail::write(opt.out_dir, "adequacy.csv", report::adequacy_table(a, notices));
    }

    for (const std::string &n : notices) log << n << "\n";
    detail::write_metadata(scoped, notices);
    return detail::completion_code(a, scoped, {1, 2, 3, 4, 5});
}

} // namespace hdb::runner
