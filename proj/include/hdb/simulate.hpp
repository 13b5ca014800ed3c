#pragma once

#include "hdb/ingest.hpp"
#include "hdb/metrics.hpp"
#include "hdb/model.hpp"
#include "hdb/rng.hpp"
#include "hdb/stats.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace hdb::simulate {

struct SimulationConfig {
    int iterations = 1000;
    std::uint64_t master_seed = 0;
    DietScenario scenario = DietScenario::WeightedRandom;
};

inline void validate(const SimulationConfig &cfg) {
    if (cfg.iterations < 1) throw ValidationError("iterations", "must be at least 1");
    if (cfg.scenario != DietScenario::WeightedRandom &&
        cfg.scenario != DietScenario::UniformRandom)
        throw ValidationError("scenario", "must be 4 or 5");
}

struct MetricSummary {
    double mean = 0.0;
    double sd = 0.0;
    double p2_5 = 0.0;
    double p25 = 0.0;
    double p50 = 0.0;
    double p75 = 0.0;
    double p97_5 = 0.0;
};

struct SimulationSummary {
    std::string country_code;
    DietScenario scenario = DietScenario::WeightedRandom;
    int iterations = 0;
    MetricSummary cost;
    MetricSummary emissions;
};

struct DrawRecord {
    int iteration = 0;
    double cost_ppp_per_day = 0.0;
    double emissions_kg_per_day = 0.0;
    std::array<GroupMetrics, kGroupCount> per_group{};
};

struct SimulationResult {
    SimulationSummary summary;
    std::vector<DrawRecord> draws;
};

namespace detail {

// Candidates are taken in item_id order, so draws do not depend on input row
// order. Scenario 4 drops zero-weight items up front: a weight proportional
// to zero supply means the item cannot be drawn.
struct GroupCandidates {
    std::vector<const FoodItem *> items;
    std::vector<double> weights; // empty for uniform sampling
};

inline GroupCandidates weighted_candidates(const ingest::CountryDataset &country, FoodGroup g,
                                           std::size_t k) {
    GroupCandidates c;
    for (const FoodItem *it : country.group_items(g)) {
        double w = country.fbs_item_weight(*it);
        if (w > 0.0) {
            c.items.push_back(it);
            c.weights.push_back(w);
        }
    }
    if (c.items.size() < k)
        throw InsufficientItemsError(std::string(to_string(g)), c.items.size(), k);
    return c;
}

inline GroupCandidates uniform_candidates(const ingest::CountryDataset &country, FoodGroup g,
                                          std::size_t k) {
    GroupCandidates c;
    c.items = country.group_items(g);
    if (c.items.size() < k)
        throw InsufficientItemsError(std::string(to_string(g)), c.items.size(), k);
    return c;
}

inline Diet draw_diet(const ingest::CountryDataset &country, const HdbTargets &targets,
                      DietScenario scenario, rng::CounterRng &rng) {
    Diet diet;
    diet.country_code = country.country_code();
    diet.scenario = scenario;
    for (FoodGroup g : kFoodGroups) {
        auto k = static_cast<std::size_t>(targets.item_count(g));
        GroupCandidates c = scenario == DietScenario::WeightedRandom
                                ? weighted_candidates(country, g, k)
                                : uniform_candidates(country, g, k);
        std::vector<std::size_t> picked;
        if (scenario == DietScenario::WeightedRandom) {
            try {
                picked = rng::sample_weighted_without_replacement(c.weights, k, rng);
            } catch (const AllZeroWeightsError &) {
                throw AllZeroWeightsError(std::string(to_string(g)));
            }
        } else {
            picked = rng::sample_uniform_without_replacement(c.items.size(), k, rng);
        }
        double quantity = targets.quantity_per_item(g);
        for (std::size_t idx : picked)
            diet.selections.push_back({c.items[idx]->item_id, g, quantity});
    }
    validate_diet(diet, targets);
    return diet;
}

inline MetricSummary summarize_metric(std::vector<double> values) {
    stats::SummaryStats s = stats::summarize(values);
    return {s.mean, s.sd, s.p2_5, s.p25, s.p50, s.p75, s.p97_5};
}

} // namespace detail

// One consumption-weighted draw: within each group, k_g distinct items
// sampled sequentially with probability proportional to each item's share of
// its FBS category's kcal supply.
inline Diet draw_weighted_diet(const ingest::CountryDataset &country, const HdbTargets &targets,
                               rng::CounterRng &rng) {
    return detail::draw_diet(country, targets, DietScenario::WeightedRandom, rng);
}

// One equal-weight draw: k_g distinct items per group, uniformly.
inline Diet draw_uniform_diet(const ingest::CountryDataset &country, const HdbTargets &targets,
                              rng::CounterRng &rng) {
    return detail::draw_diet(country, targets, DietScenario::UniformRandom, rng);
}

// Runs N independent draws. Each iteration has its own counter sequence
// within the (seed, country, scenario) stream, so the result is
// bit-reproducible regardless of execution order.
inline SimulationResult run_simulation(const ingest::CountryDataset &country,
                                       const HdbTargets &targets, const SimulationConfig &cfg) {
    validate(cfg);
    std::uint64_t stream = rng::derive_stream(cfg.master_seed, country.country_code(),
                                              scenario_id(cfg.scenario));
    SimulationResult result;
    result.draws.reserve(static_cast<std::size_t>(cfg.iterations));
    std::vector<double> costs, emissions;
    costs.reserve(result.draws.capacity());
    emissions.reserve(result.draws.capacity());

    for (int t = 0; t < cfg.iterations; ++t) {
        rng::CounterRng rng(stream, static_cast<std::uint64_t>(t));
        Diet diet = detail::draw_diet(country, targets, cfg.scenario, rng);
        diet.iteration_index = t;
        DietMetrics m = metrics::diet_metrics(diet, country);
        DrawRecord rec;
        rec.iteration = t;
        rec.cost_ppp_per_day = m.cost_ppp_per_day;
        rec.emissions_kg_per_day = m.emissions_kg_per_day;
        rec.per_group = m.per_group;
        result.draws.push_back(rec);
        costs.push_back(m.cost_ppp_per_day);
        emissions.push_back(m.emissions_kg_per_day);
    }

    result.summary.country_code = country.country_code();
    result.summary.scenario = cfg.scenario;
    result.summary.iterations = cfg.iterations;
    result.summary.cost = detail::summarize_metric(std::move(costs));
    result.summary.emissions = detail::summarize_metric(std::move(emissions));
    return result;
}

} // namespace hdb::simulate
