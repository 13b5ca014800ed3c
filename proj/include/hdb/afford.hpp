#pragma once

#include "hdb/errors.hpp"
#include "hdb/model.hpp"

#include <algorithm>
#include <string>

namespace hdb::afford {

// Population share whose income falls strictly below a threshold, from the
// piecewise-linear inverse of the quantile points. Left-continuous: a point
// whose income equals the threshold contributes exactly its own share, and
// mass sitting exactly at the threshold is not counted. The quantile
// function is extended flat below the first and above the last point.
inline double headcount_below(const IncomeDistribution &dist, double threshold) {
    validate(dist);
    const auto &pts = dist.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].income_ppp_per_day >= threshold) {
            if (pts[i].income_ppp_per_day == threshold) return pts[i].population_share;
            if (i == 0) return 0.0;
            double lo = pts[i - 1].income_ppp_per_day;
            double hi = pts[i].income_ppp_per_day;
            double frac = (threshold - lo) / (hi - lo);
            return std::clamp(pts[i - 1].population_share +
                                  frac * (pts[i].population_share -
                                          pts[i - 1].population_share),
                              0.0, 1.0);
        }
    }
    return 1.0; // everyone sits below the threshold
}

inline IncomeClass class_for(const AffordabilityParams &params, const std::string &country_code) {
    auto it = params.country_class.find(country_code);
    if (it == params.country_class.end()) throw MissingClassError(country_code);
    return it->second;
}

// Prevalence of unaffordability: the share of the population whose income
// cannot cover the diet cost plus basic non-food spending, the latter being
// the class non-food share times the class poverty line.
inline double pua(double diet_cost_ppp_per_day, const IncomeDistribution &dist,
                  const AffordabilityParams &params, IncomeClass country_class) {
    auto it = params.classes.find(country_class);
    if (it == params.classes.end())
        throw MissingClassError(std::string(to_string(country_class)));
    const ClassParams &p = it->second;
    double threshold = diet_cost_ppp_per_day + p.nonfood_share * p.poverty_line_ppp_per_day;
    return headcount_below(dist, threshold);
}

} // namespace hdb::afford
