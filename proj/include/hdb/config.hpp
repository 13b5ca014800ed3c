#pragma once

#include "hdb/errors.hpp"
#include "hdb/model.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>

namespace hdb {

// Runtime configuration: basket targets, affordability parameters, and
// nutrient requirements. Everything is optional except that poverty lines
// must be configured for any income class actually assigned to a country —
// there is no built-in default line.
struct Config {
    HdbTargets targets = default_hdb_targets();
    AffordabilityParams afford;
    std::optional<NutrientRequirements> requirements;
};

namespace detail {

inline double require_number(const nlohmann::json &j, const std::string &key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ConfigError("missing or non-numeric field: " + key);
    return j[key].get<double>();
}

} // namespace detail

inline Config parse_config_json(const nlohmann::json &root) {
    Config cfg;

    if (root.contains("hdb_targets")) {
        const auto &jt = root["hdb_targets"];
        std::array<GroupTarget, kGroupCount> targets{};
        for (FoodGroup g : kFoodGroups) {
            std::string name(to_string(g));
            if (!jt.contains(name))
                throw ConfigError("hdb_targets: missing group " + name);
            targets[group_index(g)].energy_kcal_per_day =
                detail::require_number(jt[name], "energy_kcal_per_day");
            targets[group_index(g)].item_count_k =
                static_cast<int>(detail::require_number(jt[name], "item_count"));
        }
        cfg.targets = HdbTargets(targets);
    }

    if (root.contains("affordability")) {
        const auto &ja = root["affordability"];
        for (IncomeClass cls : kIncomeClasses) {
            std::string name(to_string(cls));
            ClassParams p;
            p.nonfood_share = default_nonfood_share(cls);
            if (ja.contains("nonfood_share") && ja["nonfood_share"].contains(name))
                p.nonfood_share = ja["nonfood_share"][name].get<double>();
            if (ja.contains("poverty_line_ppp_per_day") &&
                ja["poverty_line_ppp_per_day"].contains(name)) {
                p.poverty_line_ppp_per_day = ja["poverty_line_ppp_per_day"][name].get<double>();
                cfg.afford.classes[cls] = p;
            }
        }
        if (ja.contains("country_class")) {
            for (const auto &[country, jcls] : ja["country_class"].items()) {
                auto cls = parse_income_class(jcls.get<std::string>());
                if (!cls)
                    throw ConfigError("country_class: unknown class '" +
                                      jcls.get<std::string>() + "' for " + country);
                if (!cfg.afford.classes.count(*cls))
                    throw ConfigError("country_class: class " + std::string(to_string(*cls)) +
                                      " assigned to " + country +
                                      " but has no configured poverty line");
                cfg.afford.country_class[country] = *cls;
            }
        }
        validate(cfg.afford);
    }

    if (root.contains("nutrient_requirements")) {
        const auto &jn = root["nutrient_requirements"];
        NutrientRequirements req;
        for (std::size_t i = 0; i < kNutrientCount; ++i) {
            std::string name(kNutrients[i]);
            if (!jn.contains(name))
                throw ConfigError("nutrient_requirements: missing nutrient " + name);
            req.lower_bound[i] = jn[name].get<double>();
        }
        validate(req);
        cfg.requirements = req;
    }

    return cfg;
}

inline Config parse_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    nlohmann::json root;
    try {
        in >> root;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config_json(root);
}

} // namespace hdb
