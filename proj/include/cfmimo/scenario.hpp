// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: uplink performance simulator for cellular and cell-free Massive MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CFMIMO_SCENARIO_HPP
#define CFMIMO_SCENARIO_HPP

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "montecarlo.hpp"
#include "propagation.hpp"
#include "types.hpp"

namespace cfmimo
{

enum class PowerSelection
{
    full,
    maxmin,
    both
};

inline PowerSelection parse_power_selection(std::string_view s)
{
    if (s == "full")
        return PowerSelection::full;
    if (s == "maxmin")
        return PowerSelection::maxmin;
    if (s == "both")
        return PowerSelection::both;
    throw ConfigError("unknown power '" + std::string(s) + "' (expected full|maxmin|both)");
}

constexpr std::string_view to_string(PowerSelection p)
{
    switch (p)
    {
    case PowerSelection::full: return "full";
    case PowerSelection::maxmin: return "maxmin";
    case PowerSelection::both: return "both";
    }
    return "?";
}

// Everything needed to run one experiment from the command line.
struct ScenarioConfig
{
    std::string morphology = "urban"; // preset name, or "custom" with explicit params
    MorphologyParams params = urban_preset();
    int M = 70;
    int K = 18;
    int tau = 0; // 0: tau = K
    Deployment deployment = Deployment::cellfree;
    Decoder decoder = Decoder::zf;
    PowerSelection power = PowerSelection::both;
    LinkBudget budget;
    double uplink_bandwidth_hz = 10.0e6;
    int n_largescale = 1000;
    int n_smallscale = 200;
    std::uint64_t seed = 1;
    std::vector<double> percentiles{1.0, 5.0};
    BisectionOptions bisection;
    std::string out = "cfmimo";

    std::vector<RunSpec> runs() const
    {
        const Configuration c = make_configuration(deployment, decoder);
        std::vector<RunSpec> r;
        if (power != PowerSelection::maxmin)
            r.push_back({c, PowerMode::full});
        if (power != PowerSelection::full)
            r.push_back({c, PowerMode::maxmin});
        return r;
    }

    void validate() const
    {
        params.validate();
        if (M < 1 || K < 1)
            throw ConfigError("M and K must be positive");
        if (tau != 0 && tau < K)
            throw ConfigError("tau must be at least K (got tau=" + std::to_string(tau) + ", K=" + std::to_string(K) + ")");
        if (decoder == Decoder::zf && M <= K)
            throw ConfigError("zero-forcing needs M > K (got M=" + std::to_string(M) + ", K=" + std::to_string(K) + ")");
        if (n_largescale < 1)
            throw ConfigError("n_largescale must be at least 1");
        if (n_smallscale < 2)
            throw ConfigError("n_smallscale must be at least 2");
        if (!(uplink_bandwidth_hz > 0))
            throw ConfigError("uplink_bandwidth_hz must be positive");
        compute_rho_u(budget);
    }

    ExperimentPlan to_plan(int workers = 0) const
    {
        validate();
        ExperimentPlan p;
        p.morphology = params;
        p.budget = budget;
        p.M = M;
        p.K = K;
        p.tau = tau;
        p.runs = runs();
        p.n_largescale = n_largescale;
        p.n_smallscale = n_smallscale;
        p.master_seed = seed;
        p.percentiles = percentiles;
        p.bisection = bisection;
        p.workers = workers;
        return p;
    }
};

inline nlohmann::ordered_json to_json(const MorphologyParams &p)
{
    return {{"street_width", p.street_width},   {"building_height", p.building_height},
            {"ap_height", p.ap_height},         {"bs_height", p.bs_height},
            {"user_height", p.user_height},     {"carrier_freq_ghz", p.carrier_freq_ghz},
            {"shadow_sigma_db", p.shadow_sigma_db}, {"cell_radius_km", p.cell_radius_km}};
}

// Effective configuration, echoed into output headers. Worker count is
// deliberately absent: it never changes results.
inline nlohmann::ordered_json to_json(const ScenarioConfig &c)
{
    nlohmann::ordered_json j;
    j["morphology"] = c.morphology;
    j["morphology_params"] = to_json(c.params);
    j["deployment"] = std::string(to_string(c.deployment));
    j["decoder"] = std::string(to_string(c.decoder));
    j["power"] = std::string(to_string(c.power));
    j["M"] = c.M;
    j["K"] = c.K;
    j["tau"] = c.tau > 0 ? c.tau : c.K;
    j["tx_power_w"] = c.budget.tx_power_w;
    j["bandwidth_hz"] = c.budget.total_bandwidth_hz;
    j["noise_figure_db"] = c.budget.noise_figure_db;
    j["tx_gain_dbi"] = c.budget.tx_antenna_gain_dbi;
    j["rx_gain_dbi"] = c.budget.rx_antenna_gain_dbi;
    j["uplink_bandwidth_hz"] = c.uplink_bandwidth_hz;
    j["n_largescale"] = c.n_largescale;
    j["n_smallscale"] = c.n_smallscale;
    j["seed"] = c.seed;
    j["percentiles"] = c.percentiles;
    j["solver_tol"] = c.bisection.rel_tol;
    j["solver_max_iter"] = c.bisection.max_iterations;
    j["out"] = c.out;
    return j;
}

namespace detail
{

// 1-based line of the first occurrence of "key" in the document, 0 if absent.
inline int line_of_key(std::string_view text, std::string_view key)
{
    const std::string needle = "\"" + std::string(key) + "\"";
    const auto pos = text.find(needle);
    if (pos == std::string_view::npos)
        return 0;
    int line = 1;
    for (std::size_t i = 0; i < pos; ++i)
        if (text[i] == '\n')
            ++line;
    return line;
}

inline ConfigError keyed_error(std::string_view source, std::string_view text, std::string_view key,
                               const std::string &msg)
{
    std::ostringstream os;
    os << source << ":" << line_of_key(text, key) << ": " << key << ": " << msg;
    return ConfigError(os.str());
}

template <typename T>
T json_get(const nlohmann::json &j, std::string_view key, std::string_view source, std::string_view text)
{
    try
    {
        return j.at(std::string(key)).get<T>();
    }
    catch (const nlohmann::json::exception &e)
    {
        throw keyed_error(source, text, key, std::string("wrong type (") + e.what() + ")");
    }
}

inline bool same_values(const MorphologyParams &a, const MorphologyParams &b)
{
    return a.street_width == b.street_width && a.building_height == b.building_height &&
           a.ap_height == b.ap_height && a.bs_height == b.bs_height && a.user_height == b.user_height &&
           a.carrier_freq_ghz == b.carrier_freq_ghz && a.shadow_sigma_db == b.shadow_sigma_db &&
           a.cell_radius_km == b.cell_radius_km;
}

} // namespace detail

inline const std::set<std::string> &scenario_keys()
{
    static const std::set<std::string> keys{
        "morphology", "morphology_params", "deployment", "decoder", "power", "M", "K", "tau", "tx_power_w",
        "bandwidth_hz", "noise_figure_db", "tx_gain_dbi", "rx_gain_dbi", "uplink_bandwidth_hz", "n_largescale",
        "n_smallscale", "seed", "percentiles", "solver_tol", "solver_max_iter", "out"};
    return keys;
}

// Parses a JSON scenario document on top of `base`. Errors carry
// "<source>:<line>:" prefixes.
inline ScenarioConfig parse_scenario(std::string_view text, std::string_view source = "<config>",
                                     ScenarioConfig base = {})
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw ConfigError(std::string(source) + ": " + e.what());
    }
    if (!j.is_object())
        throw ConfigError(std::string(source) + ":1: top level must be an object");

    using detail::json_get;
    ScenarioConfig c = std::move(base);
    for (const auto &[key, value] : j.items())
        if (!scenario_keys().count(key))
            throw detail::keyed_error(source, text, key, "unknown key");

    auto wrap = [&](std::string_view key, auto &&fn) {
        if (!j.contains(std::string(key)))
            return;
        try
        {
            fn();
        }
        catch (const ConfigError &e)
        {
            throw detail::keyed_error(source, text, key, e.what());
        }
    };

    wrap("morphology", [&] {
        c.morphology = json_get<std::string>(j, "morphology", source, text);
        if (c.morphology != "custom")
            c.params = morphology_preset(c.morphology);
    });
    wrap("morphology_params", [&] {
        const auto &mp = j.at("morphology_params");
        if (!mp.is_object())
            throw ConfigError("must be an object");
        MorphologyParams p = c.params;
        p.tag = Morphology::custom;
        for (const auto &[k, v] : mp.items())
        {
            if (!v.is_number())
                throw ConfigError("'" + k + "' must be a number");
            const double x = v.get<double>();
            if (k == "street_width") p.street_width = x;
            else if (k == "building_height") p.building_height = x;
            else if (k == "ap_height") p.ap_height = x;
            else if (k == "bs_height") p.bs_height = x;
            else if (k == "user_height") p.user_height = x;
            else if (k == "carrier_freq_ghz") p.carrier_freq_ghz = x;
            else if (k == "shadow_sigma_db") p.shadow_sigma_db = x;
            else if (k == "cell_radius_km") p.cell_radius_km = x;
            else throw ConfigError("unknown parameter '" + k + "'");
        }
        // params identical to the named preset keep the name (config headers round-trip)
        const bool same = c.morphology != "custom" && detail::same_values(p, morphology_preset(c.morphology));
        if (same)
            p.tag = c.params.tag;
        else
            c.morphology = "custom";
        c.params = p;
    });
    wrap("deployment", [&] { c.deployment = parse_deployment(json_get<std::string>(j, "deployment", source, text)); });
    wrap("decoder", [&] { c.decoder = parse_decoder(json_get<std::string>(j, "decoder", source, text)); });
    wrap("power", [&] { c.power = parse_power_selection(json_get<std::string>(j, "power", source, text)); });
    wrap("M", [&] { c.M = json_get<int>(j, "M", source, text); });
    wrap("K", [&] { c.K = json_get<int>(j, "K", source, text); });
    wrap("tau", [&] { c.tau = json_get<int>(j, "tau", source, text); });
    wrap("tx_power_w", [&] { c.budget.tx_power_w = json_get<double>(j, "tx_power_w", source, text); });
    wrap("bandwidth_hz", [&] { c.budget.total_bandwidth_hz = json_get<double>(j, "bandwidth_hz", source, text); });
    wrap("noise_figure_db", [&] { c.budget.noise_figure_db = json_get<double>(j, "noise_figure_db", source, text); });
    wrap("tx_gain_dbi", [&] { c.budget.tx_antenna_gain_dbi = json_get<double>(j, "tx_gain_dbi", source, text); });
    wrap("rx_gain_dbi", [&] { c.budget.rx_antenna_gain_dbi = json_get<double>(j, "rx_gain_dbi", source, text); });
    wrap("uplink_bandwidth_hz",
         [&] { c.uplink_bandwidth_hz = json_get<double>(j, "uplink_bandwidth_hz", source, text); });
    wrap("n_largescale", [&] { c.n_largescale = json_get<int>(j, "n_largescale", source, text); });
    wrap("n_smallscale", [&] { c.n_smallscale = json_get<int>(j, "n_smallscale", source, text); });
    wrap("seed", [&] { c.seed = json_get<std::uint64_t>(j, "seed", source, text); });
    wrap("percentiles", [&] { c.percentiles = json_get<std::vector<double>>(j, "percentiles", source, text); });
    wrap("solver_tol", [&] { c.bisection.rel_tol = json_get<double>(j, "solver_tol", source, text); });
    wrap("solver_max_iter", [&] { c.bisection.max_iterations = json_get<int>(j, "solver_max_iter", source, text); });
    wrap("out", [&] { c.out = json_get<std::string>(j, "out", source, text); });

    // semantic checks that map to a single key
    wrap("tau", [&] {
        if (c.tau != 0 && c.tau < c.K)
            throw ConfigError("must be at least K");
    });
    wrap("M", [&] {
        if (c.M < 1)
            throw ConfigError("must be positive");
        if (c.decoder == Decoder::zf && c.M <= c.K)
            throw ConfigError("zero-forcing needs M > K");
    });
    wrap("percentiles", [&] {
        for (double p : c.percentiles)
            if (!(p > 0.0 && p < 100.0))
                throw ConfigError("percentiles must lie in (0, 100)");
    });
    return c;
}

inline ScenarioConfig load_scenario(const std::string &path, ScenarioConfig base = {})
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path + ": cannot open configuration file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path, std::move(base));
}

} // namespace cfmimo

#endif
