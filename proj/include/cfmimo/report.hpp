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

#ifndef CFMIMO_REPORT_HPP
#define CFMIMO_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "montecarlo.hpp"
#include "scenario.hpp"

namespace cfmimo
{

// Shortest text that parses back to the same double.
inline std::string format_double(double x)
{
    if (std::isnan(x))
        return "";
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision)
    {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x)
            break;
    }
    return buf;
}

inline void write_config_header(std::ostream &os, const ScenarioConfig &config)
{
    os << "# config: " << to_json(config).dump() << '\n';
}

inline void write_samples_csv(std::ostream &os, const ScenarioConfig &config, const ExperimentResult &result)
{
    write_config_header(os, config);
    os << "realization_index,user_index,config,power,sinr_linear,se_bps_hz,eta\n";
    for (const auto &r : result.samples)
        os << r.realization << ',' << r.user << ',' << to_string(r.run.config) << ',' << to_string(r.run.power) << ','
           << format_double(r.sinr) << ',' << format_double(r.se) << ',' << format_double(r.eta) << '\n';
}

inline void write_summary_csv(std::ostream &os, const ScenarioConfig &config, const ExperimentResult &result)
{
    write_config_header(os, config);
    os << "config,power,percentile,se,throughput_mbps,n_samples,seed\n";
    for (const auto &s : result.summaries)
        for (std::size_t i = 0; i < s.percentiles.size(); ++i)
            os << to_string(s.run.config) << ',' << to_string(s.run.power) << ',' << format_double(s.percentiles[i])
               << ',' << format_double(s.values[i]) << ','
               << format_double(throughput_from_se(s.values[i], config.uplink_bandwidth_hz) / 1e6) << ','
               << s.n_samples() << ',' << config.seed << '\n';
}

// Plot-ready empirical CDF. cf-MR adds the per-user and max-min upper-bound
// curves on the same probability grid.
inline void write_cdf_csv(std::ostream &os, const ScenarioConfig &config, const CdfSummary &s)
{
    write_config_header(os, config);
    const bool bounds = !s.bound_se_sorted.empty();
    os << "se_bps_hz,cumulative_probability";
    if (bounds)
        os << ",bound_se_bps_hz,maxmin_bound_se_bps_hz";
    os << '\n';
    const auto n = static_cast<double>(s.n_samples());
    for (std::size_t i = 0; i < s.n_samples(); ++i)
    {
        os << format_double(s.se_sorted[i]) << ',' << format_double(static_cast<double>(i + 1) / n);
        if (bounds)
            os << ',' << format_double(s.bound_se_sorted[i]) << ',' << format_double(s.maxmin_bound_se_sorted[i]);
        os << '\n';
    }
}

// Minimal reader for the files above: skips '#' lines, splits on commas.
struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string &name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw DomainError("csv: no column '" + name + "'");
    }
};

inline CsvTable read_csv(std::istream &is)
{
    CsvTable t;
    std::string line;
    auto split = [](const std::string &s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string field;
        while (std::getline(ss, field, ','))
            out.push_back(field);
        if (!s.empty() && s.back() == ',')
            out.emplace_back();
        return out;
    };
    while (std::getline(is, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        if (t.header.empty())
            t.header = split(line);
        else
            t.rows.push_back(split(line));
    }
    return t;
}

} // namespace cfmimo

#endif
