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

#ifndef CFMIMO_COMMANDS_HPP
#define CFMIMO_COMMANDS_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "montecarlo.hpp"
#include "reference_targets.hpp"
#include "report.hpp"
#include "scenario.hpp"

namespace cfmimo
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_out_of_tolerance = 3;

namespace detail
{

inline std::ofstream open_output(const std::string &path)
{
    const std::filesystem::path p(path);
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os)
        throw ConfigError("cannot write '" + path + "'");
    return os;
}

} // namespace detail

struct SimulateOutputs
{
    std::string samples_path;
    std::string summary_path;
    ExperimentResult result;
};

// Runs the experiment and writes <out>_samples.csv and <out>_summary.csv.
inline SimulateOutputs cmd_simulate(const ScenarioConfig &config, int workers, std::ostream &log)
{
    SimulateOutputs out;
    out.result = run_experiment(config.to_plan(workers));
    out.samples_path = config.out + "_samples.csv";
    out.summary_path = config.out + "_summary.csv";
    {
        auto os = detail::open_output(out.samples_path);
        write_samples_csv(os, config, out.result);
    }
    {
        auto os = detail::open_output(out.summary_path);
        write_summary_csv(os, config, out.result);
    }
    for (const auto &s : out.result.summaries)
        for (std::size_t i = 0; i < s.percentiles.size(); ++i)
            log << to_string(s.run.config) << ' ' << to_string(s.run.power) << " p" << s.percentiles[i]
                << " SE=" << format_double(std::round(s.values[i] * 1000) / 1000) << " bps/Hz\n";
    if (out.result.n_out_of_range_links > 0)
        log << "note: " << out.result.n_out_of_range_links
            << " link evaluations fell outside the 10-5000 m path-loss validity range\n";
    return out;
}

// Writes one <out>_cdf_<config>_<power>.csv per run and returns the paths.
inline std::vector<std::string> cmd_cdf(const ScenarioConfig &config, int workers, std::ostream &log)
{
    const ExperimentResult result = run_experiment(config.to_plan(workers));
    std::vector<std::string> paths;
    for (const auto &s : result.summaries)
    {
        const std::string path =
            config.out + "_cdf_" + std::string(to_string(s.run.config)) + "_" + std::string(to_string(s.run.power)) + ".csv";
        auto os = detail::open_output(path);
        write_cdf_csv(os, config, s);
        paths.push_back(path);
        log << "wrote " << path << " (" << s.n_samples() << " samples)\n";
    }
    return paths;
}

enum class ReproduceScale
{
    reduced,
    full
};

inline ReproduceScale parse_scale(std::string_view s)
{
    if (s == "reduced")
        return ReproduceScale::reduced;
    if (s == "full")
        return ReproduceScale::full;
    throw ConfigError("unknown scale '" + std::string(s) + "' (expected reduced|full)");
}

inline TableKind parse_table(std::string_view s)
{
    if (s == "cellular")
        return TableKind::cellular;
    if (s == "cellfree" || s == "cell-free")
        return TableKind::cellfree;
    throw ConfigError("unknown table '" + std::string(s) + "' (expected cellular|cellfree)");
}

struct ReproduceOptions
{
    ReproduceScale scale = ReproduceScale::reduced;
    std::uint64_t seed = 1;
    int workers = 0;
    bool allow_large = false; // full-scale cell-free MR with M >= 10000
    int n_smallscale = 200;
    int n_largescale = 0; // > 0 overrides the scale's realization count
};

struct ReproducedCell
{
    ReferenceCell cell;
    double simulated = 0.0;
    int n_largescale = 0;
    bool within_tolerance = false;
};

// Realizations used for one table cell at the given scale.
inline int largescale_count(const ReferenceCell &cell, const ReproduceOptions &opts)
{
    if (opts.n_largescale > 0)
        return opts.n_largescale;
    const bool heavy = cell.table == TableKind::cellfree && cell.decoder == Decoder::mr && cell.M >= 10000;
    if (opts.scale == ReproduceScale::full && (!heavy || opts.allow_large))
        return 1000;
    return heavy ? 50 : 200;
}

// Simulates every cell of one published table and compares against it.
inline std::vector<ReproducedCell> cmd_reproduce_table(TableKind table, const ReproduceOptions &opts, std::ostream &log)
{
    std::vector<ReproducedCell> out;
    // Cells sharing (morphology, decoder, M) come from a single experiment.
    std::vector<bool> done(reference_cells.size(), false);
    for (std::size_t i = 0; i < reference_cells.size(); ++i)
    {
        const ReferenceCell &head = reference_cells[i];
        if (head.table != table || done[i])
            continue;

        ScenarioConfig c;
        c.morphology = std::string(head.morphology);
        c.params = morphology_preset(head.morphology);
        c.deployment = table == TableKind::cellular ? Deployment::cellular : Deployment::cellfree;
        c.decoder = head.decoder;
        c.M = head.M;
        c.K = 18;
        c.power = PowerSelection::both;
        c.n_largescale = largescale_count(head, opts);
        c.n_smallscale = opts.n_smallscale;
        c.seed = opts.seed;
        const ExperimentResult result = run_experiment(c.to_plan(opts.workers));

        for (std::size_t j = i; j < reference_cells.size(); ++j)
        {
            const ReferenceCell &cell = reference_cells[j];
            if (cell.table != table || cell.morphology != head.morphology || cell.decoder != head.decoder ||
                cell.M != head.M)
                continue;
            done[j] = true;
            const auto &summary = result.summary({make_configuration(c.deployment, cell.decoder), cell.power});
            ReproducedCell r{cell, likely_rate(summary, cell.percentile), c.n_largescale, false};
            r.within_tolerance = std::abs(r.simulated - cell.target) <= cell.tolerance;
            out.push_back(r);

            char line[200];
            std::snprintf(line, sizeof line, "%-8s %-9s %s M=%-6d %-6s %2.0f%%-likely  ref %5.2f  sim %5.2f  |d| %4.2f  %s%s\n",
                          std::string(to_string(table)).c_str(), std::string(cell.morphology).c_str(),
                          cell.decoder == Decoder::mr ? "MR" : "ZF", cell.M, std::string(to_string(cell.power)).c_str(),
                          100.0 - cell.percentile, cell.target, r.simulated, std::abs(r.simulated - cell.target),
                          r.within_tolerance ? "ok" : "OUT OF TOLERANCE",
                          c.n_largescale < 200 ? " (reduced confidence)" : "");
            log << line;
            log.flush();
        }
    }
    return out;
}

inline void write_reproduce_csv(std::ostream &os, TableKind table, const ReproduceOptions &opts,
                                 const std::vector<ReproducedCell> &cells)
{
    os << "# table: " << to_string(table) << ", seed: " << opts.seed
       << ", scale: " << (opts.scale == ReproduceScale::full ? "full" : "reduced") << '\n';
    os << "morphology,decoder,M,power,percentile,reference_se,simulated_se,abs_diff,tolerance,n_largescale,within_tolerance\n";
    for (const auto &r : cells)
        os << r.cell.morphology << ',' << to_string(r.cell.decoder) << ',' << r.cell.M << ',' << to_string(r.cell.power)
           << ',' << format_double(r.cell.percentile) << ',' << format_double(r.cell.target) << ','
           << format_double(r.simulated) << ',' << format_double(std::abs(r.simulated - r.cell.target)) << ','
           << format_double(r.cell.tolerance) << ',' << r.n_largescale << ',' << (r.within_tolerance ? 1 : 0) << '\n';
}

} // namespace cfmimo

#endif
