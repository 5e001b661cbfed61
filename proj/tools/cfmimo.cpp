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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <cfmimo/commands.hpp>

namespace
{

struct ScenarioFlags
{
    std::string config_path;
    std::optional<std::string> morphology, deployment, decoder, power, out;
    std::optional<int> M, K, tau, n_largescale, n_smallscale;
    std::optional<std::uint64_t> seed;
    std::optional<double> solver_tol;

    void attach(CLI::App &app)
    {
        app.add_option("--config", config_path, "JSON scenario file");
        app.add_option("--morphology", morphology, "urban | suburban | rural");
        app.add_option("--deployment", deployment, "cellular | cellfree");
        app.add_option("--decoder", decoder, "mr | zf");
        app.add_option("--power", power, "full | maxmin | both");
        app.add_option("--M", M, "number of service antennas");
        app.add_option("--K", K, "number of users");
        app.add_option("--tau", tau, "pilot length (default K)");
        app.add_option("--n-largescale", n_largescale, "large-scale fading realizations");
        app.add_option("--n-smallscale", n_smallscale, "small-scale realizations per profile (cf-ZF)");
        app.add_option("--seed", seed, "master seed");
        app.add_option("--solver-tol", solver_tol, "relative bisection tolerance");
        app.add_option("--out", out, "output path prefix");
    }

    // File values first, then command-line flags on top.
    cfmimo::ScenarioConfig resolve() const
    {
        cfmimo::ScenarioConfig c;
        if (!config_path.empty())
            c = cfmimo::load_scenario(config_path);
        if (morphology)
        {
            c.morphology = *morphology;
            c.params = cfmimo::morphology_preset(*morphology);
        }
        if (deployment)
            c.deployment = cfmimo::parse_deployment(*deployment);
        if (decoder)
            c.decoder = cfmimo::parse_decoder(*decoder);
        if (power)
            c.power = cfmimo::parse_power_selection(*power);
        if (M)
            c.M = *M;
        if (K)
            c.K = *K;
        if (tau)
            c.tau = *tau;
        if (n_largescale)
            c.n_largescale = *n_largescale;
        if (n_smallscale)
            c.n_smallscale = *n_smallscale;
        if (seed)
            c.seed = *seed;
        if (solver_tol)
            c.bisection.rel_tol = *solver_tol;
        if (out)
            c.out = *out;
        c.validate();
        return c;
    }
};

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Uplink spectral-efficiency simulator for cellular and cell-free Massive MIMO"};
    app.require_subcommand(1);
    int workers = 0;
    app.add_option("--workers", workers, "worker threads (default: CFMIMO_WORKERS or hardware concurrency)");

    ScenarioFlags sim_flags, cdf_flags;
    auto *simulate = app.add_subcommand("simulate", "run an experiment and write samples/summary CSVs");
    sim_flags.attach(*simulate);

    auto *cdf = app.add_subcommand("cdf", "write plot-ready CDF CSVs");
    cdf_flags.attach(*cdf);

    std::string table = "cellfree";
    std::string scale = "reduced";
    std::uint64_t reproduce_seed = 1;
    std::string reproduce_out;
    bool strict = false;
    bool allow_large = false;
    int reproduce_largescale = 0;
    auto *reproduce = app.add_subcommand("reproduce-table", "simulate a reference table and compare cell by cell");
    reproduce->add_option("table", table, "cellular | cellfree")->required();
    reproduce->add_option("--scale", scale, "reduced | full");
    reproduce->add_option("--seed", reproduce_seed, "master seed");
    reproduce->add_option("--out", reproduce_out, "optional CSV report path");
    reproduce->add_flag("--strict", strict, "exit with status 3 if any cell is out of tolerance");
    reproduce->add_option("--n-largescale", reproduce_largescale, "override realizations per cell (smoke runs)");
    reproduce->add_flag("--allow-large", allow_large, "run cell-free MR with M >= 10000 at full scale");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return cfmimo::exit_config_error;
    }

    try
    {
        if (*simulate)
        {
            const auto config = sim_flags.resolve();
            const auto out = cfmimo::cmd_simulate(config, workers, std::cout);
            std::cout << "wrote " << out.samples_path << " and " << out.summary_path << '\n';
            return cfmimo::exit_ok;
        }
        if (*cdf)
        {
            cfmimo::cmd_cdf(cdf_flags.resolve(), workers, std::cout);
            return cfmimo::exit_ok;
        }
        if (*reproduce)
        {
            cfmimo::ReproduceOptions opts;
            opts.scale = cfmimo::parse_scale(scale);
            opts.seed = reproduce_seed;
            opts.workers = workers;
            opts.allow_large = allow_large;
            opts.n_largescale = reproduce_largescale;
            const auto kind = cfmimo::parse_table(table);
            const auto cells = cfmimo::cmd_reproduce_table(kind, opts, std::cout);
            if (!reproduce_out.empty())
            {
                auto os = cfmimo::detail::open_output(reproduce_out);
                cfmimo::write_reproduce_csv(os, kind, opts, cells);
            }
            bool all_ok = true;
            for (const auto &c : cells)
                all_ok = all_ok && c.within_tolerance;
            if (!all_ok)
                std::cout << "some cells are out of tolerance\n";
            return (strict && !all_ok) ? cfmimo::exit_out_of_tolerance : cfmimo::exit_ok;
        }
    }
    catch (const cfmimo::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return cfmimo::exit_config_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return cfmimo::exit_ok;
}
