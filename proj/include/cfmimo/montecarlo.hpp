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

#ifndef CFMIMO_MONTECARLO_HPP
#define CFMIMO_MONTECARLO_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "channel.hpp"
#include "geometry.hpp"
#include "power_control.hpp"
#include "propagation.hpp"
#include "rng.hpp"
#include "sinr_mr.hpp"
#include "sinr_zf.hpp"
#include "types.hpp"

namespace cfmimo
{

struct RunSpec
{
    Configuration config = Configuration::cf_zf;
    PowerMode power = PowerMode::full;

    friend bool operator==(const RunSpec &, const RunSpec &) = default;
};

struct ExperimentPlan
{
    MorphologyParams morphology = urban_preset();
    LinkBudget budget;
    int M = 70;
    int K = 18;
    int tau = 0; // 0 selects tau = K
    std::vector<RunSpec> runs;
    int n_largescale = 1000;
    int n_smallscale = 200;
    std::uint64_t master_seed = 1;
    std::vector<double> percentiles{1.0, 5.0};
    BisectionOptions bisection;
    int workers = 0; // 0: CFMIMO_WORKERS or the hardware concurrency

    int pilot_length() const { return tau > 0 ? tau : K; }

    void validate() const
    {
        morphology.validate();
        if (M < 1 || K < 1)
            throw ConfigError("plan: M and K must be positive");
        if (pilot_length() < K)
            throw ConfigError("plan: tau must be at least K");
        if (n_largescale < 1)
            throw ConfigError("plan: n_largescale must be at least 1");
        if (runs.empty())
            throw ConfigError("plan: no configuration requested");
        for (std::size_t i = 0; i < runs.size(); ++i)
            for (std::size_t j = i + 1; j < runs.size(); ++j)
                if (runs[i] == runs[j])
                    throw ConfigError("plan: duplicate configuration/power entry");
        for (const auto &r : runs)
        {
            if (decoder_of(r.config) == Decoder::zf && M <= K)
                throw ConfigError("plan: " + std::string(to_string(r.config)) + " needs M > K (got M=" +
                                  std::to_string(M) + ", K=" + std::to_string(K) + ")");
            if (r.config == Configuration::cf_zf && n_smallscale < 2)
                throw ConfigError("plan: n_smallscale must be at least 2 for cf-ZF");
        }
        for (double p : percentiles)
            if (!(p > 0.0 && p < 100.0))
                throw ConfigError("plan: percentiles must lie in (0, 100)");
    }
};

// One (realization, user, run) sample.
struct SampleRow
{
    int realization = 0;
    int user = 0;
    RunSpec run;
    double sinr = 0.0;
    double se = 0.0;
    double eta = 0.0;
    // cf-MR only: per-user upper bound and the max-min (min over users) bound, linear.
    double bound_sinr = std::numeric_limits<double>::quiet_NaN();
    double maxmin_bound_sinr = std::numeric_limits<double>::quiet_NaN();
};

struct CdfSummary
{
    RunSpec run;
    std::vector<double> se_sorted;
    std::vector<double> percentiles;
    std::vector<double> values; // likely rate at each percentile
    std::vector<double> bound_se_sorted;        // cf-MR: log2(1 + per-user bound)
    std::vector<double> maxmin_bound_se_sorted; // cf-MR: log2(1 + min-over-users bound)

    std::size_t n_samples() const { return se_sorted.size(); }
};

// Empirical percentile by the lower-rank order statistic: the sample at rank
// ceil(p/100 N) (1-based) of the sorted pool.
inline double likely_rate(const std::vector<double> &sorted, double percentile)
{
    if (sorted.empty())
        throw DomainError("likely_rate: no samples");
    if (!(percentile > 0.0 && percentile < 100.0))
        throw DomainError("likely_rate: percentile must lie in (0, 100)");
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

inline double likely_rate(const CdfSummary &summary, double percentile)
{
    return likely_rate(summary.se_sorted, percentile);
}

inline double throughput_from_se(double se, double uplink_bandwidth_hz)
{
    if (!(se >= 0.0) || !(uplink_bandwidth_hz >= 0.0))
        throw DomainError("throughput_from_se: inputs must be non-negative");
    return se * uplink_bandwidth_hz;
}

struct ExperimentResult
{
    double rho_u = 0.0;
    std::vector<CdfSummary> summaries; // in plan.runs order
    std::vector<SampleRow> samples;    // realization-major, then run, then user
    std::size_t n_out_of_range_links = 0;
    long n_zf_rejected = 0;

    const CdfSummary &summary(RunSpec r) const
    {
        for (const auto &s : summaries)
            if (s.run == r)
                return s;
        throw DomainError("no summary for " + std::string(to_string(r.config)) + "/" + std::string(to_string(r.power)));
    }
};

inline int resolve_workers(int requested)
{
    if (requested > 0)
        return requested;
    if (const char *env = std::getenv("CFMIMO_WORKERS"))
    {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail
{

struct RealizationOutput
{
    std::vector<SampleRow> rows;
    std::size_t n_out_of_range = 0;
    long n_zf_rejected = 0;
};

inline void append_report(RealizationOutput &out, int index, RunSpec run, const SinrReport &rep,
                          const MrUpperBound *bound = nullptr)
{
    for (Eigen::Index k = 0; k < rep.sinr.size(); ++k)
    {
        SampleRow row;
        row.realization = index;
        row.user = static_cast<int>(k);
        row.run = run;
        row.sinr = rep.sinr[k];
        row.se = rep.se[k];
        row.eta = rep.eta[k];
        if (bound)
        {
            row.bound_sinr = bound->per_user[k];
            row.maxmin_bound_sinr = bound->maxmin;
        }
        out.rows.push_back(row);
    }
}

inline bool wants(const ExperimentPlan &plan, Deployment d)
{
    return std::any_of(plan.runs.begin(), plan.runs.end(),
                       [d](const RunSpec &r) { return deployment_of(r.config) == d; });
}

inline bool wants(const ExperimentPlan &plan, Configuration c)
{
    return std::any_of(plan.runs.begin(), plan.runs.end(), [c](const RunSpec &r) { return r.config == c; });
}

// Draws one large-scale realization and evaluates every requested run on it.
inline RealizationOutput evaluate_realization(const ExperimentPlan &plan, int index, double rho_u)
{
    const auto idx = static_cast<std::uint64_t>(index);
    const int tau = plan.pilot_length();
    const double radius = plan.morphology.cell_radius_m();
    RealizationOutput out;

    auto user_rng = child_stream(plan.master_seed, idx, StreamPurpose::user_placement);
    const std::vector<Point2> users = place_uniform_disk(plan.K, radius, user_rng);

    // Cellular: one array at the center. Its large-scale fading is identical
    // across antennas, so a single row carries it.
    std::optional<ChannelStats> cl_stats;
    if (wants(plan, Deployment::cellular))
    {
        const MorphologyParams params = plan.morphology.for_deployment(Deployment::cellular);
        Placement placement{place_colocated(1, radius), users, params.ap_height, params.user_height, radius};
        auto rng = child_stream(plan.master_seed, idx, StreamPurpose::shadowing_cellular);
        const LargeScaleFading lsf = draw_beta(placement, params, rng);
        out.n_out_of_range += lsf.n_out_of_range * static_cast<std::size_t>(plan.M);
        cl_stats = gamma_from_beta(lsf, rho_u, tau);
    }

    std::optional<ChannelStats> cf_stats;
    if (wants(plan, Deployment::cellfree))
    {
        const MorphologyParams params = plan.morphology.for_deployment(Deployment::cellfree);
        auto ap_rng = child_stream(plan.master_seed, idx, StreamPurpose::ap_placement);
        Placement placement{place_uniform_disk(plan.M, radius, ap_rng), users, params.ap_height, params.user_height,
                            radius};
        auto rng = child_stream(plan.master_seed, idx, StreamPurpose::shadowing_cellfree);
        const LargeScaleFading lsf = draw_beta(placement, params, rng);
        out.n_out_of_range += lsf.n_out_of_range;
        cf_stats = gamma_from_beta(lsf, rho_u, tau);
    }

    std::optional<CfMrTerms> mr_terms;
    std::optional<MrUpperBound> mr_bound;
    if (wants(plan, Configuration::cf_mr))
    {
        mr_terms = cf_mr_terms(cf_stats->gamma, cf_stats->beta);
        mr_bound = mr_upper_bound(cf_stats->gamma);
    }

    std::optional<ZfExpectations> zf;
    if (wants(plan, Configuration::cf_zf))
    {
        auto rng = child_stream(plan.master_seed, idx, StreamPurpose::small_scale);
        zf = estimate_zf_expectations(*cf_stats, plan.n_smallscale, rng);
        out.n_zf_rejected += zf->n_rejected;
    }

    const auto full = PowerControlVector::ones(plan.K);
    for (const RunSpec &run : plan.runs)
    {
        switch (run.config)
        {
        case Configuration::cl_mr:
        case Configuration::cl_zf: {
            const Vector gamma = cl_stats->gamma.row(0).transpose();
            const Vector beta = cl_stats->beta.row(0).transpose();
            const Decoder dec = decoder_of(run.config);
            const PowerControlVector eta =
                run.power == PowerMode::full ? full : maxmin_cl(gamma, beta, plan.M, rho_u, dec).eta;
            const SinrReport rep = dec == Decoder::mr ? sinr_cl_mr(gamma, beta, eta, plan.M, rho_u, run.power)
                                                      : sinr_cl_zf(gamma, beta, eta, plan.M, rho_u, run.power);
            append_report(out, index, run, rep);
            break;
        }
        case Configuration::cf_mr: {
            const PowerControlVector eta =
                run.power == PowerMode::full
                    ? full
                    : bisect_common_sinr(cf_mr_system(*mr_terms, rho_u), mr_bound->maxmin, plan.bisection).eta;
            append_report(out, index, run, sinr_cf_mr(*mr_terms, eta, rho_u, run.power), &*mr_bound);
            break;
        }
        case Configuration::cf_zf: {
            const PowerControlVector eta =
                run.power == PowerMode::full ? full : maxmin_cf_zf(*zf, rho_u, plan.bisection).eta;
            append_report(out, index, run, sinr_cf_zf(*zf, eta, rho_u, run.power));
            break;
        }
        }
    }
    return out;
}

} // namespace detail

inline CdfSummary summarize(RunSpec run, const std::vector<SampleRow> &samples, const std::vector<double> &percentiles)
{
    CdfSummary s;
    s.run = run;
    for (const auto &row : samples)
    {
        if (!(row.run == run))
            continue;
        s.se_sorted.push_back(row.se);
        if (run.config == Configuration::cf_mr)
        {
            s.bound_se_sorted.push_back(std::log2(1.0 + row.bound_sinr));
            s.maxmin_bound_se_sorted.push_back(std::log2(1.0 + row.maxmin_bound_sinr));
        }
    }
    std::sort(s.se_sorted.begin(), s.se_sorted.end());
    std::sort(s.bound_se_sorted.begin(), s.bound_se_sorted.end());
    std::sort(s.maxmin_bound_se_sorted.begin(), s.maxmin_bound_se_sorted.end());
    s.percentiles = percentiles;
    for (double p : percentiles)
        s.values.push_back(likely_rate(s.se_sorted, p));
    return s;
}

// Runs every requested configuration over n_largescale independent
// realizations. Each realization uses child streams keyed by its index, and
// results are reduced in index order, so the output does not depend on the
// number of workers.
inline ExperimentResult run_experiment(const ExperimentPlan &plan)
{
    plan.validate();
    ExperimentResult result;
    result.rho_u = compute_rho_u(plan.budget);

    const int n = plan.n_largescale;
    std::vector<detail::RealizationOutput> outputs(static_cast<std::size_t>(n));
    const int workers = std::min(resolve_workers(plan.workers), n);

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (int i = next++; i < n; i = next++)
        {
            try
            {
                outputs[static_cast<std::size_t>(i)] = detail::evaluate_realization(plan, i, result.rho_u);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = n;
            }
        }
    };

    if (workers <= 1)
        work();
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);

    for (auto &o : outputs)
    {
        result.samples.insert(result.samples.end(), o.rows.begin(), o.rows.end());
        result.n_out_of_range_links += o.n_out_of_range;
        result.n_zf_rejected += o.n_zf_rejected;
    }
    for (const RunSpec &run : plan.runs)
        result.summaries.push_back(summarize(run, result.samples, plan.percentiles));
    return result;
}

} // namespace cfmimo

#endif
