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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include <cfmimo/montecarlo.hpp>

using namespace cfmimo;

namespace
{

ExperimentPlan small_plan()
{
    ExperimentPlan p;
    p.morphology = urban_preset();
    p.M = 24;
    p.K = 6;
    p.n_largescale = 12;
    p.n_smallscale = 20;
    p.master_seed = 2468;
    p.runs = {{Configuration::cl_mr, PowerMode::full}, {Configuration::cl_mr, PowerMode::maxmin},
              {Configuration::cl_zf, PowerMode::full}, {Configuration::cl_zf, PowerMode::maxmin},
              {Configuration::cf_mr, PowerMode::full}, {Configuration::cf_mr, PowerMode::maxmin},
              {Configuration::cf_zf, PowerMode::full}, {Configuration::cf_zf, PowerMode::maxmin}};
    return p;
}

} // namespace

TEST(LikelyRate, LowerRankConvention)
{
    std::vector<double> s(100);
    std::iota(s.begin(), s.end(), 1.0);
    EXPECT_EQ(likely_rate(s, 1.0), 1.0);
    EXPECT_EQ(likely_rate(s, 5.0), 5.0);
    EXPECT_EQ(likely_rate(s, 50.0), 50.0);
    EXPECT_EQ(likely_rate(s, 0.5), 1.0);
    EXPECT_EQ(likely_rate(s, 99.9), 100.0);

    const std::vector<double> flat(37, 2.5);
    for (double p : {0.1, 1.0, 5.0, 50.0, 99.0})
        EXPECT_EQ(likely_rate(flat, p), 2.5);

    EXPECT_THROW(likely_rate(std::vector<double>{}, 1.0), DomainError);
    EXPECT_THROW(likely_rate(s, 0.0), DomainError);
    EXPECT_THROW(likely_rate(s, 100.0), DomainError);
}

TEST(Throughput, Product)
{
    EXPECT_DOUBLE_EQ(throughput_from_se(6.0, 10e6), 60e6);
    EXPECT_DOUBLE_EQ(throughput_from_se(5.6, 10e6), 56e6);
    EXPECT_DOUBLE_EQ(throughput_from_se(0.0, 10e6), 0.0);
    EXPECT_THROW(throughput_from_se(-1.0, 10e6), DomainError);
}

TEST(RunExperiment, CountsSamples)
{
    ExperimentPlan p = small_plan();
    p.K = 18;
    p.M = 40;
    p.n_largescale = 1;
    p.runs = {{Configuration::cf_zf, PowerMode::full}};
    const auto r = run_experiment(p);
    ASSERT_EQ(r.summaries.size(), 1u);
    EXPECT_EQ(r.summaries[0].n_samples(), 18u);
    EXPECT_EQ(r.samples.size(), 18u);
}

TEST(RunExperiment, RejectsBadPlans)
{
    ExperimentPlan p = small_plan();
    p.M = p.K;
    EXPECT_THROW(run_experiment(p), ConfigError);
    p = small_plan();
    p.tau = p.K - 1;
    EXPECT_THROW(run_experiment(p), ConfigError);
    p = small_plan();
    p.runs.push_back(p.runs.front());
    EXPECT_THROW(run_experiment(p), ConfigError);
    p = small_plan();
    p.percentiles = {0.0};
    EXPECT_THROW(run_experiment(p), ConfigError);
    p = small_plan();
    p.runs = {{Configuration::cl_mr, PowerMode::full}};
    p.M = 3; // MR alone is fine with M <= K
    EXPECT_NO_THROW(run_experiment(p));
}

TEST(RunExperiment, IndependentOfWorkerCount)
{
    ExperimentPlan p = small_plan();
    p.workers = 1;
    const auto a = run_experiment(p);
    for (int w : {3, 8})
    {
        p.workers = w;
        const auto b = run_experiment(p);
        ASSERT_EQ(a.samples.size(), b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i)
        {
            ASSERT_EQ(a.samples[i].sinr, b.samples[i].sinr);
            ASSERT_EQ(a.samples[i].eta, b.samples[i].eta);
        }
    }
}

TEST(RunExperiment, AddingRunsDoesNotPerturbOthers)
{
    ExperimentPlan p = small_plan();
    p.runs = {{Configuration::cf_zf, PowerMode::full}};
    const auto alone = run_experiment(p).summary(p.runs[0]);
    p = small_plan();
    const auto together = run_experiment(p).summary({Configuration::cf_zf, PowerMode::full});
    EXPECT_EQ(alone.se_sorted, together.se_sorted);
}

TEST(RunExperiment, PooledInvariants)
{
    const ExperimentPlan p = small_plan();
    const auto r = run_experiment(p);
    ASSERT_EQ(r.summaries.size(), p.runs.size());
    for (const auto &s : r.summaries)
    {
        EXPECT_EQ(s.n_samples(), static_cast<std::size_t>(p.n_largescale * p.K));
        EXPECT_TRUE(std::is_sorted(s.se_sorted.begin(), s.se_sorted.end()));
        EXPECT_TRUE(std::is_sorted(s.values.begin(), s.values.end()));
        if (s.run.config == Configuration::cf_mr)
            EXPECT_EQ(s.bound_se_sorted.size(), s.n_samples());
        else
            EXPECT_TRUE(s.bound_se_sorted.empty());
    }

    // cf-MR samples stay strictly below their per-user bound; the max-min
    // bound caps the smallest SINR of each realization.
    std::map<int, std::pair<double, double>> min_maxmin; // realization -> (min sinr, bound)
    for (const auto &row : r.samples)
    {
        if (row.run.config != Configuration::cf_mr)
            continue;
        EXPECT_LT(row.sinr, row.bound_sinr);
        if (row.run.power != PowerMode::maxmin)
            continue;
        auto [it, fresh] = min_maxmin.try_emplace(row.realization, row.sinr, row.maxmin_bound_sinr);
        if (!fresh)
            it->second.first = std::min(it->second.first, row.sinr);
    }
    EXPECT_EQ(min_maxmin.size(), static_cast<std::size_t>(p.n_largescale));
    for (const auto &[i, v] : min_maxmin)
        EXPECT_LT(v.first, v.second) << "realization " << i;
}

// Within one realization, the weakest full-power user never beats the max-min common rate.
TEST(RunExperiment, MaxMinDominatesWorstFullPowerUser)
{
    const ExperimentPlan p = small_plan();
    const auto r = run_experiment(p);
    std::map<std::tuple<int, Configuration, PowerMode>, double> worst;
    for (const auto &row : r.samples)
    {
        auto key = std::make_tuple(row.realization, row.run.config, row.run.power);
        auto it = worst.find(key);
        worst[key] = it == worst.end() ? row.se : std::min(it->second, row.se);
    }
    for (int i = 0; i < p.n_largescale; ++i)
        for (auto c : {Configuration::cl_mr, Configuration::cl_zf, Configuration::cf_mr, Configuration::cf_zf})
        {
            const double full = worst.at({i, c, PowerMode::full});
            const double mm = worst.at({i, c, PowerMode::maxmin});
            EXPECT_LE(full, mm * (1 + 1e-4)) << to_string(c) << " realization " << i;
        }
}

TEST(SeedDerivation, DistinctStreams)
{
    EXPECT_NE(derive_seed(1, 0, StreamPurpose::ap_placement), derive_seed(1, 0, StreamPurpose::user_placement));
    EXPECT_NE(derive_seed(1, 0, StreamPurpose::ap_placement), derive_seed(1, 1, StreamPurpose::ap_placement));
    EXPECT_NE(derive_seed(1, 0, StreamPurpose::ap_placement), derive_seed(2, 0, StreamPurpose::ap_placement));
    EXPECT_EQ(derive_seed(9, 4, StreamPurpose::small_scale), derive_seed(9, 4, StreamPurpose::small_scale));
}

// Max-min runs hand every user of a realization the same SINR.
TEST(RunExperiment, MaxMinEqualizesWithinRealization)
{
    ExperimentPlan p = small_plan();
    p.M = 400;
    p.runs = {{Configuration::cf_mr, PowerMode::maxmin}, {Configuration::cf_zf, PowerMode::maxmin},
              {Configuration::cl_mr, PowerMode::maxmin}, {Configuration::cl_zf, PowerMode::maxmin}};
    const auto r = run_experiment(p);
    std::map<std::pair<int, Configuration>, std::pair<double, double>> range;
    for (const auto &row : r.samples)
    {
        auto [it, fresh] = range.try_emplace({row.realization, row.run.config}, row.sinr, row.sinr);
        it->second.first = std::min(it->second.first, row.sinr);
        it->second.second = std::max(it->second.second, row.sinr);
    }
    for (const auto &[key, v] : range)
        EXPECT_LE(v.second / v.first - 1.0, 10 * p.bisection.rel_tol)
            << to_string(key.second) << " realization " << key.first;
}
