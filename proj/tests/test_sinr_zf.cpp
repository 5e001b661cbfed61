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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <cfmimo/channel.hpp>
#include <cfmimo/geometry.hpp>
#include <cfmimo/propagation.hpp>
#include <cfmimo/sinr_mr.hpp>
#include <cfmimo/sinr_zf.hpp>

using namespace cfmimo;

namespace
{

const double rho = std::pow(10.0, 12.5);

// Conservative standard error of the cf-ZF SINR from the per-entry standard
// errors (triangle inequality, valid whatever the correlation).
Vector sinr_stderr(const ZfExpectations &e, const PowerControlVector &eta, const Vector &sinr)
{
    Vector out(sinr.size());
    for (Eigen::Index k = 0; k < sinr.size(); ++k)
    {
        const double denom = rho * e.e_b2.row(k).dot(eta.values()) + e.e_diag_inv[k];
        const double se_denom = rho * e.e_b2_stderr.row(k).dot(eta.values()) + e.e_diag_inv_stderr[k];
        out[k] = sinr[k] * se_denom / denom;
    }
    return out;
}

} // namespace

TEST(SinrClZf, PerfectCsiRemovesInterference)
{
    Vector b(3);
    b << 1e-12, 2e-13, 5e-11;
    Vector eta(3);
    eta << 1.0, 0.5, 0.25;
    const auto r = sinr_cl_zf(b, b, PowerControlVector(eta), 20, rho);
    for (int k = 0; k < 3; ++k)
        EXPECT_NEAR(r.sinr[k], 17 * rho * b[k] * eta[k], 1e-12 * r.sinr[k]);
}

TEST(SinrClZf, OneSpareAntenna)
{
    Vector b(2), g(2);
    b << 1e-12, 3e-13;
    g << 0.9e-12, 2e-13;
    const auto r = sinr_cl_zf(g, b, PowerControlVector::ones(2), 3, rho);
    const double denom = 1 + rho * (b - g).sum();
    EXPECT_NEAR(r.sinr[0], rho * g[0] / denom, 1e-12 * r.sinr[0]);
    EXPECT_NEAR(r.sinr[1], rho * g[1] / denom, 1e-12 * r.sinr[1]);
}

TEST(SinrClZf, RequiresMoreAntennasThanUsers)
{
    Vector b = Vector::Constant(4, 1e-12);
    EXPECT_THROW(sinr_cl_zf(b, b, PowerControlVector::ones(4), 4, rho), DomainError);
    EXPECT_THROW(sinr_cl_zf(b, b, PowerControlVector::ones(4), 2, rho), DomainError);
}

// With the urban cellular geometry, interference dominates noise and ZF beats MR.
TEST(SinrClZf, BeatsMrOnUrbanDraws)
{
    const auto params = urban_preset().for_deployment(Deployment::cellular);
    for (int i = 0; i < 100; ++i)
    {
        RandomStream u(1000 + i), s(2000 + i);
        const auto pl = make_cellular_placement(1, 18, 500.0, params.ap_height, params.user_height, u);
        const auto lsf = draw_beta(pl, params, s);
        const auto st = gamma_from_beta(lsf, rho, 18);
        const Vector g = st.gamma.row(0).transpose(), b = lsf.beta.row(0).transpose();
        ASSERT_GT(rho * b.sum(), 100.0);
        const auto zf = sinr_cl_zf(g, b, PowerControlVector::ones(18), 200, rho);
        const auto mr = sinr_cl_mr(g, b, PowerControlVector::ones(18), 200, rho);
        for (int k = 0; k < 18; ++k)
            ASSERT_GT(zf.sinr[k], mr.sinr[k]);
    }
}

TEST(ZfExpectations, NoEstimationErrorMeansNoLeakage)
{
    ChannelStats st;
    st.beta = Matrix::Constant(12, 3, 1e-12);
    st.gamma = st.beta;
    st.tau = 3;
    st.rho_u = rho;
    RandomStream rng(1);
    const auto e = estimate_zf_expectations(st, 50, rng);
    EXPECT_TRUE(e.e_b2.isZero(0.0));
    EXPECT_TRUE((e.e_diag_inv.array() > 0.0).all());
    EXPECT_EQ(e.n_realizations, 50);
}

// Complex inverse Wishart: E[(G^H G)^-1]_kk = 1 / ((M - K) gamma) for i.i.d. CN(0, gamma) entries.
TEST(ZfExpectations, InverseGramDiagonalSingleUser)
{
    const double g = 2e-13;
    for (int M : {8, 32, 128})
    {
        ChannelStats st;
        st.gamma = Matrix::Constant(M, 1, g);
        st.beta = Matrix::Constant(M, 1, 1.1 * g);
        st.tau = 1;
        st.rho_u = rho;
        RandomStream rng(M);
        const auto e = estimate_zf_expectations(st, 4000, rng);
        const double expected = 1.0 / ((M - 1) * g);
        EXPECT_NEAR(e.e_diag_inv[0], expected, 4 * e.e_diag_inv_stderr[0]) << "M=" << M;
        EXPECT_NEAR(e.e_diag_inv[0] / expected, 1.0, 0.05);
    }
}

// i.i.d. statistics: E|b_kk'|^2 = v / ((M - K) gamma) for every (k, k').
TEST(ZfExpectations, IidLeakageOracle)
{
    const int M = 24, K = 4;
    const double beta = 1e-13;
    const auto st = gamma_from_beta(Matrix::Constant(M, K, beta), rho, K);
    const double g = st.gamma(0, 0), v = beta - g;
    RandomStream rng(42);
    const auto e = estimate_zf_expectations(st, 3000, rng);
    const double expected_b2 = v / ((M - K) * g);
    const double expected_d = 1.0 / ((M - K) * g);
    for (int k = 0; k < K; ++k)
    {
        EXPECT_NEAR(e.e_diag_inv[k], expected_d, 4 * e.e_diag_inv_stderr[k]);
        for (int j = 0; j < K; ++j)
            EXPECT_NEAR(e.e_b2(k, j), expected_b2, 4 * e.e_b2_stderr(k, j));
    }
    EXPECT_TRUE((e.e_b2.array() >= 0).all());
}

TEST(ZfExpectations, StandardErrorShrinksWithSqrtN)
{
    const auto st = gamma_from_beta(Matrix::Constant(20, 3, 1e-13), rho, 3);
    RandomStream a(5), b(6);
    const auto small = estimate_zf_expectations(st, 500, a);
    const auto large = estimate_zf_expectations(st, 2000, b);
    const double ratio = small.e_diag_inv_stderr.mean() / large.e_diag_inv_stderr.mean();
    EXPECT_NEAR(ratio, 2.0, 0.4);
    const double ratio_b = small.e_b2_stderr.mean() / large.e_b2_stderr.mean();
    EXPECT_NEAR(ratio_b, 2.0, 0.4);
}

TEST(ZfExpectations, RejectsBadArguments)
{
    const auto st = gamma_from_beta(Matrix::Constant(3, 3, 1e-13), rho, 3);
    RandomStream rng(1);
    EXPECT_THROW(estimate_zf_expectations(st, 10, rng), ConfigError);
    const auto ok = gamma_from_beta(Matrix::Constant(5, 3, 1e-13), rho, 3);
    EXPECT_THROW(estimate_zf_expectations(ok, 1, rng), ConfigError);
}

TEST(ZfExpectations, DeterministicForSeed)
{
    const auto st = gamma_from_beta(Matrix::Constant(10, 3, 1e-13), rho, 3);
    RandomStream a(3), b(3);
    const auto e1 = estimate_zf_expectations(st, 20, a);
    const auto e2 = estimate_zf_expectations(st, 20, b);
    EXPECT_EQ(e1.e_b2, e2.e_b2);
    EXPECT_EQ(e1.e_diag_inv, e2.e_diag_inv);
}

TEST(SinrCfZf, ZeroPower)
{
    const auto st = gamma_from_beta(Matrix::Constant(10, 3, 1e-13), rho, 3);
    RandomStream rng(3);
    const auto e = estimate_zf_expectations(st, 20, rng);
    EXPECT_TRUE(sinr_cf_zf(e, PowerControlVector::zeros(3), rho).sinr.isZero(0.0));
    EXPECT_THROW(sinr_cf_zf(e, PowerControlVector::ones(4), rho), DomainError);
}

TEST(SinrCfZf, MatchesSingleCellClosedFormForColocatedStatistics)
{
    RandomStream pick(8);
    std::uniform_real_distribution<double> ex(-14.0, -11.0);
    const int M = 30, K = 5;
    for (int trial = 0; trial < 5; ++trial)
    {
        Vector b(K);
        for (int k = 0; k < K; ++k)
            b[k] = std::pow(10.0, ex(pick));
        Matrix beta(M, K);
        beta.rowwise() = b.transpose();
        const auto st = gamma_from_beta(beta, rho, K);
        RandomStream rng(100 + trial);
        const auto e = estimate_zf_expectations(st, 1000, rng);
        const auto eta = PowerControlVector::ones(K);
        const auto cf = sinr_cf_zf(e, eta, rho);
        const auto cl = sinr_cl_zf(st.gamma.row(0).transpose(), b, eta, M, rho);
        const Vector se = sinr_stderr(e, eta, cf.sinr);
        for (int k = 0; k < K; ++k)
            EXPECT_NEAR(cf.sinr[k], cl.sinr[k], 3 * se[k]) << "trial " << trial << " user " << k;
    }
}

TEST(SinrCfZf, NondecreasingInOwnPower)
{
    const auto params = urban_preset();
    RandomStream a(1), u(2), s(3), rng(4);
    const auto pl = make_cellfree_placement(40, 6, 500.0, params.ap_height, params.user_height, a, u);
    const auto st = gamma_from_beta(draw_beta(pl, params, s), rho, 6);
    const auto e = estimate_zf_expectations(st, 100, rng);
    for (int k = 0; k < 6; ++k)
    {
        double prev = -1.0;
        for (double x = 0.0; x <= 1.0; x += 0.05)
        {
            Vector eta = Vector::Constant(6, 0.7);
            eta[k] = x;
            const double s_k = sinr_cf_zf(e, PowerControlVector(eta), rho).sinr[k];
            ASSERT_GE(s_k, prev);
            prev = s_k;
        }
    }
}
