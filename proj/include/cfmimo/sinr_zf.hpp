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

#ifndef CFMIMO_SINR_ZF_HPP
#define CFMIMO_SINR_ZF_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "channel.hpp"
#include "rng.hpp"
#include "sinr_mr.hpp"
#include "types.hpp"

namespace cfmimo
{

// Single-cell ZF:  (M - K) rho gamma_k eta_k / (1 + rho sum_k' (beta_k' - gamma_k') eta_k').
inline SinrReport sinr_cl_zf(const Vector &gamma, const Vector &beta, const PowerControlVector &eta, int M, double rho_u,
                             PowerMode power = PowerMode::full)
{
    detail::require_same_length(gamma.size(), beta.size(), "sinr_cl_zf");
    detail::require_same_length(gamma.size(), eta.size(), "sinr_cl_zf");
    const auto K = static_cast<int>(gamma.size());
    if (M <= K)
        throw DomainError("sinr_cl_zf: zero-forcing needs M > K");
    const double denom = 1.0 + rho_u * (beta - gamma).dot(eta.values());
    Vector sinr = ((M - K) * rho_u / denom) * gamma.cwiseProduct(eta.values());
    return make_report(std::move(sinr), Configuration::cl_zf, power, eta);
}

// Small-scale expectations entering the cell-free ZF SINR, conditional on one
// large-scale fading profile.
struct ZfExpectations
{
    Matrix e_b2;           // E|b_{k,k'}|^2 with B = A_ZF G_tilde
    Vector e_diag_inv;     // [E (G_hat^H G_hat)^-1]_{k,k}
    Matrix e_b2_stderr;
    Vector e_diag_inv_stderr;
    int n_realizations = 0;
    int n_rejected = 0;

    Eigen::Index num_users() const { return e_diag_inv.size(); }
};

namespace detail
{

// Neumaier-compensated running sums of a matrix and of its elementwise square.
class CompensatedMoments
{
  public:
    CompensatedMoments(Eigen::Index rows, Eigen::Index cols)
        : sum_(Matrix::Zero(rows, cols)), sum_c_(Matrix::Zero(rows, cols)), sq_(Matrix::Zero(rows, cols)),
          sq_c_(Matrix::Zero(rows, cols))
    {
    }

    void add(const Matrix &x)
    {
        for (Eigen::Index i = 0; i < x.size(); ++i)
        {
            accumulate(sum_.data()[i], sum_c_.data()[i], x.data()[i]);
            accumulate(sq_.data()[i], sq_c_.data()[i], x.data()[i] * x.data()[i]);
        }
        ++n_;
    }

    Matrix mean() const { return (sum_ + sum_c_) / static_cast<double>(n_); }

    // Standard error of the mean.
    Matrix stderr_of_mean() const
    {
        const double n = static_cast<double>(n_);
        const Matrix m = mean();
        Matrix var = ((sq_ + sq_c_) / n - m.cwiseProduct(m)).cwiseMax(0.0) * (n / (n - 1.0));
        return (var / n).cwiseSqrt();
    }

  private:
    static void accumulate(double &sum, double &comp, double x)
    {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    Matrix sum_, sum_c_, sq_, sq_c_;
    long n_ = 0;
};

} // namespace detail

struct ZfEstimatorOptions
{
    // Realizations whose R factor has min|R_kk| / max|R_kk| below this are redrawn.
    double min_diag_ratio = 1e-10;
    int max_consecutive_rejections = 1000;
};

// Monte Carlo estimate of the cell-free ZF expectations. Each draw of
// (G_hat, G_tilde) is factored as G_hat = Q R (thin QR), so that
// A_ZF = R^-1 Q^H, B = R^-1 (Q^H G_tilde) and
// diag (G_hat^H G_hat)^-1 = row norms^2 of R^-1.
inline ZfExpectations estimate_zf_expectations(const ChannelStats &stats, int n_real, RandomStream &rng,
                                               const ZfEstimatorOptions &opts = {})
{
    const Eigen::Index M = stats.num_aps();
    const Eigen::Index K = stats.num_users();
    if (M <= K)
        throw ConfigError("estimate_zf_expectations: zero-forcing needs M > K");
    if (n_real < 2)
        throw ConfigError("estimate_zf_expectations: need at least two realizations");

    const Matrix error_var = stats.error_variance();
    detail::CompensatedMoments b2(K, K);
    detail::CompensatedMoments diag(K, 1);
    ZfExpectations out;

    ComplexMatrix g_hat, g_tilde;
    Matrix b2_sample(K, K);
    Matrix diag_sample(K, 1);
    int consecutive_rejections = 0;
    while (out.n_realizations < n_real)
    {
        detail::fill_circular_gaussian(g_hat, stats.gamma, rng);
        detail::fill_circular_gaussian(g_tilde, error_var, rng);

        Eigen::HouseholderQR<ComplexMatrix> qr(g_hat);
        const auto r_diag = qr.matrixQR().diagonal().cwiseAbs();
        if (!(r_diag.minCoeff() > opts.min_diag_ratio * r_diag.maxCoeff()))
        {
            ++out.n_rejected;
            if (++consecutive_rejections >= opts.max_consecutive_rejections)
                throw DomainError("estimate_zf_expectations: estimated channel is persistently rank deficient");
            continue;
        }
        consecutive_rejections = 0;

        const auto R = qr.matrixQR().topLeftCorner(K, K).triangularView<Eigen::Upper>();
        const ComplexMatrix r_inv = R.solve(ComplexMatrix::Identity(K, K));
        const ComplexMatrix projected = (qr.householderQ().adjoint() * g_tilde).topRows(K);
        const ComplexMatrix B = r_inv * projected;

        b2_sample = B.cwiseAbs2();
        diag_sample = r_inv.rowwise().squaredNorm();
        b2.add(b2_sample);
        diag.add(diag_sample);
        ++out.n_realizations;
    }

    out.e_b2 = b2.mean();
    out.e_b2_stderr = b2.stderr_of_mean();
    out.e_diag_inv = diag.mean().col(0);
    out.e_diag_inv_stderr = diag.stderr_of_mean().col(0);
    return out;
}

// Cell-free ZF:  rho eta_k / (rho sum_k' eta_k' E|b_{k,k'}|^2 + [E (G_hat^H G_hat)^-1]_{k,k}).
inline SinrReport sinr_cf_zf(const ZfExpectations &e, const PowerControlVector &eta, double rho_u,
                             PowerMode power = PowerMode::full)
{
    detail::require_same_length(e.num_users(), eta.size(), "sinr_cf_zf");
    const Vector interference = e.e_b2 * eta.values();
    Vector sinr(eta.size());
    for (Eigen::Index k = 0; k < eta.size(); ++k)
        sinr[k] = rho_u * eta[k] / (rho_u * interference[k] + e.e_diag_inv[k]);
    return make_report(std::move(sinr), Configuration::cf_zf, power, eta);
}

} // namespace cfmimo

#endif
