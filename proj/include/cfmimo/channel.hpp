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

#ifndef CFMIMO_CHANNEL_HPP
#define CFMIMO_CHANNEL_HPP

#include <cmath>
#include <complex>
#include <random>

#include "propagation.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace cfmimo
{

// Statistics of the MMSE channel estimate from mutually orthogonal pilots of
// length tau.
struct ChannelStats
{
    Matrix gamma; // mean-square of the estimate
    Matrix beta;  // large-scale fading it was derived from
    int tau = 0;
    double rho_u = 0.0;

    Eigen::Index num_aps() const { return gamma.rows(); }
    Eigen::Index num_users() const { return gamma.cols(); }

    // Per-entry variance of the estimation error (MMSE orthogonality).
    Matrix error_variance() const { return (beta - gamma).cwiseMax(0.0); }
};

// gamma_{m,k} = rho tau beta^2 / (1 + rho tau beta).
inline ChannelStats gamma_from_beta(const Matrix &beta, double rho_u, int tau)
{
    if (tau < beta.cols())
        throw ConfigError("gamma_from_beta: pilot length tau must be at least K for orthogonal pilots");
    if (!(rho_u > 0.0))
        throw ConfigError("gamma_from_beta: rho_u must be positive");
    if ((beta.array() < 0.0).any() || !beta.allFinite())
        throw DomainError("gamma_from_beta: beta must be finite and non-negative");
    const double rt = rho_u * tau;
    Matrix gamma = (rt * beta.array().square() / (1.0 + rt * beta.array())).matrix();
    return {std::move(gamma), beta, tau, rho_u};
}

inline ChannelStats gamma_from_beta(const LargeScaleFading &lsf, double rho_u, int tau)
{
    return gamma_from_beta(lsf.beta, rho_u, tau);
}

// One small-scale draw of the estimate and its error.
struct ChannelRealization
{
    ComplexMatrix g_hat;
    ComplexMatrix g_tilde;

    ComplexMatrix g() const { return g_hat + g_tilde; }
};

namespace detail
{

// Fills out with CN(0, variance) entries, column by column.
inline void fill_circular_gaussian(ComplexMatrix &out, const Matrix &variance, RandomStream &rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    out.resize(variance.rows(), variance.cols());
    for (Eigen::Index k = 0; k < variance.cols(); ++k)
        for (Eigen::Index m = 0; m < variance.rows(); ++m)
        {
            const double s = std::sqrt(0.5 * variance(m, k));
            const double re = normal(rng);
            const double im = normal(rng);
            out(m, k) = {s * re, s * im};
        }
}

} // namespace detail

inline ChannelRealization draw_channel(const ChannelStats &stats, RandomStream &rng)
{
    ChannelRealization r;
    detail::fill_circular_gaussian(r.g_hat, stats.gamma, rng);
    detail::fill_circular_gaussian(r.g_tilde, stats.error_variance(), rng);
    return r;
}

} // namespace cfmimo

#endif
