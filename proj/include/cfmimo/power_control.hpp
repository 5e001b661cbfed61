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

#ifndef CFMIMO_POWER_CONTROL_HPP
#define CFMIMO_POWER_CONTROL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "sinr_mr.hpp"
#include "sinr_zf.hpp"
#include "types.hpp"

namespace cfmimo
{

struct BisectionOptions
{
    double rel_tol = 1e-5;
    int max_iterations = 100;
};

struct MaxMinResult
{
    PowerControlVector eta;
    double zeta = 0.0;     // achieved common SINR (linear)
    int iterations = 0;
    double residual = 0.0; // max relative deviation of per-user SINR from zeta
    bool converged = true;
    std::string diagnostic;
};

inline PowerControlVector full_power(int K)
{
    if (K < 1)
        throw ConfigError("full_power: K must be positive");
    return PowerControlVector::ones(K);
}

// eta_k = min_k' gamma_k' / gamma_k. Shared by single-cell MR and ZF.
inline PowerControlVector maxmin_cl_eta(const Vector &gamma)
{
    if (gamma.size() == 0 || !(gamma.array() > 0.0).all())
        throw DomainError("maxmin_cl: every gamma_k must be positive");
    const double g_min = gamma.minCoeff();
    Vector eta(gamma.size());
    for (Eigen::Index k = 0; k < gamma.size(); ++k)
        eta[k] = std::min(1.0, g_min / gamma[k]);
    return PowerControlVector(std::move(eta));
}

// Single-cell max-min with the closed-form common SINR
//   MR: M rho / (1/min gamma + rho sum beta/gamma)
//   ZF: (M-K) rho / (1/min gamma + rho sum (beta-gamma)/gamma)
inline MaxMinResult maxmin_cl(const Vector &gamma, const Vector &beta, int M, double rho_u, Decoder decoder)
{
    detail::require_same_length(gamma.size(), beta.size(), "maxmin_cl");
    const auto K = static_cast<int>(gamma.size());
    MaxMinResult out;
    out.eta = maxmin_cl_eta(gamma);
    const double inv_min = 1.0 / gamma.minCoeff();
    SinrReport check;
    if (decoder == Decoder::mr)
    {
        out.zeta = M * rho_u / (inv_min + rho_u * beta.cwiseQuotient(gamma).sum());
        check = sinr_cl_mr(gamma, beta, out.eta, M, rho_u, PowerMode::maxmin);
    }
    else
    {
        if (M <= K)
            throw DomainError("maxmin_cl: zero-forcing needs M > K");
        out.zeta = (M - K) * rho_u / (inv_min + rho_u * (beta - gamma).cwiseQuotient(gamma).sum());
        check = sinr_cl_zf(gamma, beta, out.eta, M, rho_u, PowerMode::maxmin);
    }
    out.residual = ((check.sinr.array() - out.zeta).abs() / out.zeta).maxCoeff();
    return out;
}

// Family of per-user SINRs of the form
//   SINR_k(eta) = eta_k / ((F eta)_k + u_k),   F >= 0, u > 0,
// for which a common SINR zeta is reachable iff (I - zeta F) eta = zeta u has
// a solution in [0, 1]^K.
struct CommonSinrSystem
{
    Matrix coupling; // F
    Vector noise;    // u

    Eigen::Index num_users() const { return noise.size(); }

    Vector sinr(const Vector &eta) const
    {
        return eta.cwiseQuotient(coupling * eta + noise);
    }

    // eta solving the linear system at zeta, if it exists and lies in the box.
    std::optional<Vector> feasible_eta(double zeta) const
    {
        const Eigen::Index K = num_users();
        const Matrix A = Matrix::Identity(K, K) - zeta * coupling;
        const Vector rhs = zeta * noise;
        const Eigen::PartialPivLU<Matrix> lu(A);
        const Vector eta = lu.solve(rhs);
        if (!eta.allFinite())
            return std::nullopt;
        const double scale = std::max(rhs.norm(), std::numeric_limits<double>::min());
        if ((A * eta - rhs).norm() > 1e-8 * scale)
            return std::nullopt;
        if ((eta.array() < 0.0).any() || (eta.array() > 1.0).any())
            return std::nullopt;
        return eta;
    }
};

// cf-MR max-min in normalized form: F_kk' = <gamma_k, beta_k'> / <gamma_k, 1>^2,
// u_k = 1 / (rho <gamma_k, 1>).
inline CommonSinrSystem cf_mr_system(const CfMrTerms &t, double rho_u)
{
    const Vector s2 = t.gamma_sum.cwiseAbs2();
    return {s2.cwiseInverse().asDiagonal() * t.cross, (rho_u * t.gamma_sum).cwiseInverse()};
}

// cf-ZF max-min: F = E|B|^2, u = diag E (G_hat^H G_hat)^-1 / rho.
inline CommonSinrSystem cf_zf_system(const ZfExpectations &e, double rho_u)
{
    return {e.e_b2, e.e_diag_inv / rho_u};
}

// Bisection on the common SINR between 0 (always feasible) and `upper`. The
// bracket is widened if `upper` turns out to be feasible.
inline MaxMinResult bisect_common_sinr(const CommonSinrSystem &sys, double upper, const BisectionOptions &opts)
{
    const Eigen::Index K = sys.num_users();
    if (K == 0)
        throw DomainError("bisect_common_sinr: empty system");
    if (!(opts.rel_tol > 0.0) || opts.max_iterations < 1)
        throw ConfigError("bisection: tolerance must be positive and the iteration cap at least 1");
    if (!(upper > 0.0) || !std::isfinite(upper))
        throw DomainError("bisect_common_sinr: upper bracket must be positive and finite");

    MaxMinResult out;
    double lo = 0.0;
    double hi = upper;
    Vector eta_lo = Vector::Zero(K);

    for (int widen = 0; widen < 64; ++widen)
    {
        auto eta = sys.feasible_eta(hi);
        if (!eta)
            break;
        lo = hi;
        eta_lo = *eta;
        hi *= 2.0;
    }

    // Keep going until the bracket is tight and the feasible end already has a
    // user near full power, so the final rescaling barely moves any SINR.
    auto done = [&] { return hi - lo <= opts.rel_tol * hi && eta_lo.maxCoeff() >= 1.0 - opts.rel_tol; };
    int it = 0;
    while (it < opts.max_iterations && !done())
    {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi))
            break;
        ++it;
        if (auto eta = sys.feasible_eta(mid))
        {
            lo = mid;
            eta_lo = *eta;
        }
        else
            hi = mid;
    }
    out.iterations = it;
    out.converged = done();
    if (!out.converged && hi - lo <= opts.rel_tol * hi)
        out.diagnostic = "bracket closed before any user reached full power";

    const double eta_max = eta_lo.maxCoeff();
    if (!(lo > 0.0) || !(eta_max > 0.0))
    {
        out.eta = PowerControlVector::zeros(K);
        out.zeta = 0.0;
        out.converged = false;
        out.diagnostic = "no feasible common SINR above zero";
        return out;
    }

    // The optimum has some user at full power; rescaling only raises every SINR.
    const Vector eta = (eta_lo / eta_max).cwiseMin(1.0).cwiseMax(0.0);
    const Vector s = sys.sinr(eta);
    out.eta = PowerControlVector(eta);
    out.zeta = s.minCoeff();
    out.residual = (s.maxCoeff() - out.zeta) / out.zeta;
    return out;
}

// Cell-free MR max-min. The bracket top is the min-over-users MR upper bound,
// which no power control can reach.
inline MaxMinResult maxmin_cf_mr(const Matrix &gamma, const Matrix &beta, double rho_u, const BisectionOptions &opts = {})
{
    if (!(rho_u > 0.0))
        throw ConfigError("maxmin_cf_mr: rho_u must be positive");
    const CfMrTerms terms = cf_mr_terms(gamma, beta);
    return bisect_common_sinr(cf_mr_system(terms, rho_u), mr_upper_bound(gamma).maxmin, opts);
}

// Cell-free ZF max-min. The bracket top is K times the best full-power SINR.
inline MaxMinResult maxmin_cf_zf(const ZfExpectations &e, double rho_u, const BisectionOptions &opts = {})
{
    if (!(rho_u > 0.0))
        throw ConfigError("maxmin_cf_zf: rho_u must be positive");
    const auto K = e.num_users();
    const SinrReport full = sinr_cf_zf(e, PowerControlVector::ones(K), rho_u);
    return bisect_common_sinr(cf_zf_system(e, rho_u), static_cast<double>(K) * full.sinr.maxCoeff(), opts);
}

} // namespace cfmimo

#endif
