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

#ifndef CFMIMO_SINR_MR_HPP
#define CFMIMO_SINR_MR_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include "types.hpp"

namespace cfmimo
{

// Uplink power-control coefficients, each in [0, 1].
class PowerControlVector
{
  public:
    PowerControlVector() = default;

    explicit PowerControlVector(Vector eta) : eta_(std::move(eta))
    {
        for (Eigen::Index k = 0; k < eta_.size(); ++k)
            if (!(eta_[k] >= 0.0 && eta_[k] <= 1.0))
                throw DomainError("power control coefficient " + std::to_string(k) + " outside [0, 1]");
    }

    static PowerControlVector ones(Eigen::Index K) { return PowerControlVector(Vector::Ones(K)); }
    static PowerControlVector zeros(Eigen::Index K) { return PowerControlVector(Vector::Zero(K)); }

    const Vector &values() const { return eta_; }
    Eigen::Index size() const { return eta_.size(); }
    double operator[](Eigen::Index k) const { return eta_[k]; }

  private:
    Vector eta_;
};

struct SinrReport
{
    Vector sinr; // linear
    Vector se;   // log2(1 + sinr), bits/s/Hz
    Configuration config = Configuration::cl_mr;
    PowerMode power = PowerMode::full;
    PowerControlVector eta;
};

inline SinrReport make_report(Vector sinr, Configuration config, PowerMode power, PowerControlVector eta)
{
    Vector se(sinr.size());
    for (Eigen::Index k = 0; k < sinr.size(); ++k)
        se[k] = std::log2(1.0 + sinr[k]);
    return {std::move(sinr), std::move(se), config, power, std::move(eta)};
}

namespace detail
{

inline void require_same_length(Eigen::Index a, Eigen::Index b, const char *what)
{
    if (a != b || a == 0)
        throw DomainError(std::string(what) + ": inconsistent or empty user dimension");
}

} // namespace detail

// Single-cell MR:  M rho gamma_k eta_k / (1 + rho sum_k' beta_k' eta_k').
inline SinrReport sinr_cl_mr(const Vector &gamma, const Vector &beta, const PowerControlVector &eta, int M, double rho_u,
                             PowerMode power = PowerMode::full)
{
    detail::require_same_length(gamma.size(), beta.size(), "sinr_cl_mr");
    detail::require_same_length(gamma.size(), eta.size(), "sinr_cl_mr");
    if (M < 1)
        throw DomainError("sinr_cl_mr: M must be positive");
    const double denom = 1.0 + rho_u * beta.dot(eta.values());
    Vector sinr = (M * rho_u / denom) * gamma.cwiseProduct(eta.values());
    return make_report(std::move(sinr), Configuration::cl_mr, power, eta);
}

// Inner products shared by the cell-free MR SINR and its max-min system.
struct CfMrTerms
{
    Vector gamma_sum;   // <gamma_k, 1>
    Matrix cross;       // <gamma_k, beta_k'>, K x K
};

inline CfMrTerms cf_mr_terms(const Matrix &gamma, const Matrix &beta)
{
    if (gamma.rows() != beta.rows() || gamma.cols() != beta.cols() || gamma.size() == 0)
        throw DomainError("cell-free MR: gamma and beta must have the same non-empty shape");
    return {gamma.colwise().sum().transpose(), gamma.transpose() * beta};
}

// Cell-free MR:
//   rho (sum_m gamma_mk)^2 eta_k / (sum_m gamma_mk + rho sum_k' eta_k' sum_m gamma_mk beta_mk').
inline SinrReport sinr_cf_mr(const CfMrTerms &t, const PowerControlVector &eta, double rho_u,
                             PowerMode power = PowerMode::full)
{
    detail::require_same_length(t.gamma_sum.size(), eta.size(), "sinr_cf_mr");
    const Vector interference = t.cross * eta.values();
    Vector sinr(eta.size());
    for (Eigen::Index k = 0; k < eta.size(); ++k)
    {
        const double s = t.gamma_sum[k];
        sinr[k] = rho_u * s * s * eta[k] / (s + rho_u * interference[k]);
    }
    return make_report(std::move(sinr), Configuration::cf_mr, power, eta);
}

inline SinrReport sinr_cf_mr(const Matrix &gamma, const Matrix &beta, const PowerControlVector &eta, double rho_u,
                             PowerMode power = PowerMode::full)
{
    return sinr_cf_mr(cf_mr_terms(gamma, beta), eta, rho_u, power);
}

struct MrUpperBound
{
    Vector per_user; // (sum_m gamma_mk)^2 / sum_m gamma_mk^2
    double maxmin = 0.0; // min over users
};

// Power-control independent cap on the cell-free MR SINR of each user. It
// equals M iff the user's gamma column is flat and 1 iff a single AP carries
// all of it.
inline MrUpperBound mr_upper_bound(const Matrix &gamma)
{
    if (gamma.size() == 0)
        throw DomainError("mr_upper_bound: empty gamma");
    MrUpperBound out{Vector(gamma.cols()), 0.0};
    for (Eigen::Index k = 0; k < gamma.cols(); ++k)
    {
        const double sq = gamma.col(k).squaredNorm();
        if (!(sq > 0.0))
            throw DomainError("mr_upper_bound: gamma column " + std::to_string(k) + " is zero");
        const double s = gamma.col(k).sum();
        out.per_user[k] = s * s / sq;
    }
    out.maxmin = out.per_user.minCoeff();
    return out;
}

} // namespace cfmimo

#endif
