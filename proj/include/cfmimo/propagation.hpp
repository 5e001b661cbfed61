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

#ifndef CFMIMO_PROPAGATION_HPP
#define CFMIMO_PROPAGATION_HPP

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <string_view>

#include "geometry.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace cfmimo
{

enum class Morphology
{
    urban,
    suburban,
    rural,
    custom
};

constexpr std::string_view to_string(Morphology m)
{
    switch (m)
    {
    case Morphology::urban: return "urban";
    case Morphology::suburban: return "suburban";
    case Morphology::rural: return "rural";
    case Morphology::custom: return "custom";
    }
    return "?";
}

// Parameters of the NLoS street-canyon path-loss model plus the coverage
// radius and shadowing spread of one morphology.
struct MorphologyParams
{
    Morphology tag = Morphology::custom;
    double street_width = 20.0;     // W, meters
    double building_height = 20.0;  // h, meters
    double ap_height = 20.0;        // h_AP, meters (distributed access points)
    double bs_height = 50.0;        // h_BS, meters (cellular tower)
    double user_height = 1.5;       // h_AT, meters
    double carrier_freq_ghz = 2.0;  // f_c
    double shadow_sigma_db = 6.0;   // sigma_sf
    double cell_radius_km = 0.5;    // R

    double cell_radius_m() const { return cell_radius_km * 1000.0; }

    // Copy with the antenna height seen by the path-loss model for the given
    // deployment (cellular arrays sit on the taller tower).
    MorphologyParams for_deployment(Deployment d) const
    {
        MorphologyParams p = *this;
        if (d == Deployment::cellular)
            p.ap_height = bs_height;
        return p;
    }

    void validate() const
    {
        if (!(street_width > 0 && building_height > 0 && ap_height > 0 && bs_height > 0 && user_height > 0 &&
              carrier_freq_ghz > 0 && cell_radius_km >= 0))
            throw ConfigError("morphology parameters: lengths and carrier frequency must be positive");
        if (!(shadow_sigma_db >= 0))
            throw ConfigError("morphology parameters: shadow_sigma_db must be non-negative");
        if (!(ap_height > user_height && bs_height > user_height))
            throw ConfigError("morphology parameters: antenna heights must exceed the user height");
    }
};

inline MorphologyParams urban_preset()
{
    return {Morphology::urban, 20.0, 20.0, 20.0, 50.0, 1.5, 2.0, 6.0, 0.5};
}

inline MorphologyParams suburban_preset()
{
    return {Morphology::suburban, 20.0, 10.0, 20.0, 50.0, 1.5, 2.0, 8.0, 1.0};
}

inline MorphologyParams rural_preset()
{
    return {Morphology::rural, 20.0, 5.0, 40.0, 50.0, 1.5, 0.45, 8.0, 4.0};
}

inline MorphologyParams morphology_preset(std::string_view name)
{
    if (name == "urban")
        return urban_preset();
    if (name == "suburban")
        return suburban_preset();
    if (name == "rural")
        return rural_preset();
    throw ConfigError("unknown morphology '" + std::string(name) + "' (expected urban|suburban|rural)");
}

inline constexpr double path_loss_min_distance = 10.0;
inline constexpr double path_loss_max_distance = 5000.0;

struct PathLoss
{
    double db = 0.0;
    bool in_range = true; // false when d lies outside [10 m, 5000 m]
};

// NLoS path loss in dB at slant distance d (meters). Outside the model's
// validity range the formula is still evaluated and the result is flagged.
inline PathLoss path_loss_db(double d, const MorphologyParams &p)
{
    if (!(d > 0.0))
        throw DomainError("path_loss_db: distance must be positive");
    using std::log10;
    const double h_ap = p.ap_height;
    const double h_ratio = p.building_height / h_ap;
    const double mobile = 3.2 * std::pow(log10(11.75 * p.user_height), 2) - 4.97;
    const double db = 161.04 - 7.1 * log10(p.street_width) + 7.5 * log10(p.building_height) -
                      (24.37 - 3.7 * h_ratio * h_ratio) * log10(h_ap) +
                      (43.42 - 3.1 * log10(h_ap)) * (log10(d) - 3.0) + 20.0 * log10(p.carrier_freq_ghz) - mobile;
    return {db, d >= path_loss_min_distance && d <= path_loss_max_distance};
}

inline double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double x)
{
    return 10.0 * std::log10(x);
}

// Uplink link budget. rho_u is transmit power over thermal noise in the full
// bandwidth, before path loss.
struct LinkBudget
{
    double tx_power_w = 2.0;
    double total_bandwidth_hz = 20.0e6;
    double noise_figure_db = 9.0;
    double tx_antenna_gain_dbi = 0.0;
    double rx_antenna_gain_dbi = 0.0;

    double rho_u() const;
};

inline constexpr double thermal_noise_dbm_per_hz = -174.0;

inline double compute_rho_u(const LinkBudget &b)
{
    if (!(b.tx_power_w > 0.0) || !(b.total_bandwidth_hz > 0.0))
        throw ConfigError("link budget: transmit power and bandwidth must be positive");
    const double tx_dbm = 10.0 * std::log10(b.tx_power_w * 1000.0);
    const double noise_dbm = thermal_noise_dbm_per_hz + 10.0 * std::log10(b.total_bandwidth_hz) + b.noise_figure_db;
    return db_to_linear(tx_dbm - noise_dbm + b.tx_antenna_gain_dbi + b.rx_antenna_gain_dbi);
}

inline double LinkBudget::rho_u() const
{
    return compute_rho_u(*this);
}

// M x K large-scale fading of one realization.
struct LargeScaleFading
{
    Matrix beta;
    Placement placement;
    MorphologyParams params;
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> out_of_range; // per link, d outside the model range
    std::size_t n_out_of_range = 0;

    Eigen::Index num_aps() const { return beta.rows(); }
    Eigen::Index num_users() const { return beta.cols(); }
};

// beta_{m,k} = 10^((-PL(d_{m,k}) + X_{m,k}) / 10) with X ~ N(0, sigma_sf^2) dB.
// Shadowing is i.i.d. per link; a co-located array gets one draw per user so
// that every row of beta is identical.
inline LargeScaleFading draw_beta(const Placement &placement, const MorphologyParams &params, RandomStream &rng)
{
    params.validate();
    if (placement.num_aps() == 0 || placement.num_users() == 0)
        throw ConfigError("draw_beta: placement needs at least one AP and one user");
    if (placement.ap_height != params.ap_height || placement.user_height != params.user_height)
        throw ConfigError("draw_beta: placement heights do not match the morphology parameters");

    const auto M = static_cast<Eigen::Index>(placement.num_aps());
    const auto K = static_cast<Eigen::Index>(placement.num_users());
    LargeScaleFading out{Matrix(M, K), placement, params, {}, 0};
    out.out_of_range.resize(M, K);

    std::normal_distribution<double> shadow(0.0, 1.0);
    const double sigma = params.shadow_sigma_db;

    if (placement.colocated())
    {
        const Point2 &site = placement.ap_positions.front();
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double d = link_distance(site, placement.ap_height, placement.user_positions[k], placement.user_height);
            const PathLoss pl = path_loss_db(d, params);
            const double x = sigma * shadow(rng);
            out.beta.col(k).setConstant(db_to_linear(-pl.db + x));
            out.out_of_range.col(k).setConstant(!pl.in_range);
            if (!pl.in_range)
                out.n_out_of_range += static_cast<std::size_t>(M);
        }
        return out;
    }

    for (Eigen::Index k = 0; k < K; ++k)
    {
        const Point2 &user = placement.user_positions[k];
        for (Eigen::Index m = 0; m < M; ++m)
        {
            const double d = link_distance(placement.ap_positions[m], placement.ap_height, user, placement.user_height);
            const PathLoss pl = path_loss_db(d, params);
            const double x = sigma * shadow(rng);
            out.beta(m, k) = db_to_linear(-pl.db + x);
            out.out_of_range(m, k) = !pl.in_range;
            if (!pl.in_range)
                ++out.n_out_of_range;
        }
    }
    return out;
}

} // namespace cfmimo

#endif
