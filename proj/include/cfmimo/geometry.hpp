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

#ifndef CFMIMO_GEOMETRY_HPP
#define CFMIMO_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "rng.hpp"
#include "types.hpp"

namespace cfmimo
{

struct Point2
{
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline double norm(const Point2 &p)
{
    return std::hypot(p.x, p.y);
}

// Access points and user terminals inside the circular service region. All
// positions are relative to the disk center, in meters.
struct Placement
{
    std::vector<Point2> ap_positions;
    std::vector<Point2> user_positions;
    double ap_height = 0.0;
    double user_height = 0.0;
    double radius = 0.0;

    std::size_t num_aps() const { return ap_positions.size(); }
    std::size_t num_users() const { return user_positions.size(); }

    // True when every AP sits at the same point (a single base station array).
    bool colocated() const
    {
        for (const auto &p : ap_positions)
            if (!(p == ap_positions.front()))
                return false;
        return true;
    }
};

// i.i.d. points, uniform over the disk area: r = R sqrt(u), phi = 2 pi v.
inline std::vector<Point2> place_uniform_disk(int count, double radius, RandomStream &rng)
{
    if (count < 1)
        throw ConfigError("place_uniform_disk: count must be positive");
    if (!(radius >= 0.0) || !std::isfinite(radius))
        throw ConfigError("place_uniform_disk: radius must be non-negative and finite");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point2> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
    {
        const double r = radius * std::sqrt(unit(rng));
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        points.push_back({r * std::cos(phi), r * std::sin(phi)});
    }
    return points;
}

// Cellular array: all M antennas at the disk center.
inline std::vector<Point2> place_colocated(int count, [[maybe_unused]] double radius)
{
    if (count < 1)
        throw ConfigError("place_colocated: count must be positive");
    return std::vector<Point2>(static_cast<std::size_t>(count), Point2{});
}

// 3-D slant distance between an antenna and a user terminal.
inline double link_distance(const Point2 &ap, double ap_height, const Point2 &user, double user_height)
{
    const double horizontal = std::hypot(ap.x - user.x, ap.y - user.y);
    return std::hypot(horizontal, ap_height - user_height);
}

inline Placement make_cellfree_placement(int num_aps, int num_users, double radius, double ap_height, double user_height,
                                         RandomStream &ap_rng, RandomStream &user_rng)
{
    if (!(ap_height > user_height))
        throw ConfigError("placement: AP height must exceed user height");
    return {place_uniform_disk(num_aps, radius, ap_rng), place_uniform_disk(num_users, radius, user_rng), ap_height,
            user_height, radius};
}

inline Placement make_cellular_placement(int num_antennas, int num_users, double radius, double bs_height,
                                         double user_height, RandomStream &user_rng)
{
    if (!(bs_height > user_height))
        throw ConfigError("placement: base station height must exceed user height");
    return {place_colocated(num_antennas, radius), place_uniform_disk(num_users, radius, user_rng), bs_height,
            user_height, radius};
}

} // namespace cfmimo

#endif
