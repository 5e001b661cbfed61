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

#ifndef CFMIMO_RNG_HPP
#define CFMIMO_RNG_HPP

#include <cstdint>
#include <random>

namespace cfmimo
{

using RandomStream = std::mt19937_64;

// Tags separating the independent random streams of one realization. Adding a
// new tag never perturbs the draws of existing ones.
enum class StreamPurpose : std::uint64_t
{
    ap_placement = 1,
    user_placement = 2,
    shadowing_cellular = 3,
    shadowing_cellfree = 4,
    small_scale = 5,
};

namespace detail
{

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index, StreamPurpose purpose)
{
    std::uint64_t h = detail::splitmix64(master_seed);
    h = detail::splitmix64(h ^ index);
    h = detail::splitmix64(h ^ static_cast<std::uint64_t>(purpose));
    return h;
}

// Child stream for one (realization index, purpose) pair.
inline RandomStream child_stream(std::uint64_t master_seed, std::uint64_t index, StreamPurpose purpose)
{
    return RandomStream(derive_seed(master_seed, index, purpose));
}

} // namespace cfmimo

#endif
