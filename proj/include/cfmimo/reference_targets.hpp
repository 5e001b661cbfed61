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

#ifndef CFMIMO_REFERENCE_TARGETS_HPP
#define CFMIMO_REFERENCE_TARGETS_HPP

#include <array>
#include <string_view>

#include "types.hpp"

namespace cfmimo
{

enum class TableKind
{
    cellular,
    cellfree
};

// One published likely-SE cell (K = 18). percentile 1 is the 99%-likely rate,
// percentile 5 the 95%-likely rate.
struct ReferenceCell
{
    TableKind table;
    std::string_view morphology;
    Decoder decoder;
    int M;
    PowerMode power;
    double percentile;
    double target;    // bits/s/Hz
    double tolerance; // absolute, at reduced scale
};

// clang-format off
inline constexpr std::array<ReferenceCell, 28> reference_cells{{
    // cellular, maximum ratio
    {TableKind::cellular, "urban",    Decoder::mr, 1700,   PowerMode::full,   1, 0.05, 0.15},
    {TableKind::cellular, "urban",    Decoder::mr, 1700,   PowerMode::maxmin, 1, 6.1,  0.6},
    {TableKind::cellular, "suburban", Decoder::mr, 16000,  PowerMode::full,   5, 0.3,  0.6},
    {TableKind::cellular, "suburban", Decoder::mr, 16000,  PowerMode::maxmin, 5, 6.0,  0.6},
    {TableKind::cellular, "rural",    Decoder::mr, 378000, PowerMode::full,   5, 1.5,  0.6},
    {TableKind::cellular, "rural",    Decoder::mr, 378000, PowerMode::maxmin, 5, 6.0,  0.6},
    // cellular, zero forcing
    {TableKind::cellular, "urban",    Decoder::zf, 200,    PowerMode::full,   1, 6.1,  0.6},
    {TableKind::cellular, "urban",    Decoder::zf, 200,    PowerMode::maxmin, 1, 4.8,  0.6},
    {TableKind::cellular, "suburban", Decoder::zf, 1000,   PowerMode::full,   5, 6.0,  0.6},
    {TableKind::cellular, "suburban", Decoder::zf, 1000,   PowerMode::maxmin, 5, 2.2,  0.6},
    {TableKind::cellular, "rural",    Decoder::zf, 11000,  PowerMode::full,   5, 6.1,  0.6},
    {TableKind::cellular, "rural",    Decoder::zf, 11000,  PowerMode::maxmin, 5, 1.6,  0.6},
    // cell-free, maximum ratio
    {TableKind::cellfree, "urban",    Decoder::mr, 1700,   PowerMode::full,   1, 1.2,  0.6},
    {TableKind::cellfree, "urban",    Decoder::mr, 1700,   PowerMode::maxmin, 1, 1.0,  0.6},
    {TableKind::cellfree, "suburban", Decoder::mr, 16000,  PowerMode::full,   1, 1.2,  0.8},
    {TableKind::cellfree, "suburban", Decoder::mr, 16000,  PowerMode::full,   5, 1.6,  0.8},
    {TableKind::cellfree, "suburban", Decoder::mr, 16000,  PowerMode::maxmin, 1, 1.0,  0.8},
    {TableKind::cellfree, "suburban", Decoder::mr, 16000,  PowerMode::maxmin, 5, 1.1,  0.8},
    {TableKind::cellfree, "rural",    Decoder::mr, 378000, PowerMode::full,   1, 1.7,  0.8},
    {TableKind::cellfree, "rural",    Decoder::mr, 378000, PowerMode::full,   5, 2.5,  0.8},
    {TableKind::cellfree, "rural",    Decoder::mr, 378000, PowerMode::maxmin, 1, 1.2,  0.8},
    {TableKind::cellfree, "rural",    Decoder::mr, 378000, PowerMode::maxmin, 5, 1.4,  0.8},
    // cell-free, zero forcing
    {TableKind::cellfree, "urban",    Decoder::zf, 70,     PowerMode::full,   1, 6.4,  0.6},
    {TableKind::cellfree, "urban",    Decoder::zf, 70,     PowerMode::maxmin, 1, 5.9,  0.6},
    {TableKind::cellfree, "suburban", Decoder::zf, 100,    PowerMode::full,   1, 6.4,  0.6},
    {TableKind::cellfree, "suburban", Decoder::zf, 100,    PowerMode::maxmin, 1, 5.5,  0.6},
    {TableKind::cellfree, "rural",    Decoder::zf, 100,    PowerMode::full,   1, 6.5,  0.6},
    {TableKind::cellfree, "rural",    Decoder::zf, 100,    PowerMode::maxmin, 1, 5.8,  0.6},
}};
// clang-format on

constexpr std::string_view to_string(TableKind t)
{
    return t == TableKind::cellular ? "cellular" : "cellfree";
}

} // namespace cfmimo

#endif
