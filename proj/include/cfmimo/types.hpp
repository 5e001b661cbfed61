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

#ifndef CFMIMO_TYPES_HPP
#define CFMIMO_TYPES_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace cfmimo
{

// Invalid scenario or solver configuration (bad counts, tau < K, M <= K for ZF, ...).
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// Numerical input outside an operation's domain (shape mismatch, d <= 0, zero column, ...).
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

enum class Deployment
{
    cellular,
    cellfree
};

enum class Decoder
{
    mr,
    zf
};

enum class PowerMode
{
    full,
    maxmin
};

// Deployment x decoder.
enum class Configuration
{
    cl_mr,
    cl_zf,
    cf_mr,
    cf_zf
};

constexpr Configuration make_configuration(Deployment deployment, Decoder decoder)
{
    if (deployment == Deployment::cellular)
        return decoder == Decoder::mr ? Configuration::cl_mr : Configuration::cl_zf;
    return decoder == Decoder::mr ? Configuration::cf_mr : Configuration::cf_zf;
}

constexpr Deployment deployment_of(Configuration c)
{
    return (c == Configuration::cl_mr || c == Configuration::cl_zf) ? Deployment::cellular : Deployment::cellfree;
}

constexpr Decoder decoder_of(Configuration c)
{
    return (c == Configuration::cl_mr || c == Configuration::cf_mr) ? Decoder::mr : Decoder::zf;
}

constexpr std::string_view to_string(Configuration c)
{
    switch (c)
    {
    case Configuration::cl_mr: return "cl-MR";
    case Configuration::cl_zf: return "cl-ZF";
    case Configuration::cf_mr: return "cf-MR";
    case Configuration::cf_zf: return "cf-ZF";
    }
    return "?";
}

constexpr std::string_view to_string(PowerMode p)
{
    return p == PowerMode::full ? "full" : "maxmin";
}

constexpr std::string_view to_string(Deployment d)
{
    return d == Deployment::cellular ? "cellular" : "cellfree";
}

constexpr std::string_view to_string(Decoder d)
{
    return d == Decoder::mr ? "mr" : "zf";
}

inline Deployment parse_deployment(std::string_view s)
{
    if (s == "cellular")
        return Deployment::cellular;
    if (s == "cellfree" || s == "cell-free")
        return Deployment::cellfree;
    throw ConfigError("unknown deployment '" + std::string(s) + "' (expected cellular|cellfree)");
}

inline Decoder parse_decoder(std::string_view s)
{
    if (s == "mr" || s == "MR")
        return Decoder::mr;
    if (s == "zf" || s == "ZF")
        return Decoder::zf;
    throw ConfigError("unknown decoder '" + std::string(s) + "' (expected mr|zf)");
}

inline Configuration parse_configuration(std::string_view s)
{
    for (auto c : {Configuration::cl_mr, Configuration::cl_zf, Configuration::cf_mr, Configuration::cf_zf})
        if (to_string(c) == s)
            return c;
    throw ConfigError("unknown configuration '" + std::string(s) + "'");
}

inline PowerMode parse_power_mode(std::string_view s)
{
    if (s == "full")
        return PowerMode::full;
    if (s == "maxmin")
        return PowerMode::maxmin;
    throw ConfigError("unknown power mode '" + std::string(s) + "' (expected full|maxmin)");
}

} // namespace cfmimo

#endif
