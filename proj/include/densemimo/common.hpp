// densemimo: uplink spectral efficiency of dense multicell massive MIMO networks
// Copyright 2026 The densemimo Authors
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
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace densemimo
{
    using Complex = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;

    inline constexpr double kPi = 3.14159265358979323846;

    /// Raised when an argument lies outside the mathematical domain of an operation.
    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    /// Raised when a factorization or solve cannot be carried out reliably.
    class NumericalError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Receive combining schemes, in increasing order of interference awareness.
    enum class Scheme
    {
        MR,
        ZF,
        SMMSE,
        MMMSE
    };

    inline constexpr Scheme kAllSchemes[] = {Scheme::MR, Scheme::ZF, Scheme::SMMSE, Scheme::MMMSE};

    std::string_view to_string(Scheme scheme);
    Scheme parse_scheme(std::string_view name);

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
    inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

    /// Counter-based seed derivation: stream(seed, a, b) is a well-mixed 64-bit value
    /// that depends only on its arguments, so trials can be scheduled in any order.
    std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);
} // namespace densemimo
