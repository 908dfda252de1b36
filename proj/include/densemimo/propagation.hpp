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

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "densemimo/common.hpp"

namespace densemimo
{
    /// Distances below this are clamped (meters). Keeps the multi-slope gain finite.
    inline constexpr double kMinDistanceM = 1.0;

    /// Multi-slope path loss: β(d) = Υ_n d^{-α_n} for r_{n-1} <= d < r_n, with
    /// r_0 = 0, r_N = ∞ and Υ_{n+1} = Υ_n r_n^{α_{n+1}-α_n} so β is continuous.
    /// Distances are in meters.
    class MultiSlopeModel
    {
    public:
        /// `breakpoints_m` holds the N-1 interior breakpoints r_1 < ... < r_{N-1};
        /// `exponents` holds α_1 <= ... <= α_N.
        MultiSlopeModel(std::vector<double> breakpoints_m, std::vector<double> exponents, double upsilon1);

        /// Dual-slope model with r_1 = 100 m, Υ_1 = 8.3e-4, α = (2.1, 4).
        static MultiSlopeModel dual_slope_default();
        static MultiSlopeModel single_slope(double exponent, double upsilon1 = 1.0);

        std::size_t slopes() const { return exponents_.size(); }
        /// r_n for n = 0..N (r_0 = 0, r_N = +inf).
        double breakpoint(std::size_t n) const;
        /// α_n, 1-based like the usual notation.
        double exponent(std::size_t n) const { return exponents_.at(n - 1); }
        /// Υ_n, 1-based.
        double upsilon(std::size_t n) const { return upsilons_.at(n - 1); }

        /// Gain at distance `d_m` (no clamping; d must be positive).
        double gain(double d_m) const;

        const std::vector<double> &interior_breakpoints() const { return breakpoints_; }
        const std::vector<double> &exponents() const { return exponents_; }

    private:
        std::vector<double> breakpoints_;
        std::vector<double> exponents_;
        std::vector<double> upsilons_;
    };

    /// Path loss gain at `distance_m`; domain error below kMinDistanceM.
    double path_loss(const MultiSlopeModel &model, double distance_m);

    /// Spatial correlation matrix of an M-antenna half-wavelength ULA. The matrix is
    /// Hermitian Toeplitz and is stored through its first column R(m, 0); an empty
    /// shape means the isotropic matrix β I.
    struct CorrelationMatrix
    {
        int m_antennas = 0;
        double beta = 0.0;           // tr(R) / M
        double angular_spread = 0.0; // Δ in radians (unused when isotropic)
        double aoa = 0.0;            // φ in radians
        std::shared_ptr<const CVector> shape; // unit-gain first column, or null for β I

        bool isotropic() const { return shape == nullptr; }
        Complex operator()(int m1, int m2) const;
        CVector first_column() const;
        CMatrix entries() const;
        /// y = R x without materializing R.
        CVector apply(const CVector &x) const;
    };

    /// One-ring model: [R]_{m1,m2} = β/(2Δ) ∫_{-Δ}^{Δ} e^{jπ(m1-m2) sin(φ + t)} dt.
    /// Δ = 0 returns the rank-one limit β a(φ) a(φ)^H.
    CorrelationMatrix one_ring(int m_antennas, double beta, double aoa, double spread, int quad_order = 64);

    /// Isotropic (uncorrelated) fading, R = β I.
    CorrelationMatrix uncorrelated(int m_antennas, double beta);

    /// Unit-gain first column of the one-ring matrix (β = 1).
    CVector one_ring_shape(int m_antennas, double aoa, double spread, int quad_order = 64);

    /// Read-mostly cache of unit-gain one-ring shapes keyed by (M, Δ, quantized φ).
    /// Lookups snap φ to a grid of 2π/aoa_bins, so every user with a given snapped
    /// angle shares one integral. Δ = 0 is computed exactly and not cached.
    /// Safe for concurrent use.
    class CorrelationCache
    {
    public:
        explicit CorrelationCache(int aoa_bins = 8192, int quad_order = 64);

        /// Correlation matrix with gain β for a user at angle `aoa` (radians).
        /// `spread` empty means uncorrelated fading.
        CorrelationMatrix get(int m_antennas, double beta, double aoa, std::optional<double> spread);

        double snapped_aoa(double aoa) const;
        std::size_t size() const;

    private:
        using Key = std::tuple<int, long long, int>;
        int aoa_bins_;
        int quad_order_;
        mutable std::shared_mutex mutex_;
        std::map<Key, std::shared_ptr<const CVector>> shapes_;
    };
} // namespace densemimo
