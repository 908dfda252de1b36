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
#include "densemimo/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "densemimo/specfun.hpp"

namespace densemimo
{
    MultiSlopeModel::MultiSlopeModel(std::vector<double> breakpoints_m, std::vector<double> exponents, double upsilon1)
        : breakpoints_(std::move(breakpoints_m)), exponents_(std::move(exponents))
    {
        if (exponents_.empty())
            throw std::invalid_argument("MultiSlopeModel: at least one slope is required");
        if (breakpoints_.size() + 1 != exponents_.size())
            throw std::invalid_argument("MultiSlopeModel: need exactly N-1 breakpoints for N exponents");
        if (!(upsilon1 > 0.0))
            throw std::invalid_argument("MultiSlopeModel: upsilon_1 must be positive");
        for (std::size_t n = 0; n < breakpoints_.size(); ++n)
        {
            if (!(breakpoints_[n] > 0.0) || (n > 0 && !(breakpoints_[n] > breakpoints_[n - 1])))
                throw std::invalid_argument("MultiSlopeModel: breakpoints must be positive and increasing");
        }
        for (std::size_t n = 0; n < exponents_.size(); ++n)
        {
            if (!(exponents_[n] > 0.0) || (n > 0 && exponents_[n] < exponents_[n - 1]))
                throw std::invalid_argument("MultiSlopeModel: exponents must be positive and non-decreasing");
        }
        upsilons_.push_back(upsilon1);
        for (std::size_t n = 0; n < breakpoints_.size(); ++n)
            upsilons_.push_back(upsilons_.back() * std::pow(breakpoints_[n], exponents_[n + 1] - exponents_[n]));
    }

    MultiSlopeModel MultiSlopeModel::dual_slope_default()
    {
        return MultiSlopeModel({100.0}, {2.1, 4.0}, 8.3e-4);
    }

    MultiSlopeModel MultiSlopeModel::single_slope(double exponent, double upsilon1)
    {
        return MultiSlopeModel({}, {exponent}, upsilon1);
    }

    double MultiSlopeModel::breakpoint(std::size_t n) const
    {
        if (n == 0)
            return 0.0;
        if (n == exponents_.size())
            return std::numeric_limits<double>::infinity();
        return breakpoints_.at(n - 1);
    }

    double MultiSlopeModel::gain(double d_m) const
    {
        const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), d_m);
        const auto n = static_cast<std::size_t>(it - breakpoints_.begin());
        return upsilons_[n] * std::pow(d_m, -exponents_[n]);
    }

    double path_loss(const MultiSlopeModel &model, double distance_m)
    {
        if (!(distance_m >= kMinDistanceM))
            throw DomainError("path_loss: distance below the minimum distance");
        return model.gain(distance_m);
    }

    Complex CorrelationMatrix::operator()(int m1, int m2) const
    {
        if (isotropic())
            return m1 == m2 ? Complex(beta) : Complex(0.0);
        const int d = m1 - m2;
        return d >= 0 ? beta * (*shape)(d) : beta * std::conj((*shape)(-d));
    }

    CVector CorrelationMatrix::first_column() const
    {
        if (isotropic())
        {
            CVector c = CVector::Zero(m_antennas);
            c(0) = beta;
            return c;
        }
        return beta * (*shape);
    }

    CMatrix CorrelationMatrix::entries() const
    {
        CMatrix r(m_antennas, m_antennas);
        if (isotropic())
        {
            r.setZero();
            r.diagonal().setConstant(beta);
            return r;
        }
        for (int c = 0; c < m_antennas; ++c)
        {
            for (int m = c; m < m_antennas; ++m)
            {
                const Complex v = beta * (*shape)(m - c);
                r(m, c) = v;
                r(c, m) = std::conj(v);
            }
        }
        return r;
    }

    CVector CorrelationMatrix::apply(const CVector &x) const
    {
        if (isotropic())
            return beta * x;
        const CVector &s = *shape;
        const int m = m_antennas;
        CVector y = CVector::Zero(m);
        for (int r = 0; r < m; ++r)
        {
            Complex acc = 0.0;
            for (int c = 0; c <= r; ++c)
                acc += s(r - c) * x(c);
            for (int c = r + 1; c < m; ++c)
                acc += std::conj(s(c - r)) * x(c);
            y(r) = beta * acc;
        }
        return y;
    }

    CVector one_ring_shape(int m_antennas, double aoa, double spread, int quad_order)
    {
        if (m_antennas < 1)
            throw DomainError("one_ring: need at least one antenna");
        if (!(spread >= 0.0))
            throw DomainError("one_ring: angular spread must be nonnegative");
        CVector col(m_antennas);
        if (spread == 0.0)
        {
            const double s = std::sin(aoa);
            for (int d = 0; d < m_antennas; ++d)
                col(d) = std::polar(1.0, kPi * d * s);
            return col;
        }
        const auto &rule = specfun::cached_gauss_legendre(quad_order);
        // Keep the phase swept by one panel to roughly a third of the rule order.
        const double phase_per_panel = std::max(1.0, quad_order / 3.0);
        col(0) = 1.0;
        for (int d = 1; d < m_antennas; ++d)
        {
            const double total_phase = kPi * d * 2.0 * spread;
            const int panels = std::max(1, static_cast<int>(std::ceil(total_phase / phase_per_panel)));
            const Complex integral = specfun::integrate_oscillatory(
                [&](double t) { return std::polar(1.0, kPi * d * std::sin(aoa + t)); }, -spread, spread, rule, panels);
            col(d) = integral / (2.0 * spread);
        }
        return col;
    }

    CorrelationMatrix one_ring(int m_antennas, double beta, double aoa, double spread, int quad_order)
    {
        if (!(beta > 0.0))
            throw DomainError("one_ring: beta must be positive");
        CorrelationMatrix r;
        r.m_antennas = m_antennas;
        r.beta = beta;
        r.aoa = aoa;
        r.angular_spread = spread;
        r.shape = std::make_shared<const CVector>(one_ring_shape(m_antennas, aoa, spread, quad_order));
        return r;
    }

    CorrelationMatrix uncorrelated(int m_antennas, double beta)
    {
        if (m_antennas < 1)
            throw DomainError("uncorrelated: need at least one antenna");
        if (!(beta > 0.0))
            throw DomainError("uncorrelated: beta must be positive");
        CorrelationMatrix r;
        r.m_antennas = m_antennas;
        r.beta = beta;
        return r;
    }

    CorrelationCache::CorrelationCache(int aoa_bins, int quad_order) : aoa_bins_(aoa_bins), quad_order_(quad_order)
    {
        if (aoa_bins_ < 4)
            throw std::invalid_argument("CorrelationCache: need at least 4 angle bins");
    }

    double CorrelationCache::snapped_aoa(double aoa) const
    {
        const double step = 2.0 * kPi / aoa_bins_;
        long long bin = std::llround((aoa + kPi) / step);
        bin %= aoa_bins_;
        if (bin < 0)
            bin += aoa_bins_;
        return -kPi + static_cast<double>(bin) * step;
    }

    CorrelationMatrix CorrelationCache::get(int m_antennas, double beta, double aoa, std::optional<double> spread)
    {
        if (!spread)
            return uncorrelated(m_antennas, beta);
        if (!(beta > 0.0))
            throw DomainError("CorrelationCache: beta must be positive");
        // The rank-one shape costs O(M); snapping it would make UEs in one bin
        // exactly collinear.
        if (*spread == 0.0)
            return one_ring(m_antennas, beta, aoa, 0.0, quad_order_);

        const double step = 2.0 * kPi / aoa_bins_;
        long long bin = std::llround((aoa + kPi) / step) % aoa_bins_;
        if (bin < 0)
            bin += aoa_bins_;
        const double phi = -kPi + static_cast<double>(bin) * step;
        const Key key{m_antennas, std::llround(*spread * 1e9), static_cast<int>(bin)};

        CorrelationMatrix r;
        r.m_antennas = m_antennas;
        r.beta = beta;
        r.aoa = phi;
        r.angular_spread = *spread;
        {
            std::shared_lock lock(mutex_);
            const auto it = shapes_.find(key);
            if (it != shapes_.end())
            {
                r.shape = it->second;
                return r;
            }
        }
        auto shape = std::make_shared<const CVector>(one_ring_shape(m_antennas, phi, *spread, quad_order_));
        std::unique_lock lock(mutex_);
        r.shape = shapes_.try_emplace(key, std::move(shape)).first->second;
        return r;
    }

    std::size_t CorrelationCache::size() const
    {
        std::shared_lock lock(mutex_);
        return shapes_.size();
    }
} // namespace densemimo
