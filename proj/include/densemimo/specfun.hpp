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

#include <vector>

#include "densemimo/common.hpp"

/// Special functions and quadrature used by the closed-form moments and the
/// one-ring correlation model. Everything here is pure and thread-safe.
namespace densemimo::specfun
{
    /// Gauss-Legendre rule on the reference interval [-1, 1].
    struct QuadratureRule
    {
        std::vector<double> nodes;   // strictly increasing
        std::vector<double> weights; // positive, sum to 2
        int order = 0;
    };

    /// Builds the `order`-point Gauss-Legendre rule (Newton iteration on the
    /// three-term recurrence). Exact for polynomials of degree <= 2*order-1.
    QuadratureRule gauss_legendre(int order);

    /// Shared rule for a given order; built once per order and kept for the process lifetime.
    const QuadratureRule &cached_gauss_legendre(int order);

    /// Upper incomplete gamma Γ(a, x) = ∫_x^∞ e^{-t} t^{a-1} dt for a > 0, x >= 0.
    /// Continued fraction for x > a + 1, lower-series complement otherwise.
    /// Returns 0 for x = +inf and Γ(a) for x = 0.
    double upper_incomplete_gamma(double a, double x);

    /// Lower incomplete gamma γ(a, x) = Γ(a) - Γ(a, x), same domain.
    double lower_incomplete_gamma(double a, double x);

    /// Γ(a, x0) - Γ(a, x1) for 0 <= x0 <= x1 <= inf, evaluated without the
    /// cancellation that the naive difference suffers when both arguments are small.
    double incomplete_gamma_difference(double a, double x0, double x1);

    /// Principal branch of the Lambert W function, defined for v >= -1/e.
    double lambert_w0(double v);

    /// Composite Gauss-Legendre estimate of ∫_lo^hi f(x) dx using `panels` equal
    /// sub-intervals, each integrated with `rule`.
    template <class F>
    Complex integrate_oscillatory(F &&f, double lo, double hi, const QuadratureRule &rule, int panels = 1)
    {
        if (!(lo < hi))
            throw DomainError("integrate_oscillatory: requires lo < hi");
        if (panels < 1)
            throw DomainError("integrate_oscillatory: panels must be >= 1");
        const double width = (hi - lo) / panels;
        const double half = 0.5 * width;
        Complex total = 0.0;
        for (int p = 0; p < panels; ++p)
        {
            const double mid = lo + (p + 0.5) * width;
            Complex acc = 0.0;
            for (std::size_t n = 0; n < rule.nodes.size(); ++n)
                acc += rule.weights[n] * Complex(f(mid + half * rule.nodes[n]));
            total += half * acc;
        }
        return total;
    }
} // namespace densemimo::specfun
