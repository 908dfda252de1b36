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
#include "densemimo/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

namespace densemimo::specfun
{
    QuadratureRule gauss_legendre(int order)
    {
        if (order < 1)
            throw DomainError("gauss_legendre: order must be >= 1");

        QuadratureRule rule;
        rule.order = order;
        rule.nodes.assign(order, 0.0);
        rule.weights.assign(order, 0.0);
        if (order == 1)
        {
            rule.weights[0] = 2.0;
            return rule;
        }

        const int half = (order + 1) / 2;
        for (int i = 0; i < half; ++i)
        {
            // Tricomi initial guess for the i-th largest root, then Newton.
            double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter)
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= order; ++k)
                {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = order * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            // Recompute the derivative at the converged root.
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= order; ++k)
                {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = order * (x * p1 - p0) / (x * x - 1.0);
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            rule.nodes[order - 1 - i] = x;
            rule.nodes[i] = -x;
            rule.weights[order - 1 - i] = w;
            rule.weights[i] = w;
        }
        if (order % 2 == 1)
            rule.nodes[order / 2] = 0.0;
        return rule;
    }

    const QuadratureRule &cached_gauss_legendre(int order)
    {
        static std::mutex guard;
        static std::map<int, QuadratureRule> rules;
        std::lock_guard lock(guard);
        auto it = rules.find(order);
        if (it == rules.end())
            it = rules.emplace(order, gauss_legendre(order)).first;
        return it->second;
    }

    namespace
    {
        constexpr double kEps = std::numeric_limits<double>::epsilon();
        constexpr double kTiny = 1e-300;

        void check_gamma_args(double a, double x, const char *who)
        {
            if (!(a > 0.0) || !std::isfinite(a))
                throw DomainError(std::string(who) + ": a must be positive and finite");
            if (!(x >= 0.0))
                throw DomainError(std::string(who) + ": x must be nonnegative");
        }

        // Modified Lentz evaluation of the continued fraction for Γ(a,x); x > a + 1.
        double upper_cf(double a, double x)
        {
            double b = x + 1.0 - a;
            double c = 1.0 / kTiny;
            double d = 1.0 / b;
            double h = d;
            for (int i = 1; i < 10000; ++i)
            {
                const double an = -i * (i - a);
                b += 2.0;
                d = an * d + b;
                if (std::abs(d) < kTiny)
                    d = kTiny;
                c = b + an / c;
                if (std::abs(c) < kTiny)
                    c = kTiny;
                d = 1.0 / d;
                const double delta = d * c;
                h *= delta;
                if (std::abs(delta - 1.0) < kEps)
                    break;
            }
            return std::exp(-x + a * std::log(x)) * h;
        }

        // Power series for γ(a,x); x <= a + 1.
        double lower_series(double a, double x)
        {
            if (x == 0.0)
                return 0.0;
            double ap = a;
            double term = 1.0 / a;
            double sum = term;
            for (int n = 1; n < 10000; ++n)
            {
                ap += 1.0;
                term *= x / ap;
                sum += term;
                if (std::abs(term) < std::abs(sum) * kEps)
                    break;
            }
            return sum * std::exp(-x + a * std::log(x));
        }
    } // namespace

    double upper_incomplete_gamma(double a, double x)
    {
        check_gamma_args(a, x, "upper_incomplete_gamma");
        if (x == 0.0)
            return std::tgamma(a);
        if (std::isinf(x))
            return 0.0;
        if (x > a + 1.0)
            return upper_cf(a, x);
        return std::tgamma(a) - lower_series(a, x);
    }

    double lower_incomplete_gamma(double a, double x)
    {
        check_gamma_args(a, x, "lower_incomplete_gamma");
        if (std::isinf(x))
            return std::tgamma(a);
        if (x > a + 1.0)
            return std::tgamma(a) - upper_cf(a, x);
        return lower_series(a, x);
    }

    double incomplete_gamma_difference(double a, double x0, double x1)
    {
        check_gamma_args(a, x0, "incomplete_gamma_difference");
        check_gamma_args(a, x1, "incomplete_gamma_difference");
        if (x1 < x0)
            throw DomainError("incomplete_gamma_difference: requires x0 <= x1");
        if (x0 == x1)
            return 0.0;
        if (std::isinf(x1))
            return upper_incomplete_gamma(a, x0);
        if (x1 <= a + 1.0)
            return lower_series(a, x1) - lower_series(a, x0);
        return upper_incomplete_gamma(a, x0) - upper_cf(a, x1);
    }

    double lambert_w0(double v)
    {
        constexpr double inv_e = 0.36787944117144233;
        if (std::isnan(v))
            throw DomainError("lambert_w0: NaN argument");
        if (v < -inv_e)
        {
            if (v > -inv_e * (1.0 + 1e-15))
                return -1.0;
            throw DomainError("lambert_w0: argument below -1/e");
        }
        if (v == 0.0)
            return 0.0;
        if (std::isinf(v))
            return v;

        double w;
        if (v < -0.32)
        {
            // Branch-point expansion in p = sqrt(2(ev + 1)).
            const double p = std::sqrt(std::max(0.0, 2.0 * (std::exp(1.0) * v + 1.0)));
            w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0));
        }
        else if (v < 3.0)
        {
            w = std::log1p(v);
            if (v > 0.0)
                w *= 0.9;
        }
        else
        {
            const double l1 = std::log(v);
            const double l2 = std::log(l1);
            w = l1 - l2 + l2 / l1;
        }

        // Halley iteration on f(w) = w e^w - v.
        for (int iter = 0; iter < 64; ++iter)
        {
            const double ew = std::exp(w);
            const double f = w * ew - v;
            if (f == 0.0)
                break;
            const double wp1 = w + 1.0;
            if (wp1 == 0.0)
                break;
            const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
            const double dw = f / denom;
            w -= dw;
            if (std::abs(dw) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w)))
                break;
        }
        return w;
    }
} // namespace densemimo::specfun
