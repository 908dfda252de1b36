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
#include <doctest.h>

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/lambert_w.hpp>

#include "densemimo/specfun.hpp"

using namespace densemimo;
using namespace densemimo::specfun;

TEST_CASE("upper incomplete gamma against Boost over a wide (a, x) range")
{
    // a values are the shapes 2/α and κα/2 produced by the moment formula
    const double as[] = {0.4, 0.5, 0.952381, 1.0, 1.05, 2.0, 2.1, 4.0, 12.5};
    const double xs[] = {0.0, 1e-8, 1e-4, 0.03, 0.5, 1.0, 2.0, 3.1, 7.0, 25.0, 300.0};
    for (double a : as)
    {
        for (double x : xs)
        {
            const double want = boost::math::tgamma(a, x);
            CAPTURE(a);
            CAPTURE(x);
            CHECK(upper_incomplete_gamma(a, x) == doctest::Approx(want).epsilon(1e-12));
            CHECK(lower_incomplete_gamma(a, x) == doctest::Approx(boost::math::tgamma_lower(a, x)).epsilon(1e-11));
        }
    }
}

TEST_CASE("upper incomplete gamma edge values")
{
    CHECK(upper_incomplete_gamma(2.5, 0.0) == doctest::Approx(std::tgamma(2.5)).epsilon(1e-15));
    CHECK(upper_incomplete_gamma(2.5, std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(upper_incomplete_gamma(1.0, 3.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(upper_incomplete_gamma(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(upper_incomplete_gamma(1.0, -1.0), DomainError);
    CHECK_THROWS_AS(upper_incomplete_gamma(std::nan(""), 1.0), DomainError);
}

TEST_CASE("incomplete gamma difference matches direct quadrature, including tiny arguments")
{
    using boost::math::quadrature::gauss_kronrod;
    struct Case
    {
        double a, x0, x1;
    };
    const Case cases[] = {{0.952381, 0.0, 1e-6}, {2.1, 1e-7, 3e-7},  {1.05, 0.0, 0.0314},
                          {2.0, 0.0314, 5.0},    {4.0, 10.0, 40.0},  {0.5, 2.0, 2.5},
                          {1.05, 1e-9, 1e-3},    {2.1, 0.5, 0.5}};
    for (const Case &c : cases)
    {
        const auto f = [&](double t) { return std::exp(-t) * std::pow(t, c.a - 1.0); };
        const double want = c.x1 > c.x0 ? gauss_kronrod<double, 61>::integrate(f, c.x0, c.x1, 15, 1e-14) : 0.0;
        CAPTURE(c.a);
        CAPTURE(c.x0);
        CAPTURE(c.x1);
        CHECK(incomplete_gamma_difference(c.a, c.x0, c.x1) == doctest::Approx(want).epsilon(1e-10));
    }
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(incomplete_gamma_difference(2.0, 1.5, inf) == doctest::Approx(boost::math::tgamma(2.0, 1.5)).epsilon(1e-14));
    CHECK_THROWS_AS(incomplete_gamma_difference(2.0, 2.0, 1.0), DomainError);
}

TEST_CASE("Lambert W0 against Boost")
{
    const double vs[] = {-0.36787944117144, -0.3, -0.1, -1e-9, 0.0, 1e-9, 0.5, 1.0, 2.718281828459045,
                         10.0, 123.4,        1e5,  1e12, 1e300};
    for (double v : vs)
    {
        CAPTURE(v);
        CHECK(lambert_w0(v) == doctest::Approx(boost::math::lambert_w0(v)).epsilon(1e-13));
    }
    CHECK(lambert_w0(-1.0 / std::exp(1.0)) == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(lambert_w0(-0.5), DomainError);
}

TEST_CASE("Gauss-Legendre rule structure and exactness")
{
    for (int order : {1, 2, 5, 16, 64})
    {
        const QuadratureRule &rule = cached_gauss_legendre(order);
        REQUIRE(static_cast<int>(rule.nodes.size()) == order);
        double wsum = 0.0;
        for (int i = 0; i < order; ++i)
        {
            CHECK(rule.weights[i] > 0.0);
            if (i > 0)
                CHECK(rule.nodes[i] > rule.nodes[i - 1]);
            CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[order - 1 - i]).epsilon(1e-14));
            wsum += rule.weights[i];
        }
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        // degree 2n-1 is integrated exactly, degree 2n is not (n >= 1)
        const auto moment = [&](int deg) {
            double acc = 0.0;
            for (int i = 0; i < order; ++i)
                acc += rule.weights[i] * std::pow(rule.nodes[i] + 0.25, deg);
            return acc;
        };
        const auto exact = [](int deg) { return (std::pow(1.25, deg + 1) - std::pow(-0.75, deg + 1)) / (deg + 1); };
        CHECK(moment(2 * order - 1) == doctest::Approx(exact(2 * order - 1)).epsilon(1e-12));
        if (order <= 12)
        {
            // remainder for a monic degree-2n integrand: 2^(2n+1) (n!)^4 / ((2n+1) ((2n)!)^2)
            const double n = order;
            const double rem = std::exp((2 * n + 1) * std::log(2.0) + 4 * std::lgamma(n + 1) - std::log(2 * n + 1) -
                                        2 * std::lgamma(2 * n + 1));
            CHECK(exact(2 * order) - moment(2 * order) == doctest::Approx(rem).epsilon(1e-6));
        }
    }
    CHECK_THROWS_AS(gauss_legendre(0), DomainError);
    CHECK(&cached_gauss_legendre(12) == &cached_gauss_legendre(12));
}

TEST_CASE("oscillatory integral reproduces the Bessel integral representation")
{
    // ∫_{-π}^{π} e^{j z sin θ} dθ = 2π J0(z)
    const QuadratureRule &rule = cached_gauss_legendre(32);
    for (double z : {0.0, 1.0, 10.0, 100.0, 311.0})
    {
        const int panels = 1 + static_cast<int>(z / 8.0);
        const Complex v = integrate_oscillatory([&](double t) { return std::exp(Complex(0.0, z * std::sin(t))); }, -kPi,
                                                kPi, rule, panels);
        CAPTURE(z);
        CHECK(v.real() == doctest::Approx(2.0 * kPi * boost::math::cyl_bessel_j(0, z)).epsilon(1e-10).scale(1.0));
        CHECK(std::abs(v.imag()) < 1e-10);
    }
    CHECK_THROWS_AS(integrate_oscillatory([](double) { return 1.0; }, 1.0, 1.0, rule), DomainError);
}
