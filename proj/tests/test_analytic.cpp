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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "densemimo/analytic.hpp"

using namespace densemimo;
using namespace densemimo::analytic;

namespace
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

    double integrate_split(const std::function<double(double)> &f, double lo, const std::vector<double> &cuts)
    {
        double total = 0.0;
        double a = lo;
        for (double c : cuts)
        {
            if (c <= a)
                continue;
            total += GK::integrate(f, a, c, 8, 1e-10);
            a = c;
        }
        return total + GK::integrate(f, a, std::numeric_limits<double>::infinity(), 8, 1e-10);
    }

    // Nested quadrature of E{Σ (β(x)/β(r))^κ}: the serving distance r is Rayleigh
    // with parameter λ, interferers see a PPP of density λ outside radius r.
    double mu_quadrature(const MultiSlopeModel &model, double lambda_km2, int kappa)
    {
        const double lam = lambda_km2 * 1e-6;
        const std::vector<double> cuts = model.interior_breakpoints();
        auto inner = [&](double r) {
            const double br = model.gain(r);
            return integrate_split([&](double x) { return std::pow(model.gain(x) / br, kappa) * 2.0 * kPi * lam * x; },
                                   r, cuts);
        };
        std::vector<double> outer_cuts = cuts;
        outer_cuts.push_back(3.0 / std::sqrt(kPi * lam));
        std::sort(outer_cuts.begin(), outer_cuts.end());
        return integrate_split(
            [&](double r) { return r <= 0.0 ? 0.0 : 2.0 * kPi * lam * r * std::exp(-kPi * lam * r * r) * inner(r); },
            1e-12, outer_cuts);
    }

    UatfInputs inputs(double lambda, double m, double zeta = 4.0)
    {
        UatfInputs in;
        in.m_antennas = m;
        in.k_users = 10;
        in.zeta = zeta;
        in.snr0 = db_to_linear(5.0);
        in.snr_tr = db_to_linear(15.0);
        in.tau_c = 400;
        in.moments = moments(MultiSlopeModel::dual_slope_default(), lambda);
        return in;
    }
} // namespace

TEST_CASE("moments agree with nested quadrature of the defining expectation")
{
    const MultiSlopeModel dual = MultiSlopeModel::dual_slope_default();
    const MultiSlopeModel three({30.0, 300.0}, {2.2, 3.0, 4.0}, 1e-3);
    for (double lambda : {1.0, 10.0, 100.0, 1000.0})
    {
        for (int kappa : {1, 2})
        {
            CAPTURE(lambda);
            CAPTURE(kappa);
            CHECK(mu_kappa(dual, lambda, kappa) == doctest::Approx(mu_quadrature(dual, lambda, kappa)).epsilon(1e-7));
            CHECK(mu_kappa(three, lambda, kappa) == doctest::Approx(mu_quadrature(three, lambda, kappa)).epsilon(1e-7));
        }
    }
}

TEST_CASE("single slope and low-density limits")
{
    const MultiSlopeModel single = MultiSlopeModel::single_slope(4.0);
    for (double lambda : {0.1, 10.0, 1e4})
    {
        CHECK(mu_kappa(single, lambda, 1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mu_kappa(single, lambda, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    CHECK(mu_kappa(MultiSlopeModel::single_slope(3.0), 10.0, 1) == doctest::Approx(2.0).epsilon(1e-12));
    // far field dominates as λ -> 0: 2/(κ α_N - 2)
    const MultiSlopeModel dual = MultiSlopeModel::dual_slope_default();
    CHECK(mu_kappa(dual, 1e-6, 1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mu_kappa(dual, 1e-6, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("moment domain errors")
{
    CHECK_THROWS_AS(mu_kappa(MultiSlopeModel::single_slope(2.0), 10.0, 1), DomainError);
    CHECK_THROWS_AS(mu_kappa(MultiSlopeModel({100.0}, {1.0, 4.0}, 1.0), 10.0, 2), DomainError);
    CHECK_THROWS_AS(mu_kappa(MultiSlopeModel::single_slope(1.5), 10.0, 1), DomainError);
    CHECK_THROWS_AS(mu_kappa(MultiSlopeModel::dual_slope_default(), 0.0, 1), DomainError);
    CHECK_THROWS_AS(mu_kappa(MultiSlopeModel::dual_slope_default(), 10.0, 3), DomainError);
    CHECK(tail_coefficient(MultiSlopeModel::dual_slope_default(), 2, 1) == 0.0);
}

TEST_CASE("moments and the NMSE bound are non-decreasing in density")
{
    const MultiSlopeModel dual = MultiSlopeModel::dual_slope_default();
    double p1 = 0, p2 = 0, pb = 0;
    for (double lambda = 0.5; lambda < 2000.0; lambda *= 1.25)
    {
        const MomentPair m = moments(dual, lambda);
        const double b = nmse_upper_bound(dual, lambda, 4.0, 40.0, db_to_linear(15.0));
        CHECK(m.mu1 >= p1 - 1e-12);
        CHECK(m.mu2 >= p2 - 1e-12);
        CHECK(b >= pb - 1e-12);
        p1 = m.mu1;
        p2 = m.mu2;
        pb = b;
    }
}

TEST_CASE("A factor and NMSE bound")
{
    CHECK(a_factor(0.0, 4.0, 40.0, 1e300) == doctest::Approx(1.0));
    CHECK(a_factor(1.0, 2.0, 20.0, 10.0) == doctest::Approx(1.0 + 0.5 + 1.0 / 200.0));
    CHECK(a_factor(1.0, 4.0, 40.0, 10.0) < a_factor(1.0, 2.0, 40.0, 10.0));
    CHECK_THROWS_AS(a_factor(1.0, 0.0, 40.0, 10.0), DomainError);
    const double b = nmse_upper_bound(MultiSlopeModel::dual_slope_default(), 10.0, 4.0, 40.0, 31.6227766);
    CHECK(b > 0.0);
    CHECK(b < 1.0);
}

TEST_CASE("UatF closed forms")
{
    const UatfInputs in = inputs(10.0, 100.0);
    const double a = a_factor(in.moments.mu1, 4.0, 40.0, in.snr_tr);
    const double mu1 = in.moments.mu1, mu2 = in.moments.mu2;
    const double inv_mr = a / (100 * in.snr0) + 0.1 * a + 0.1 * (a * mu1 + mu2 / 4) + mu2 / 4;
    const double inv_zf = a / (90 * in.snr0) + 10.0 / 90 * (a - 1) + 10.0 / 90 * a * mu1 + mu2 / 4;
    CHECK(uatf_sinr(Scheme::MR, in) == doctest::Approx(1.0 / inv_mr).epsilon(1e-14));
    CHECK(uatf_sinr(Scheme::ZF, in) == doctest::Approx(1.0 / inv_zf).epsilon(1e-14));
    CHECK(uatf_se(Scheme::MR, in) == doctest::Approx(0.9 * std::log2(1.0 + 1.0 / inv_mr)).epsilon(1e-14));
    CHECK(uatf_sinr(Scheme::ZF, in) > uatf_sinr(Scheme::MR, in));

    UatfInputs full = in;
    full.tau_c = 40.0;
    CHECK(uatf_se(Scheme::MR, full) == 0.0);
    UatfInputs small = in;
    small.m_antennas = 10;
    CHECK_THROWS_AS(uatf_sinr(Scheme::ZF, small), DomainError);
    CHECK_THROWS_AS(uatf_sinr(Scheme::MMMSE, in), DomainError);
}

TEST_CASE("massive-M limit is zeta / mu2")
{
    for (double lambda : {1.0, 10.0, 300.0})
    {
        const UatfInputs in = inputs(lambda, 1e9);
        const double limit = 4.0 / in.moments.mu2;
        CHECK(uatf_sinr(Scheme::MR, in) == doctest::Approx(limit).epsilon(1e-6));
        CHECK(uatf_sinr(Scheme::ZF, in) == doctest::Approx(limit).epsilon(1e-6));
        CHECK(asymptotic_rate(in.moments.mu2, 4.0, 10.0, 400.0) ==
              doctest::Approx(0.9 * std::log2(1.0 + limit)).epsilon(1e-14));
    }
    CHECK(asymptotic_rate(0.3, 4.0, 10.0, 40.0) == 0.0);
}

TEST_CASE("Lambert-W optimal zeta matches an exhaustive grid search")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> lam(1.0, 500.0), tau(100.0, 1000.0);
    std::uniform_int_distribution<int> kk(2, 20);
    const MultiSlopeModel dual = MultiSlopeModel::dual_slope_default();
    for (int t = 0; t < 20; ++t)
    {
        const double lambda = lam(rng), tau_c = tau(rng);
        const double k = kk(rng);
        const double mu2 = mu_kappa(dual, lambda, 2);
        const double z_opt = optimal_zeta_asymptotic(mu2, k, tau_c);
        double best_z = 0.0, best_rate = -1.0;
        for (double z = 0.01; z < tau_c / k; z += 0.01)
        {
            const double r = asymptotic_rate(mu2, z, k, tau_c);
            if (r > best_rate)
            {
                best_rate = r;
                best_z = z;
            }
        }
        CAPTURE(lambda);
        CAPTURE(tau_c);
        CAPTURE(k);
        CHECK(std::abs(z_opt - best_z) <= 0.01);
    }
}

TEST_CASE("dominance threshold is the crossing point of the two interference groups")
{
    const MultiSlopeModel dual = MultiSlopeModel::dual_slope_default();
    for (double lambda : {1.0, 10.0, 50.0, 200.0})
    {
        for (Scheme s : {Scheme::MR, Scheme::ZF})
        {
            UatfInputs in = inputs(lambda, 100.0, 1.0);
            in.m_antennas = dominance_threshold(s, in.moments, 1.0, 10.0, 10.0, in.snr_tr);
            const UatfTerms t = uatf_terms(s, in);
            CHECK(t.pilot_contamination == doctest::Approx(t.intra + t.inter).epsilon(1e-10));
            in.m_antennas *= 1.1;
            const UatfTerms above = uatf_terms(s, in);
            CHECK(above.pilot_contamination > above.intra + above.inter);
        }
    }
    CHECK_THROWS_AS(dominance_threshold(Scheme::SMMSE, moments(dual, 10.0), 1.0, 10.0, 10.0, 10.0), DomainError);
}

TEST_CASE("SINR derivatives over density")
{
    const MultiSlopeModel dual = MultiSlopeModel::dual_slope_default();
    const UatfInputs in = inputs(10.0, 100.0);
    double smr = 0.0, szf = 0.0;
    const auto [amr, azf] = sinr_reduction_rates(dual, 20.0, in, 1e-3, &smr, &szf);
    CHECK(smr <= 0.0);
    CHECK(szf <= 0.0);
    CHECK(amr == doctest::Approx(std::abs(smr)));
    CHECK(azf == doctest::Approx(std::abs(szf)));
    // agrees with a coarser central difference to first order
    const auto [cmr, czf] = sinr_reduction_rates(dual, 20.0, in, 1e-2);
    CHECK(cmr == doctest::Approx(amr).epsilon(1e-3));
    CHECK(czf == doctest::Approx(azf).epsilon(1e-3));
    CHECK_THROWS_AS(sinr_reduction_rates(dual, 20.0, in, 0.0), DomainError);
}
