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
#include <numeric>
#include <random>

#include "densemimo/uplink.hpp"

using namespace densemimo;

namespace
{
    struct Fixture
    {
        NetworkRealization net;
        PilotAllocation alloc;
        PowerProfile powers = PowerProfile::from_db(5.0, 15.0);
        CorrelationCache cache;
        ReceiverView view;

        Fixture(int m, int k, int zeta, std::optional<double> spread, std::uint64_t seed)
        {
            std::mt19937_64 rng(seed);
            net = realization_from_sites({{150, 200}, {700, 250}, {400, 800}, {900, 900}}, k, 1000.0, rng());
            alloc = allocate_pilots(net, zeta, rng);
            view = build_receiver_view(net, 0, m, MultiSlopeModel::dual_slope_default(), spread, powers, cache);
        }

        std::vector<int> all_slots() const
        {
            std::vector<int> s(view.users.size());
            std::iota(s.begin(), s.end(), 0);
            return s;
        }
    };

    CMatrix dense_q(const ReceiverView &view, const PilotAllocation &alloc, const PowerProfile &pw, int pilot)
    {
        const int m = view.m_antennas;
        CMatrix q = pw.sigma2 * CMatrix::Identity(m, m);
        for (int l = 0; l < view.num_cells(); ++l)
            for (int i = 0; i < view.k_users; ++i)
                if (alloc.pilot(l, i) == pilot)
                    q += view.users[view.slot(l, i)].pp * alloc.tau_p * view.users[view.slot(l, i)].r.entries();
        return q;
    }
} // namespace

TEST_CASE("pilot allocation")
{
    const NetworkRealization net = sample_network(50.0, 3, 2.0, 9);
    std::mt19937_64 rng(1);
    const PilotAllocation a = allocate_pilots(net, 4, rng);
    CHECK(a.tau_p == 12);
    std::vector<int> counts(4, 0);
    for (int l = 0; l < net.num_bs(); ++l)
    {
        REQUIRE(a.group[l] >= 0);
        REQUIRE(a.group[l] < 4);
        ++counts[a.group[l]];
        CHECK(a.pilot(l, 2) == a.group[l] * 3 + 2);
        CHECK(a.indicator(l, l) == 1);
    }
    for (int c : counts)
        CHECK(c > net.num_bs() / 8); // ~1/4 each
    CHECK_THROWS_AS(allocate_pilots(net, 0, rng), DomainError);

    std::mt19937_64 r1(5);
    const PilotAllocation one = allocate_pilots(net, 1, r1);
    for (int l = 0; l < net.num_bs(); ++l)
        CHECK(one.shares(l, 0));
}

TEST_CASE("power profile: statistical channel inversion")
{
    const PowerProfile p = PowerProfile::from_db(5.0, 15.0);
    CHECK(p.rho0 == doctest::Approx(3.16227766));
    CHECK(p.data_power(1e-9) * 1e-9 == doctest::Approx(p.rho0));
    CHECK(p.pilot_power(2e-8) * 2e-8 == doctest::Approx(p.rho_tr));
}

TEST_CASE("pilot covariance is the dense sum and its Cholesky factor")
{
    Fixture f(8, 2, 2, 0.2, 3);
    for (int pilot = 0; pilot < f.alloc.tau_p; ++pilot)
    {
        const PilotCovariance cov = pilot_covariance(f.view, f.alloc, f.powers, pilot);
        const CMatrix want = dense_q(f.view, f.alloc, f.powers, pilot);
        CHECK((cov.q - want).norm() < 1e-10 * want.norm());
        CHECK((cov.lower * cov.lower.adjoint() - want).norm() < 1e-10 * want.norm());
    }
}

TEST_CASE("MMSE estimate from a literal observation matches the dense formula")
{
    Fixture f(6, 2, 1, 0.15, 4);
    std::mt19937_64 rng(10);
    const CMatrix h = draw_channels(f.view, rng);
    const int pilot = f.alloc.pilot(0, 1);
    const PilotCovariance cov = pilot_covariance(f.view, f.alloc, f.powers, pilot);
    const CVector y = synthesize_observation(f.view, f.alloc, f.powers, h, pilot, rng);
    const EstimationOutput est = mmse_estimate(f.view, f.alloc, f.powers, cov, y);
    const CMatrix q_inv = cov.q.inverse();
    EstimatorBank bank(f.view, f.alloc, f.powers, est.slots);
    for (std::size_t c = 0; c < est.slots.size(); ++c)
    {
        const UserChannel &u = f.view.users[est.slots[c]];
        const CMatrix r = u.r.entries();
        const CVector want = std::sqrt(u.pp) * r * q_inv * y;
        CHECK((est.h_hat.col(c) - want).norm() < 1e-9 * want.norm());
        const CMatrix c_want = r - u.pp * f.alloc.tau_p * r * q_inv * r;
        CHECK((est.c[c] - c_want).norm() < 1e-9 * r.norm());
        CHECK((bank.error_covariance(static_cast<int>(c)) - c_want).norm() < 1e-9 * r.norm());
        const UserChannel &u0 = f.view.users[est.slots[0]];
        const CMatrix phi_want = std::sqrt(u0.pp * u.pp) * f.alloc.tau_p * u0.r.entries() * q_inv * r;
        CHECK((est.phi[c] - phi_want).norm() < 1e-9 * phi_want.norm());
        CHECK((bank.cross_covariance(0, static_cast<int>(c)) - phi_want).norm() < 1e-9 * phi_want.norm());
    }
}

TEST_CASE("bank statistics agree with Monte Carlo over the literal estimation path")
{
    Fixture f(4, 2, 1, 0.3, 6);
    const int pilot = f.alloc.pilot(0, 0);
    const PilotCovariance cov = pilot_covariance(f.view, f.alloc, f.powers, pilot);
    const std::vector<int> slots = cov.members;
    EstimatorBank bank(f.view, f.alloc, f.powers, slots);
    const int n = static_cast<int>(slots.size());
    std::vector<CMatrix> est_cov(n, CMatrix::Zero(4, 4)), err_cov(n, CMatrix::Zero(4, 4));
    std::vector<CMatrix> cross(n, CMatrix::Zero(4, 4)), orth(n, CMatrix::Zero(4, 4));
    std::mt19937_64 rng(77);
    const int draws = 40000;
    for (int d = 0; d < draws; ++d)
    {
        const CMatrix h = draw_channels(f.view, rng);
        const CVector y = synthesize_observation(f.view, f.alloc, f.powers, h, pilot, rng);
        const EstimationOutput est = mmse_estimate(f.view, f.alloc, f.powers, cov, y);
        for (int c = 0; c < n; ++c)
        {
            const CVector e = h.col(slots[c]) - est.h_hat.col(c);
            est_cov[c] += est.h_hat.col(c) * est.h_hat.col(c).adjoint();
            err_cov[c] += e * e.adjoint();
            cross[c] += est.h_hat.col(0) * est.h_hat.col(c).adjoint();
            orth[c] += e * est.h_hat.col(c).adjoint();
        }
    }
    for (int c = 0; c < n; ++c)
    {
        const double scale = f.view.users[slots[c]].r.entries().norm();
        CAPTURE(c);
        CHECK((est_cov[c] / draws - bank.estimate_covariance(c)).norm() < 0.03 * scale);
        CHECK((err_cov[c] / draws - bank.error_covariance(c)).norm() < 0.03 * scale);
        CHECK((cross[c] / draws - bank.cross_covariance(0, c)).norm() <
              0.03 * std::sqrt(scale * f.view.users[slots[0]].r.entries().norm()));
        // estimation error is uncorrelated with the estimate
        CHECK((orth[c] / draws).norm() < 0.03 * scale);
    }
    // direct bank draws have the same second moments
    CMatrix bank_cov = CMatrix::Zero(4, 4);
    for (int d = 0; d < draws; ++d)
    {
        const CMatrix hh = bank.draw(rng);
        bank_cov += hh.col(1) * hh.col(1).adjoint();
    }
    CHECK((bank_cov / draws - bank.estimate_covariance(1)).norm() < 0.03 * bank.estimate_covariance(1).norm());
}

TEST_CASE("NMSE: bank, scalar fast path and dense path agree")
{
    for (std::optional<double> spread : {std::optional<double>{}, std::optional<double>(0.17)})
    {
        Fixture f(8, 3, 2, spread, 12);
        EstimatorBank bank(f.view, f.alloc, f.powers, f.all_slots());
        double avg = 0.0;
        for (int i = 0; i < 3; ++i)
        {
            const int n = f.view.slot(0, i);
            const double nmse = bank.nmse(n);
            CHECK(nmse > 0.0);
            CHECK(nmse < 1.0);
            const CMatrix c = bank.error_covariance(n);
            CHECK(nmse == doctest::Approx(c.trace().real() / f.view.users[n].r.entries().trace().real()).epsilon(1e-12));
            avg += nmse / 3;
        }
        CHECK(realization_nmse(f.view, f.alloc, f.powers) == doctest::Approx(avg).epsilon(1e-10));
    }
}

TEST_CASE("random helpers")
{
    std::mt19937_64 rng(2);
    double p = 0.0;
    Complex mean = 0.0;
    const int n = 200000;
    const CVector z = complex_normal(n, rng);
    for (int i = 0; i < n; ++i)
    {
        p += std::norm(z(i));
        mean += z(i);
    }
    CHECK(p / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(mean / double(n)) < 0.01);

    const CMatrix r = one_ring(10, 1.0, 0.5, 0.1).entries();
    const CMatrix s = psd_sqrt(r);
    CHECK((s * s - r).norm() < 1e-8 * r.norm());
    CHECK((s - s.adjoint()).norm() < 1e-12);
}

TEST_CASE("ill-conditioned pilot covariance is reported")
{
    Fixture f(4, 1, 1, std::nullopt, 1);
    PowerProfile loud = f.powers;
    loud.rho_tr = 1e20;
    const ReceiverView view =
        build_receiver_view(f.net, 0, 4, MultiSlopeModel::dual_slope_default(), std::nullopt, loud, f.cache);
    CHECK_THROWS_AS(pilot_covariance(view, f.alloc, loud, 0), NumericalError);
}
