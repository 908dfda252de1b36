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

#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "densemimo/montecarlo.hpp"

using namespace densemimo;

namespace
{
    Scenario tiny(std::optional<double> delta = 10.0)
    {
        Scenario sc;
        sc.lambda = 50.0;
        sc.window_side_km = 1.0;
        sc.m_antennas = 10;
        sc.k_users = 2;
        sc.zeta = 2;
        sc.delta_deg = delta;
        sc.trials = 6;
        sc.fading_redraws = 4;
        sc.estimated_cells = 4;
        sc.master_seed = 99;
        return sc;
    }
} // namespace

TEST_CASE("running statistics match a two-pass computation")
{
    std::mt19937_64 rng(1);
    std::exponential_distribution<double> e(0.7);
    std::vector<double> xs(1000);
    RunningStats s;
    for (double &x : xs)
    {
        x = e(rng);
        s.add(x);
    }
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    const Estimate est = s.estimate();
    CHECK(est.count == 1000);
    CHECK(est.mean == doctest::Approx(mean).epsilon(1e-13));
    CHECK(est.half_width == doctest::Approx(1.96 * std::sqrt(ss / 999.0 / 1000.0)).epsilon(1e-12));
    RunningStats one;
    one.add(3.0);
    CHECK(one.estimate().half_width == 0.0);
}

TEST_CASE("parallel_for visits every index once and rethrows")
{
    for (int threads : {1, 3, 8})
    {
        std::vector<std::atomic<int>> hits(50);
        parallel_for(50, threads, [&](int t) { ++hits[t]; });
        for (auto &h : hits)
            CHECK(h.load() == 1);
    }
    CHECK_THROWS_AS(parallel_for(10, 2, [](int t) {
                        if (t == 7)
                            throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
}

TEST_CASE("scenario defaults, derived values and validation")
{
    Scenario sc;
    CHECK(sc.snr_tr_db() == 15.0);
    CHECK(sc.window_km() == doctest::Approx(std::sqrt(20.0)));
    CHECK(sc.prelog() == doctest::Approx(0.9));
    CHECK(!sc.delta_rad());
    sc.delta_deg = 180.0;
    CHECK(*sc.delta_rad() == doctest::Approx(kPi));
    CHECK_NOTHROW(sc.validate());

    auto bad = [](auto mutate) {
        Scenario s;
        mutate(s);
        CHECK_THROWS_AS(s.validate(), DomainError);
    };
    bad([](Scenario &s) { s.lambda = -1; });
    bad([](Scenario &s) { s.m_antennas = 0; });
    bad([](Scenario &s) { s.zeta = 41; });
    bad([](Scenario &s) { s.delta_deg = -1.0; });
    bad([](Scenario &s) { s.trials = 0; });
    bad([](Scenario &s) { s.window_side_km = 1.0; });
    bad([](Scenario &s) { s.estimated_cells = 0; });
    Scenario edge;
    edge.zeta = 40; // ζK = τ_c is allowed and gives zero prelog
    CHECK_NOTHROW(edge.validate());
    CHECK(edge.prelog() == 0.0);
}

TEST_CASE("simulate: ASE identity, ordering of records, deterministic across threads")
{
    const Scenario sc = tiny();
    const std::vector<Scheme> all(std::begin(kAllSchemes), std::end(kAllSchemes));
    const auto a = simulate(sc, all, {1, {}});
    const auto b = simulate(sc, all, {3, {}});
    REQUIRE(a.size() == 4);
    for (std::size_t s = 0; s < 4; ++s)
    {
        CHECK(a[s].scheme == to_string(all[s]));
        CHECK(a[s].ase == sc.lambda * sc.k_users * a[s].se.mean);
        CHECK(a[s].se.mean == b[s].se.mean);
        CHECK(a[s].se.half_width == b[s].se.half_width);
        CHECK(a[s].coherent.mean == b[s].coherent.mean);
        CHECK(a[s].se.count == sc.trials);
        CHECK(a[s].failed_trials == 0);
        CHECK(a[s].nmse.mean > 0.0);
        CHECK(a[s].nmse.mean < 1.0);
    }
    const ResultRecord single = estimate_se(sc, Scheme::ZF);
    CHECK(single.se.mean == a[1].se.mean);

    int calls = 0;
    RunOptions progress{1, [&](int done, int total) {
                            ++calls;
                            CHECK(done <= total);
                        }};
    simulate(sc, {Scheme::MR}, progress);
    CHECK(calls == sc.trials);
}

TEST_CASE("zero prelog gives zero SE")
{
    Scenario sc = tiny();
    sc.tau_c = sc.zeta * sc.k_users;
    for (const auto &r : simulate(sc, {Scheme::MR, Scheme::MMMSE}))
    {
        CHECK(r.se.mean == 0.0);
        CHECK(r.ase == 0.0);
    }
}

TEST_CASE("snapshot Z matrices equal the dense error-plus-noise sums")
{
    std::mt19937_64 rng(5);
    NetworkRealization net = realization_from_sites({{100, 100}, {600, 150}, {300, 700}, {850, 800}}, 2, 1000.0, 17);
    PilotAllocation alloc = allocate_pilots(net, 1, rng);
    const PowerProfile pw = PowerProfile::from_db(5.0, 15.0);
    const auto snap = build_snapshot(net, alloc, pw, 6, MultiSlopeModel::dual_slope_default(), 0.2, 4);
    const EstimatorBank &bank = *snap->bank;
    REQUIRE(bank.size() == 8);
    CMatrix z = CMatrix::Identity(6, 6);
    CMatrix z_single = CMatrix::Identity(6, 6);
    for (int n = 0; n < bank.size(); ++n)
    {
        const UserChannel &u = snap->view.users[bank.slots()[n]];
        z += u.p * bank.error_covariance(n);
        z_single += u.p * (n < 2 ? bank.error_covariance(n) : u.r.entries());
    }
    CHECK((snap->z - z).norm() < 1e-9 * z.norm());
    CHECK((snap->z_single - z_single).norm() < 1e-9 * z_single.norm());
    CHECK(bank.slots()[0] / 2 == net.typical_bs);
}

TEST_CASE("nearest cells are sorted by torus distance, serving cell first")
{
    const NetworkRealization net = sample_network(50.0, 1, 2.0, 4);
    const auto order = nearest_cells(net, net.typical_bs, 10);
    REQUIRE(order.size() == 10);
    CHECK(order.front() == net.typical_bs);
    double prev = -1.0;
    for (int l : order)
    {
        const Point d = torus_delta(net.bs_positions[net.typical_bs], net.bs_positions[l], net.window_side_m);
        const double dist = std::hypot(d.x, d.y);
        CHECK(dist >= prev);
        prev = dist;
    }
    CHECK(nearest_cells(net, 0, 100000).size() == static_cast<std::size_t>(net.num_bs()));
}

TEST_CASE("UatF estimator: input checks and bound ordering")
{
    Scenario sc = tiny(std::nullopt);
    sc.m_antennas = 20;
    sc.trials = 40;
    sc.fading_redraws = 40;
    CHECK_THROWS_AS(estimate_uatf_se(tiny(10.0), Scheme::MR), DomainError);
    CHECK_THROWS_AS(estimate_uatf_se(sc, Scheme::MMMSE), DomainError);
    const ResultRecord uatf = estimate_uatf_se(sc, Scheme::MR);
    const ResultRecord exact = estimate_se(sc, Scheme::MR);
    CHECK(uatf.kind == "uatf_se");
    CHECK(uatf.se.mean > 0.0);
    CHECK(uatf.ase == sc.lambda * sc.k_users * uatf.se.mean);
    // the use-and-then-forget bound is the looser one
    CHECK(uatf.se.mean <= exact.se.mean + uatf.se.half_width + exact.se.half_width);
}

TEST_CASE("NMSE estimator")
{
    Scenario sc = tiny(10.0);
    sc.trials = 20;
    const ResultRecord r = estimate_nmse(sc);
    CHECK(r.kind == "nmse");
    CHECK(r.nmse.mean > 0.0);
    CHECK(r.nmse.mean < 1.0);
    CHECK(r.nmse.count == 20);
    // identical positions and pilots: more pilot power can only help
    Scenario loud = sc;
    loud.snrtr_db = 30.0;
    CHECK(estimate_nmse(loud).nmse.mean < r.nmse.mean);
}

TEST_CASE("sweep keeps going past a failing scenario")
{
    Scenario good = tiny();
    Scenario bad = tiny();
    bad.zeta = 1000;
    const auto recs = sweep({good, bad, good}, {Scheme::MR, Scheme::ZF});
    REQUIRE(recs.size() == 6);
    CHECK(recs[0].error.empty());
    CHECK(!recs[2].error.empty());
    CHECK(!recs[3].error.empty());
    CHECK(recs[4].se.mean == recs[0].se.mean);
    CHECK_THROWS_AS(sweep({}, {Scheme::MR}), DomainError);
    CHECK_THROWS_AS(simulate(good, {}), DomainError);
}

TEST_CASE("required antennas by bisection")
{
    Scenario sc = tiny();
    sc.trials = 3;
    sc.fading_redraws = 2;
    CHECK(required_antennas(sc, Scheme::MR, 1e-6, 4, 16) == 4);
    CHECK(required_antennas(sc, Scheme::MR, 50.0, 4, 16) == 17);
    const int m = required_antennas(sc, Scheme::MMMSE, 1.0, 2, 64);
    CHECK(m >= 2);
    CHECK(m <= 65);
    CHECK_THROWS_AS(required_antennas(sc, Scheme::MR, 1.0, 10, 5), DomainError);
}
