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
#include "densemimo/selftest.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "densemimo/analytic.hpp"
#include "densemimo/combining.hpp"
#include "densemimo/geometry.hpp"
#include "densemimo/montecarlo.hpp"
#include "densemimo/propagation.hpp"
#include "densemimo/specfun.hpp"
#include "densemimo/uplink.hpp"

namespace densemimo
{
    namespace
    {
        using Check = std::function<std::string()>; // empty string means pass

        std::string fmt(const char *what, double got, double want)
        {
            std::ostringstream os;
            os.precision(17);
            os << what << ": got " << got << ", expected " << want;
            return os.str();
        }

        bool close(double a, double b, double rel, double abs = 0.0)
        {
            return std::abs(a - b) <= abs + rel * std::max(std::abs(a), std::abs(b));
        }

        std::string gamma_identities()
        {
            using namespace specfun;
            const double as[] = {0.05, 0.5, 1.0, 2.5, 7.0, 30.0};
            const double xs[] = {1e-6, 0.1, 1.0, 3.0, 10.0, 45.0};
            for (double a : as)
            {
                for (double x : xs)
                {
                    const double sum = upper_incomplete_gamma(a, x) + lower_incomplete_gamma(a, x);
                    if (!close(sum, std::tgamma(a), 1e-12))
                        return fmt("upper + lower", sum, std::tgamma(a));
                    const double lhs = upper_incomplete_gamma(a + 1.0, x);
                    const double rhs = a * upper_incomplete_gamma(a, x) + std::pow(x, a) * std::exp(-x);
                    if (!close(lhs, rhs, 1e-12))
                        return fmt("recurrence", lhs, rhs);
                    const double diff = incomplete_gamma_difference(a, x, 2.0 * x);
                    const double naive = upper_incomplete_gamma(a, x) - upper_incomplete_gamma(a, 2.0 * x);
                    if (!close(diff, naive, 1e-9, 1e-14 * std::tgamma(a)))
                        return fmt("difference", diff, naive);
                }
            }
            return {};
        }

        std::string lambert_round_trip()
        {
            const double vs[] = {-1.0 / std::exp(1.0) + 1e-12, -0.2, 0.0, 0.5, 1.0, 10.0, 1e3, 1e8};
            for (double v : vs)
            {
                const double w = specfun::lambert_w0(v);
                if (!close(w * std::exp(w), v, 1e-12, 1e-15))
                    return fmt("W e^W", w * std::exp(w), v);
            }
            return {};
        }

        std::string gauss_legendre_exactness()
        {
            for (int order : {1, 3, 8, 20})
            {
                const auto &rule = specfun::cached_gauss_legendre(order);
                for (int deg = 0; deg <= 2 * order - 1; ++deg)
                {
                    double acc = 0.0;
                    for (std::size_t n = 0; n < rule.nodes.size(); ++n)
                        acc += rule.weights[n] * std::pow(rule.nodes[n], deg);
                    const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
                    if (!close(acc, exact, 1e-13, 1e-14))
                        return fmt("monomial integral", acc, exact);
                }
            }
            return {};
        }

        std::string one_ring_psd()
        {
            for (double spread_deg : {0.0, 5.0, 10.0, 40.0})
            {
                const CorrelationMatrix r = one_ring(32, 2.5, 0.7, deg_to_rad(spread_deg));
                const CMatrix e = r.entries();
                if ((e - e.adjoint()).norm() > 1e-12 * e.norm())
                    return "one-ring matrix is not Hermitian";
                if (!close(e.trace().real(), 32 * 2.5, 1e-12))
                    return fmt("trace", e.trace().real(), 80.0);
                const Eigen::SelfAdjointEigenSolver<CMatrix> eig(e);
                if (eig.eigenvalues().minCoeff() < -1e-10 * e.norm())
                    return fmt("smallest eigenvalue", eig.eigenvalues().minCoeff(), 0.0);
            }
            return {};
        }

        std::string path_loss_continuity()
        {
            const MultiSlopeModel model = MultiSlopeModel::dual_slope_default();
            const double r1 = model.breakpoint(1);
            const double below = model.gain(r1 * (1.0 - 1e-12));
            const double at = model.gain(r1);
            if (!close(below, at, 1e-9))
                return fmt("gain across breakpoint", below, at);
            return {};
        }

        // Five BSs on a 1 km torus, M = 16, K = 4, every cell estimated explicitly.
        std::unique_ptr<ReceiverSnapshot> small_snapshot(std::uint64_t seed, std::optional<double> spread)
        {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> coord(0.0, 1000.0);
            std::vector<Point> sites(5);
            for (auto &p : sites)
                p = {coord(rng), coord(rng)};
            NetworkRealization net = realization_from_sites(std::move(sites), 4, 1000.0, rng());
            PilotAllocation alloc = allocate_pilots(net, 2, rng);
            return build_snapshot(std::move(net), std::move(alloc), PowerProfile::from_db(5.0, 15.0), 16,
                                  MultiSlopeModel::dual_slope_default(), spread, 5);
        }

        std::string zf_identity()
        {
            const auto snap = small_snapshot(7, deg_to_rad(10.0));
            std::mt19937_64 rng(8);
            const CMatrix h_hat = snap->bank->draw(rng);
            const CombinerSet zf = build_combiner(Scheme::ZF, snap->inputs(h_hat));
            const CMatrix g = zf.vectors.adjoint() * h_hat.leftCols(snap->k_users());
            const double err = (g - CMatrix::Identity(g.rows(), g.cols())).norm();
            if (err > 1e-9)
                return fmt("||V^H H - I||", err, 0.0);
            return {};
        }

        std::string mmmse_optimality()
        {
            for (int draw = 0; draw < 10; ++draw)
            {
                const auto snap = small_snapshot(100 + draw, draw % 2 ? std::optional<double>(deg_to_rad(10.0)) : std::nullopt);
                std::mt19937_64 rng(200 + draw);
                const CMatrix h_hat = snap->bank->draw(rng);
                const CombiningInputs in = snap->inputs(h_hat);
                const auto best = sinr_all(build_combiner(Scheme::MMMSE, in), in);
                for (Scheme s : {Scheme::MR, Scheme::ZF, Scheme::SMMSE})
                {
                    const auto other = sinr_all(build_combiner(s, in), in);
                    for (int k = 0; k < in.k_serving; ++k)
                        if (other[k].sinr > best[k].sinr * (1.0 + 1e-9))
                            return std::string(to_string(s)) + " beats M-MMSE: " +
                                   fmt("SINR", other[k].sinr, best[k].sinr);
                }
                for (int probe = 0; probe < 10; ++probe)
                {
                    const CVector v = complex_normal(h_hat.rows(), rng);
                    for (int k = 0; k < in.k_serving; ++k)
                    {
                        const double s = instantaneous_sinr(v, k, in).sinr;
                        if (s > best[k].sinr * (1.0 + 1e-9))
                            return fmt("random probe beats M-MMSE", s, best[k].sinr);
                    }
                }
            }
            return {};
        }

        std::string moment_monotonicity()
        {
            const MultiSlopeModel model = MultiSlopeModel::dual_slope_default();
            analytic::MomentPair prev = analytic::moments(model, 1.0);
            for (double lambda : {2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0})
            {
                const analytic::MomentPair cur = analytic::moments(model, lambda);
                if (cur.mu1 < prev.mu1 - 1e-12 || cur.mu2 < prev.mu2 - 1e-12)
                    return fmt("moment decreased at lambda", lambda, prev.lambda);
                prev = cur;
            }
            return {};
        }

        std::string ase_identity()
        {
            Scenario sc;
            sc.lambda = 50.0;
            sc.window_side_km = 1.0;
            sc.m_antennas = 8;
            sc.k_users = 2;
            sc.zeta = 2;
            sc.trials = 2;
            sc.fading_redraws = 2;
            sc.estimated_cells = 3;
            for (const ResultRecord &r : simulate(sc, {std::begin(kAllSchemes), std::end(kAllSchemes)}))
                if (r.ase != sc.lambda * sc.k_users * r.se.mean)
                    return fmt("ase", r.ase, sc.lambda * sc.k_users * r.se.mean);
            return {};
        }
    } // namespace

    std::vector<SelftestResult> run_selftest(std::ostream *out)
    {
        const std::pair<const char *, Check> checks[] = {
            {"incomplete gamma identities", gamma_identities},
            {"Lambert W round trip", lambert_round_trip},
            {"Gauss-Legendre exactness", gauss_legendre_exactness},
            {"one-ring Hermitian PSD with trace M beta", one_ring_psd},
            {"path loss continuity", path_loss_continuity},
            {"ZF identity", zf_identity},
            {"M-MMSE optimality", mmmse_optimality},
            {"moment monotonicity", moment_monotonicity},
            {"ASE identity", ase_identity},
        };
        std::vector<SelftestResult> results;
        for (const auto &[name, fn] : checks)
        {
            SelftestResult r;
            r.name = name;
            try
            {
                r.detail = fn();
                r.passed = r.detail.empty();
            }
            catch (const std::exception &e)
            {
                r.detail = std::string("exception: ") + e.what();
            }
            if (out)
                *out << (r.passed ? "ok   " : "FAIL ") << r.name << (r.detail.empty() ? "" : "  (" + r.detail + ")")
                     << '\n';
            results.push_back(std::move(r));
        }
        return results;
    }
} // namespace densemimo
