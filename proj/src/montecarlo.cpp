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
#include "densemimo/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "densemimo/combining.hpp"
#include "densemimo/geometry.hpp"
#include "densemimo/uplink.hpp"

namespace densemimo
{
    namespace
    {
        double seconds_since(std::chrono::steady_clock::time_point t0)
        {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }

        struct SchemeTrial
        {
            double se = 0.0; // mean log2(1 + SINR) over fading draws and serving UEs
            double noncoherent = 0.0;
            double coherent = 0.0;
        };

        struct TrialOutcome
        {
            bool ok = false;
            double nmse = 0.0;
            std::vector<SchemeTrial> schemes;
        };

        TrialOutcome run_trial(const Scenario &sc, const std::vector<Scheme> &schemes, int trial)
        {
            TrialOutcome out;
            std::mt19937_64 rng(derive_seed(sc.master_seed, sc.stream, static_cast<std::uint64_t>(trial)));
            NetworkRealization net = sample_network(sc.lambda, sc.k_users, sc.window_km(), rng());
            PilotAllocation alloc = allocate_pilots(net, sc.zeta, rng);
            const PowerProfile powers = PowerProfile::from_db(sc.snr0_db, sc.snr_tr_db());
            const auto snap = build_snapshot(std::move(net), std::move(alloc), powers, sc.m_antennas, sc.model,
                                             sc.delta_rad(), sc.estimated_cells);
            const EstimatorBank &bank = *snap->bank;
            const Eigen::VectorXd &power = snap->power;
            const int k = sc.k_users;
            const int n_est = bank.size();
            out.nmse = snap->nmse;

            // Estimated UEs in other cells that reuse the pilot of serving UE kk.
            std::vector<std::vector<int>> contaminators(static_cast<std::size_t>(k));
            for (int kk = 0; kk < k; ++kk)
                for (int n = k; n < n_est; ++n)
                    if (bank.pilot_of(n) == bank.pilot_of(kk))
                        contaminators[kk].push_back(n);

            const std::size_t ns = schemes.size();
            std::vector<double> se_acc(ns, 0.0), total_acc(ns, 0.0);
            std::vector<std::vector<std::vector<Complex>>> mean_proj(
                ns, std::vector<std::vector<Complex>>(static_cast<std::size_t>(k)));
            for (std::size_t s = 0; s < ns; ++s)
                for (int kk = 0; kk < k; ++kk)
                    mean_proj[s][kk].assign(contaminators[kk].size(), Complex(0.0));

            const int nf = sc.fading_redraws;
            for (int f = 0; f < nf; ++f)
            {
                const CMatrix h_hat = bank.draw(rng);
                const CombiningInputs in = snap->inputs(h_hat);
                for (std::size_t s = 0; s < ns; ++s)
                {
                    const CombinerSet set = build_combiner(schemes[s], in);
                    const std::vector<SinrSample> sinr = sinr_all(set, in, powers.sigma2);
                    for (int kk = 0; kk < k; ++kk)
                    {
                        const SinrSample &smp = sinr[kk];
                        if (!std::isfinite(smp.sinr))
                            throw NumericalError("non-finite SINR");
                        se_acc[s] += std::log2(1.0 + smp.sinr);
                        const double vn2 = set.vectors.col(kk).squaredNorm();
                        total_acc[s] += smp.interference() / vn2;
                        const double vn = std::sqrt(vn2);
                        for (std::size_t c = 0; c < contaminators[kk].size(); ++c)
                            mean_proj[s][kk][c] += set.vectors.col(kk).dot(h_hat.col(contaminators[kk][c])) / vn;
                    }
                }
            }

            out.schemes.resize(ns);
            for (std::size_t s = 0; s < ns; ++s)
            {
                double coherent = 0.0;
                for (int kk = 0; kk < k; ++kk)
                    for (std::size_t c = 0; c < contaminators[kk].size(); ++c)
                        coherent += power(contaminators[kk][c]) * std::norm(mean_proj[s][kk][c] / double(nf));
                out.schemes[s].se = se_acc[s] / (double(nf) * k);
                out.schemes[s].coherent = coherent / k;
                out.schemes[s].noncoherent = total_acc[s] / (double(nf) * k) - out.schemes[s].coherent;
            }
            out.ok = true;
            return out;
        }

        void check_failures(int failed, int trials)
        {
            if (failed * 100 > trials)
                throw NumericalError("more than 1% of trials failed numerically (" + std::to_string(failed) + " of " +
                                     std::to_string(trials) + ")");
        }

        template <class Fn>
        std::vector<TrialOutcome> run_trials(const Scenario &sc, const RunOptions &options, Fn &&fn)
        {
            std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(sc.trials));
            std::atomic<int> done{0};
            std::mutex progress_guard;
            parallel_for(sc.trials, options.threads, [&](int t) {
                try
                {
                    outcomes[t] = fn(t);
                }
                catch (const NumericalError &)
                {
                    outcomes[t].ok = false;
                }
                const int d = ++done;
                if (options.progress)
                {
                    std::lock_guard lock(progress_guard);
                    options.progress(d, sc.trials);
                }
            });
            return outcomes;
        }

        ResultRecord base_record(const Scenario &sc, std::string scheme, std::string kind)
        {
            ResultRecord r;
            r.scenario = sc;
            r.scheme = std::move(scheme);
            r.kind = std::move(kind);
            return r;
        }

        void finish_se(ResultRecord &r, const RunningStats &stats)
        {
            const Scenario &sc = r.scenario;
            const double prelog = sc.prelog();
            Estimate se = stats.estimate();
            se.mean *= prelog;
            se.half_width *= prelog;
            r.se = se;
            r.ase = sc.lambda * sc.k_users * se.mean;
            r.ase_half_width = sc.lambda * sc.k_users * se.half_width;
        }

        // Use-and-then-forget SINRs of the serving UEs for one uncorrelated trial.
        std::vector<double> uatf_trial(const Scenario &sc, Scheme scheme, int trial)
        {
            std::mt19937_64 rng(derive_seed(sc.master_seed, sc.stream, static_cast<std::uint64_t>(trial)));
            const NetworkRealization net = sample_network(sc.lambda, sc.k_users, sc.window_km(), rng());
            const PilotAllocation alloc = allocate_pilots(net, sc.zeta, rng);
            const PowerProfile powers = PowerProfile::from_db(sc.snr0_db, sc.snr_tr_db());
            const int j = net.typical_bs;
            const int k = sc.k_users;
            const int m = sc.m_antennas;
            const double tau_p = alloc.tau_p;

            // Per pilot index i of the serving group: q_i (Q = q_i I), and the
            // coefficients of E|v^H y_i|² and E‖v‖² in the interference sum.
            std::vector<double> q(static_cast<std::size_t>(k), powers.sigma2);
            std::vector<double> own_gain(static_cast<std::size_t>(k)), own_beta(static_cast<std::size_t>(k));
            std::vector<double> own_p(static_cast<std::size_t>(k)), own_pp(static_cast<std::size_t>(k));
            std::vector<double> beta_j(static_cast<std::size_t>(net.num_bs()) * k);
            std::vector<double> p(beta_j.size()), pp(beta_j.size());
            for (int l = 0; l < net.num_bs(); ++l)
            {
                for (int i = 0; i < k; ++i)
                {
                    const std::size_t s = static_cast<std::size_t>(l) * k + i;
                    const double b_own = path_loss(sc.model, net.link(l, i, l).distance_m);
                    beta_j[s] = path_loss(sc.model, net.link(l, i, j).distance_m);
                    p[s] = powers.data_power(b_own);
                    pp[s] = powers.pilot_power(b_own);
                    if (alloc.shares(l, j))
                        q[i] += pp[s] * tau_p * beta_j[s];
                }
            }
            double norm_coef = powers.sigma2;
            std::vector<double> proj_coef(static_cast<std::size_t>(k), 0.0);
            for (int l = 0; l < net.num_bs(); ++l)
            {
                for (int i = 0; i < k; ++i)
                {
                    const std::size_t s = static_cast<std::size_t>(l) * k + i;
                    if (alloc.shares(l, j))
                    {
                        // h = c y_i + e with c = √p^p β / q_i and e independent of every y.
                        const double c = std::sqrt(pp[s]) * beta_j[s] / q[i];
                        proj_coef[i] += p[s] * c * c;
                        norm_coef += p[s] * beta_j[s] * (1.0 - pp[s] * tau_p * beta_j[s] / q[i]);
                    }
                    else
                    {
                        norm_coef += p[s] * beta_j[s];
                    }
                }
            }
            for (int i = 0; i < k; ++i)
            {
                const std::size_t s = static_cast<std::size_t>(j) * k + i;
                own_beta[i] = beta_j[s];
                own_p[i] = p[s];
                own_pp[i] = pp[s];
                own_gain[i] = std::sqrt(pp[s]) * beta_j[s] / q[i];
            }

            const int nf = sc.fading_redraws;
            std::vector<Complex> mean_signal(static_cast<std::size_t>(k), 0.0);
            std::vector<double> mean_norm(static_cast<std::size_t>(k), 0.0);
            CMatrix mean_proj2 = CMatrix::Zero(k, k); // E|v_k^H y_i|² stored in the real part
            CMatrix y(m, k), h_hat(m, k);
            for (int f = 0; f < nf; ++f)
            {
                for (int i = 0; i < k; ++i)
                {
                    y.col(i) = std::sqrt(tau_p * q[i]) * complex_normal(m, rng);
                    h_hat.col(i) = own_gain[i] * y.col(i);
                }
                CMatrix v;
                if (scheme == Scheme::MR)
                    v = h_hat;
                else
                    v = h_hat * hermitian_solve(h_hat.adjoint() * h_hat, CMatrix::Identity(k, k));
                const CMatrix proj = v.adjoint() * y; // (k, i) -> v_k^H y_i
                for (int kk = 0; kk < k; ++kk)
                {
                    mean_signal[kk] += proj(kk, kk);
                    mean_norm[kk] += v.col(kk).squaredNorm();
                    for (int i = 0; i < k; ++i)
                        mean_proj2(kk, i) += std::norm(proj(kk, i));
                }
            }

            std::vector<double> sinr(static_cast<std::size_t>(k));
            for (int kk = 0; kk < k; ++kk)
            {
                const Complex ev_h = own_gain[kk] * mean_signal[kk] / double(nf);
                const double signal = own_p[kk] * std::norm(ev_h);
                double denom = norm_coef * mean_norm[kk] / nf;
                for (int i = 0; i < k; ++i)
                    denom += proj_coef[i] * mean_proj2(kk, i).real() / nf;
                sinr[kk] = signal / (denom - signal);
            }
            return sinr;
        }
    } // namespace

    CorrelationCache &shared_correlation_cache()
    {
        static CorrelationCache cache;
        return cache;
    }

    std::vector<int> nearest_cells(const NetworkRealization &net, int center, int count)
    {
        std::vector<int> order(static_cast<std::size_t>(net.num_bs()));
        std::iota(order.begin(), order.end(), 0);
        std::vector<double> d2(order.size());
        for (int l = 0; l < net.num_bs(); ++l)
        {
            const Point d = torus_delta(net.bs_positions[center], net.bs_positions[l], net.window_side_m);
            d2[l] = d.x * d.x + d.y * d.y;
        }
        const int n = std::min(count, net.num_bs());
        std::partial_sort(order.begin(), order.begin() + n, order.end(),
                          [&](int a, int b) { return d2[a] < d2[b] || (d2[a] == d2[b] && a < b); });
        order.resize(static_cast<std::size_t>(n));
        return order;
    }

    CombiningInputs ReceiverSnapshot::inputs(const CMatrix &h_hat) const
    {
        CombiningInputs in;
        in.h_hat = &h_hat;
        in.power = &power;
        in.k_serving = view.k_users;
        in.z = &z;
        in.z_single = &z_single;
        return in;
    }

    std::unique_ptr<ReceiverSnapshot> build_snapshot(NetworkRealization net, PilotAllocation alloc,
                                                     const PowerProfile &powers, int m_antennas,
                                                     const MultiSlopeModel &model, std::optional<double> spread_rad,
                                                     int estimated_cells)
    {
        auto snap = std::make_unique<ReceiverSnapshot>();
        snap->net = std::move(net);
        snap->alloc = std::move(alloc);
        snap->powers = powers;
        const int j = snap->net.typical_bs;
        const int k = snap->net.k_users;
        const int m = m_antennas;
        snap->view = build_receiver_view(snap->net, j, m, model, spread_rad, powers, shared_correlation_cache());
        const ReceiverView &view = snap->view;

        std::vector<int> slots;
        for (int l : nearest_cells(snap->net, j, estimated_cells))
            for (int i = 0; i < k; ++i)
                slots.push_back(view.slot(l, i));
        snap->bank = std::make_unique<EstimatorBank>(view, snap->alloc, powers, slots);
        const EstimatorBank &bank = *snap->bank;
        const int n_est = bank.size();

        // Z with every UE through its full correlation, then remove the estimated parts.
        CVector zcol = CVector::Zero(m);
        for (const UserChannel &u : view.users)
        {
            if (u.r.isotropic())
                zcol(0) += u.p * u.r.beta;
            else
                zcol += (u.p * u.r.beta) * (*u.r.shape);
        }
        zcol(0) += powers.sigma2;
        CorrelationMatrix zt;
        zt.m_antennas = m;
        zt.beta = 1.0;
        zt.shape = std::make_shared<const CVector>(zcol);
        snap->z_single = zt.entries();
        snap->power.resize(n_est);
        for (int n = 0; n < n_est; ++n)
        {
            const UserChannel &u = view.users[slots[n]];
            snap->power(n) = u.p;
            if (n < k)
                snap->z_single.noalias() -= u.p * bank.factor(n) * bank.factor(n).adjoint();
        }
        snap->z = snap->z_single;
        for (int n = k; n < n_est; ++n)
            snap->z.noalias() -= snap->power(n) * bank.factor(n) * bank.factor(n).adjoint();

        double nmse = 0.0;
        for (int n = 0; n < k; ++n)
            nmse += bank.nmse(n);
        snap->nmse = nmse / k;
        return snap;
    }

    double Scenario::window_km() const
    {
        return window_side_km.value_or(default_window_side_km(lambda));
    }

    std::optional<double> Scenario::delta_rad() const
    {
        if (!delta_deg)
            return std::nullopt;
        return deg_to_rad(*delta_deg);
    }

    double Scenario::prelog() const
    {
        return std::max(0.0, 1.0 - zeta * k_users / tau_c);
    }

    void Scenario::validate() const
    {
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw DomainError("scenario: lambda must be positive");
        if (m_antennas < 1 || k_users < 1 || zeta < 1)
            throw DomainError("scenario: M, K and zeta must be positive integers");
        if (delta_deg && !(*delta_deg >= 0.0 && *delta_deg <= 180.0))
            throw DomainError("scenario: delta must lie in [0, 180] degrees");
        if (!(tau_c > 0.0) || zeta * k_users > tau_c)
            throw DomainError("scenario: need zeta * K <= tau_c");
        if (trials < 1 || fading_redraws < 1)
            throw DomainError("scenario: trials and fading_redraws must be >= 1");
        if (estimated_cells < 1)
            throw DomainError("scenario: estimated_cells must be >= 1");
        if (!std::isfinite(snr0_db) || !std::isfinite(snr_tr_db()))
            throw DomainError("scenario: SNRs must be finite");
        const double side = window_km();
        if (!(side > 0.0) || lambda * side * side < 50.0)
            throw DomainError("scenario: window too small, expected BS count below 50");
    }

    void RunningStats::add(double x)
    {
        ++n_;
        const double d = x - mean_;
        mean_ += d / n_;
        m2_ += d * (x - mean_);
    }

    Estimate RunningStats::estimate() const
    {
        Estimate e;
        e.count = n_;
        e.mean = mean_;
        e.half_width = n_ > 1 ? 1.96 * std::sqrt(m2_ / (n_ - 1) / n_) : 0.0;
        return e;
    }

    void parallel_for(int n, int threads, const std::function<void(int)> &body)
    {
        const int workers = std::max(1, std::min(threads, n));
        if (workers == 1)
        {
            for (int t = 0; t < n; ++t)
                body(t);
            return;
        }
        std::atomic<int> next{0};
        std::exception_ptr first_error;
        std::mutex error_guard;
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
        {
            pool.emplace_back([&] {
                for (int t = next++; t < n; t = next++)
                {
                    try
                    {
                        body(t);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(error_guard);
                        if (!first_error)
                            first_error = std::current_exception();
                    }
                }
            });
        }
        for (auto &th : pool)
            th.join();
        if (first_error)
            std::rethrow_exception(first_error);
    }

    std::vector<ResultRecord> simulate(const Scenario &scenario, const std::vector<Scheme> &schemes,
                                       const RunOptions &options)
    {
        scenario.validate();
        if (schemes.empty())
            throw DomainError("simulate: no schemes requested");
        const auto t0 = std::chrono::steady_clock::now();
        const auto outcomes =
            run_trials(scenario, options, [&](int t) { return run_trial(scenario, schemes, t); });

        int failed = 0;
        RunningStats nmse;
        std::vector<RunningStats> se(schemes.size()), nonc(schemes.size()), coh(schemes.size());
        for (const TrialOutcome &o : outcomes)
        {
            if (!o.ok)
            {
                ++failed;
                continue;
            }
            nmse.add(o.nmse);
            for (std::size_t s = 0; s < schemes.size(); ++s)
            {
                se[s].add(o.schemes[s].se);
                nonc[s].add(o.schemes[s].noncoherent);
                coh[s].add(o.schemes[s].coherent);
            }
        }
        check_failures(failed, scenario.trials);

        std::vector<ResultRecord> records;
        const double elapsed = seconds_since(t0);
        for (std::size_t s = 0; s < schemes.size(); ++s)
        {
            ResultRecord r = base_record(scenario, std::string(to_string(schemes[s])), "se");
            finish_se(r, se[s]);
            r.nmse = nmse.estimate();
            r.noncoherent = nonc[s].estimate();
            r.coherent = coh[s].estimate();
            r.failed_trials = failed;
            r.wall_time = elapsed;
            records.push_back(std::move(r));
        }
        return records;
    }

    ResultRecord estimate_se(const Scenario &scenario, Scheme scheme, const RunOptions &options)
    {
        return simulate(scenario, {scheme}, options).front();
    }

    ResultRecord estimate_uatf_se(const Scenario &scenario, Scheme scheme, const RunOptions &options)
    {
        scenario.validate();
        if (scenario.delta_deg)
            throw DomainError("estimate_uatf_se: defined for uncorrelated fading only");
        if (scheme != Scheme::MR && scheme != Scheme::ZF)
            throw DomainError("estimate_uatf_se: MR or ZF only");
        if (scheme == Scheme::ZF && scenario.m_antennas <= scenario.k_users)
            throw DomainError("estimate_uatf_se: ZF needs M > K");
        const auto t0 = std::chrono::steady_clock::now();
        const auto outcomes = run_trials(scenario, options, [&](int t) {
            TrialOutcome o;
            double acc = 0.0;
            const std::vector<double> sinr = uatf_trial(scenario, scheme, t);
            for (double s : sinr)
            {
                if (!std::isfinite(s) || s < 0.0)
                    throw NumericalError("invalid UatF SINR");
                acc += std::log2(1.0 + s);
            }
            o.schemes.push_back({acc / sinr.size(), 0.0, 0.0});
            o.ok = true;
            return o;
        });
        int failed = 0;
        RunningStats se;
        for (const TrialOutcome &o : outcomes)
        {
            if (!o.ok)
                ++failed;
            else
                se.add(o.schemes.front().se);
        }
        check_failures(failed, scenario.trials);
        ResultRecord r = base_record(scenario, std::string(to_string(scheme)), "uatf_se");
        finish_se(r, se);
        r.failed_trials = failed;
        r.wall_time = seconds_since(t0);
        return r;
    }

    ResultRecord estimate_nmse(const Scenario &scenario, const RunOptions &options)
    {
        scenario.validate();
        const auto t0 = std::chrono::steady_clock::now();
        const auto outcomes = run_trials(scenario, options, [&](int t) {
            TrialOutcome o;
            std::mt19937_64 rng(derive_seed(scenario.master_seed, scenario.stream, static_cast<std::uint64_t>(t)));
            const NetworkRealization net =
                sample_network(scenario.lambda, scenario.k_users, scenario.window_km(), rng());
            const PilotAllocation alloc = allocate_pilots(net, scenario.zeta, rng);
            const PowerProfile powers = PowerProfile::from_db(scenario.snr0_db, scenario.snr_tr_db());
            const ReceiverView view = build_receiver_view(net, net.typical_bs, scenario.m_antennas, scenario.model,
                                                          scenario.delta_rad(), powers, shared_correlation_cache());
            o.nmse = realization_nmse(view, alloc, powers);
            o.ok = true;
            return o;
        });
        int failed = 0;
        RunningStats nmse;
        for (const TrialOutcome &o : outcomes)
        {
            if (!o.ok)
                ++failed;
            else
                nmse.add(o.nmse);
        }
        check_failures(failed, scenario.trials);
        ResultRecord r = base_record(scenario, "-", "nmse");
        r.nmse = nmse.estimate();
        r.failed_trials = failed;
        r.wall_time = seconds_since(t0);
        return r;
    }

    std::pair<double, double> interference_decomposition(Scheme scheme, const Scenario &scenario,
                                                         const RunOptions &options)
    {
        const ResultRecord r = estimate_se(scenario, scheme, options);
        return {r.noncoherent_db(), r.coherent_db()};
    }

    std::vector<ResultRecord> sweep(const std::vector<Scenario> &grid, const std::vector<Scheme> &schemes,
                                    const RunOptions &options)
    {
        if (grid.empty())
            throw DomainError("sweep: empty grid");
        std::vector<ResultRecord> all;
        for (const Scenario &sc : grid)
        {
            try
            {
                auto recs = simulate(sc, schemes, options);
                all.insert(all.end(), recs.begin(), recs.end());
            }
            catch (const std::exception &e)
            {
                for (Scheme s : schemes)
                {
                    ResultRecord r = base_record(sc, std::string(to_string(s)), "se");
                    r.error = e.what();
                    all.push_back(std::move(r));
                }
            }
        }
        return all;
    }

    int required_antennas(Scenario scenario, Scheme scheme, double target_se, int m_lo, int m_hi,
                          const RunOptions &options)
    {
        if (m_lo < 1 || m_hi < m_lo)
            throw DomainError("required_antennas: invalid antenna range");
        auto reaches = [&](int m) {
            scenario.m_antennas = m;
            return estimate_se(scenario, scheme, options).se.mean >= target_se;
        };
        if (!reaches(m_hi))
            return m_hi + 1;
        int lo = m_lo, hi = m_hi;
        while (lo < hi)
        {
            const int mid = lo + (hi - lo) / 2;
            if (reaches(mid))
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    }
} // namespace densemimo
