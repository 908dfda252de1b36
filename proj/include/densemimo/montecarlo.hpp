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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "densemimo/combining.hpp"
#include "densemimo/common.hpp"
#include "densemimo/geometry.hpp"
#include "densemimo/propagation.hpp"
#include "densemimo/uplink.hpp"

namespace densemimo
{
    /// One simulation point. Densities in BS/km², angles in degrees, SNRs in dB.
    struct Scenario
    {
        double lambda = 10.0;
        int m_antennas = 100;
        int k_users = 10;
        int zeta = 4;
        std::optional<double> delta_deg; // empty: uncorrelated fading
        double snr0_db = 5.0;
        std::optional<double> snrtr_db; // empty: SNR_0 + 10 dB
        double tau_c = 400.0;
        MultiSlopeModel model = MultiSlopeModel::dual_slope_default();
        int trials = 500;
        int fading_redraws = 200;
        std::uint64_t master_seed = 1;
        std::uint64_t stream = 0;   // scenario index inside a sweep
        int estimated_cells = 12;   // cells around the typical BS whose UEs are estimated explicitly
        std::optional<double> window_side_km; // empty: max(1, sqrt(200/λ))

        double snr_tr_db() const { return snrtr_db.value_or(snr0_db + 10.0); }
        double window_km() const;
        std::optional<double> delta_rad() const;
        double prelog() const;
        /// Throws DomainError on any invalid field.
        void validate() const;
    };

    /// Mean with a 95% normal-approximation half-width.
    struct Estimate
    {
        double mean = 0.0;
        double half_width = 0.0;
        int count = 0;
    };

    /// Accumulates samples and produces an Estimate (half-width 1.96 stderr).
    class RunningStats
    {
    public:
        void add(double x);
        Estimate estimate() const;
        int count() const { return n_; }

    private:
        int n_ = 0;
        double mean_ = 0.0;
        double m2_ = 0.0;
    };

    /// Second-order statistics at the typical BS of one realization: estimates are
    /// formed explicitly for the UEs of the `estimated_cells` cells nearest to it
    /// (serving cell first); every other UE enters Z through its full correlation.
    struct ReceiverSnapshot
    {
        NetworkRealization net;
        PilotAllocation alloc;
        PowerProfile powers;
        ReceiverView view;
        std::unique_ptr<EstimatorBank> bank;
        Eigen::VectorXd power; // data power per bank entry
        CMatrix z;             // Σ p C over estimated UEs + Σ p R over the rest + σ² I
        CMatrix z_single;      // same with only the serving cell's UEs estimated
        double nmse = 0.0;     // mean tr(C)/tr(R) over the serving UEs

        int k_users() const { return view.k_users; }
        CombiningInputs inputs(const CMatrix &h_hat) const;
    };

    std::unique_ptr<ReceiverSnapshot> build_snapshot(NetworkRealization net, PilotAllocation alloc,
                                                     const PowerProfile &powers, int m_antennas,
                                                     const MultiSlopeModel &model, std::optional<double> spread_rad,
                                                     int estimated_cells);

    /// Cells ordered by torus distance from `center` (itself first), truncated to `count`.
    std::vector<int> nearest_cells(const NetworkRealization &net, int center, int count);

    /// Correlation-shape cache shared by every simulation in the process.
    CorrelationCache &shared_correlation_cache();

    struct ResultRecord
    {
        Scenario scenario;
        std::string scheme; // MR, ZF, S-MMSE, M-MMSE
        std::string kind;   // "se", "uatf_se" or "nmse"
        Estimate se;
        double ase = 0.0; // λ K se
        double ase_half_width = 0.0;
        Estimate nmse;
        Estimate noncoherent; // linear, unit-norm combiner
        Estimate coherent;
        int failed_trials = 0;
        double wall_time = 0.0;
        std::string error; // non-empty when the scenario failed

        double noncoherent_db() const { return linear_to_db(noncoherent.mean); }
        double coherent_db() const { return linear_to_db(coherent.mean); }
    };

    struct RunOptions
    {
        int threads = 1;
        /// Called after each finished trial with (done, total); may be empty.
        std::function<void(int, int)> progress;
    };

    /// Full Monte Carlo at the typical BS: one record per requested scheme, all
    /// schemes sharing the same positions, pilots and fading draws.
    std::vector<ResultRecord> simulate(const Scenario &scenario, const std::vector<Scheme> &schemes,
                                       const RunOptions &options = {});

    ResultRecord estimate_se(const Scenario &scenario, Scheme scheme, const RunOptions &options = {});

    /// Use-and-then-forget SE in uncorrelated fading: the fading expectations of the
    /// bound are estimated from `fading_redraws` draws with positions and pilots frozen.
    ResultRecord estimate_uatf_se(const Scenario &scenario, Scheme scheme, const RunOptions &options = {});

    /// Average NMSE of the typical cell over positions and pilot draws (no fading needed).
    ResultRecord estimate_nmse(const Scenario &scenario, const RunOptions &options = {});

    /// (non-coherent, coherent) interference power in dB for a unit-norm combiner.
    std::pair<double, double> interference_decomposition(Scheme scheme, const Scenario &scenario,
                                                         const RunOptions &options = {});

    /// Runs every scenario for every scheme, in grid order. A failing scenario yields
    /// records with `error` set instead of aborting the sweep.
    std::vector<ResultRecord> sweep(const std::vector<Scenario> &grid, const std::vector<Scheme> &schemes,
                                    const RunOptions &options = {});

    /// Smallest M in [m_lo, m_hi] whose simulated SE reaches `target_se` (bisection;
    /// assumes SE increasing in M). Returns m_hi + 1 if even m_hi falls short.
    int required_antennas(Scenario scenario, Scheme scheme, double target_se, int m_lo, int m_hi,
                          const RunOptions &options = {});

    /// Runs `body(trial)` for trial = 0..n-1 on up to `threads` workers.
    void parallel_for(int n, int threads, const std::function<void(int)> &body);
} // namespace densemimo
