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

#include <optional>
#include <random>
#include <vector>

#include "densemimo/common.hpp"
#include "densemimo/geometry.hpp"
#include "densemimo/propagation.hpp"

namespace densemimo
{
    /// Pilot reuse: each cell picks one of ζ disjoint blocks of K orthonormal
    /// pilots uniformly at random, and UE i uses pilot i of its block. Two
    /// cells share pilots (a = 1) iff they picked the same block.
    struct PilotAllocation
    {
        int zeta = 1;
        int k_users = 1;
        int tau_p = 1;
        std::vector<int> group; // per BS

        bool shares(int l1, int l2) const { return group[l1] == group[l2]; }
        /// a_{l1 l2} as 0/1.
        int indicator(int l1, int l2) const { return shares(l1, l2) ? 1 : 0; }
        /// Global pilot id in [0, τ_p).
        int pilot(int l, int i) const { return group[l] * k_users + i; }
    };

    PilotAllocation allocate_pilots(const NetworkRealization &net, int zeta, std::mt19937_64 &rng);

    /// Statistical channel inversion: p = ρ0/β, p^p = ρ_tr/β with β the UE's
    /// gain toward its own BS. Noise is normalized, so ρ = SNR.
    struct PowerProfile
    {
        double rho0 = 1.0;
        double rho_tr = 10.0;
        double sigma2 = 1.0;

        static PowerProfile from_db(double snr0_db, double snrtr_db);
        double data_power(double beta_own) const { return rho0 / beta_own; }
        double pilot_power(double beta_own) const { return rho_tr / beta_own; }
    };

    /// One UE as seen by the receiving BS.
    struct UserChannel
    {
        int cell = 0;
        int index = 0;
        double beta_own = 0.0; // toward its serving BS
        CorrelationMatrix r;   // toward the receiving BS
        double p = 0.0;        // data power
        double pp = 0.0;       // pilot power
    };

    /// All UEs of a realization seen from BS `bs`, in (cell, index) order.
    struct ReceiverView
    {
        int bs = 0;
        int m_antennas = 0;
        int k_users = 0;
        std::vector<UserChannel> users;

        int slot(int l, int i) const { return l * k_users + i; }
        int num_cells() const { return static_cast<int>(users.size()) / k_users; }
    };

    /// Builds R^j_{li} for every UE in the window. `spread` empty means uncorrelated fading.
    ReceiverView build_receiver_view(const NetworkRealization &net, int bs, int m_antennas, const MultiSlopeModel &model,
                                     std::optional<double> spread, const PowerProfile &powers, CorrelationCache &cache);

    /// Q for one pilot: Σ_{UEs on that pilot} p^p τ_p R + σ² I, with its Cholesky factor.
    struct PilotCovariance
    {
        int pilot = 0;
        std::vector<int> members; // slots using this pilot
        CMatrix q;
        CMatrix lower; // L with Q = L L^H
    };

    PilotCovariance pilot_covariance(const ReceiverView &view, const PilotAllocation &alloc, const PowerProfile &powers,
                                     int pilot);

    /// Independent channel draws h = R^{1/2} z for every UE of the view (columns in slot order).
    CMatrix draw_channels(const ReceiverView &view, std::mt19937_64 &rng);

    /// Hermitian PSD square root with eigenvalues clipped at zero.
    CMatrix psd_sqrt(const CMatrix &r);

    /// Standard circularly-symmetric complex Gaussian vector.
    CVector complex_normal(int n, std::mt19937_64 &rng);

    /// Despread pilot observation y = Σ_{UEs on `pilot`} √p^p τ_p h + n, n ~ CN(0, τ_p σ² I).
    CVector synthesize_observation(const ReceiverView &view, const PilotAllocation &alloc, const PowerProfile &powers,
                                   const CMatrix &channels, int pilot, std::mt19937_64 &rng, bool add_noise = true);

    /// MMSE estimates for a set of UEs sharing one observation.
    struct EstimationOutput
    {
        std::vector<int> slots;   // which UEs, in column order
        CMatrix h_hat;            // M x slots.size()
        std::vector<CMatrix> c;   // error covariances R - p^p τ_p R Q^{-1} R
        std::vector<CMatrix> phi; // Φ between slot 0 and every slot (all share one pilot)
        CMatrix q;
    };

    /// ĥ = √p^p R Q^{-1} y for every UE on `cov.pilot`, plus C and Φ.
    EstimationOutput mmse_estimate(const ReceiverView &view, const PilotAllocation &alloc, const PowerProfile &powers,
                                   const PilotCovariance &cov, const CVector &y);

    /// Per-UE square-root factors of the estimate statistics. For UE u on pilot t,
    /// G_u = √(p^p τ_p) R_u L_t^{-H}, so ĥ_u = G_u z_t with z_t ~ CN(0, I) shared by all UEs
    /// on pilot t, cov(ĥ_u) = G_u G_u^H and Φ_{uv} = G_u G_v^H.
    class EstimatorBank
    {
    public:
        EstimatorBank(const ReceiverView &view, const PilotAllocation &alloc, const PowerProfile &powers,
                      std::vector<int> slots);

        const std::vector<int> &slots() const { return slots_; }
        int size() const { return static_cast<int>(slots_.size()); }
        const CMatrix &factor(int n) const { return factors_[n]; }
        int pilot_of(int n) const { return pilot_of_[n]; }
        const std::vector<int> &pilots() const { return pilots_; }
        const PilotCovariance &covariance_for_pilot(int pilot) const;

        CMatrix estimate_covariance(int n) const { return factors_[n] * factors_[n].adjoint(); }
        CMatrix error_covariance(int n) const;
        CMatrix cross_covariance(int a, int b) const;
        /// tr(C) / tr(R) for bank entry n.
        double nmse(int n) const;

        /// One joint draw of every estimate in the bank (M x size()).
        CMatrix draw(std::mt19937_64 &rng) const;

    private:
        const ReceiverView &view_;
        std::vector<int> slots_;
        std::vector<int> pilot_of_;
        std::vector<int> pilots_;
        std::vector<int> pilot_slot_; // index into covs_ by position in pilots_
        std::vector<PilotCovariance> covs_;
        std::vector<CMatrix> factors_;
        std::vector<double> trace_r_;
    };

    /// Exact NMSE of the serving cell's UEs (average of tr(C)/tr(R) over the K UEs of `view.bs`).
    double realization_nmse(const ReceiverView &view, const PilotAllocation &alloc, const PowerProfile &powers);
} // namespace densemimo
