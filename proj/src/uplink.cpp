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
#include "densemimo/uplink.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace densemimo
{
    namespace
    {
        CMatrix toeplitz_from_column(const CVector &col)
        {
            const int m = static_cast<int>(col.size());
            CMatrix r(m, m);
            for (int c = 0; c < m; ++c)
            {
                for (int row = c; row < m; ++row)
                {
                    r(row, c) = col(row - c);
                    r(c, row) = std::conj(col(row - c));
                }
            }
            for (int d = 0; d < m; ++d)
                r(d, d) = col(0).real();
            return r;
        }
    } // namespace

    PilotAllocation allocate_pilots(const NetworkRealization &net, int zeta, std::mt19937_64 &rng)
    {
        if (zeta < 1)
            throw DomainError("allocate_pilots: zeta must be a positive integer");
        PilotAllocation alloc;
        alloc.zeta = zeta;
        alloc.k_users = net.k_users;
        alloc.tau_p = zeta * net.k_users;
        alloc.group.resize(static_cast<std::size_t>(net.num_bs()));
        std::uniform_int_distribution<int> pick(0, zeta - 1);
        for (auto &g : alloc.group)
            g = pick(rng);
        return alloc;
    }

    PowerProfile PowerProfile::from_db(double snr0_db, double snrtr_db)
    {
        PowerProfile p;
        p.rho0 = db_to_linear(snr0_db);
        p.rho_tr = db_to_linear(snrtr_db);
        p.sigma2 = 1.0;
        return p;
    }

    ReceiverView build_receiver_view(const NetworkRealization &net, int bs, int m_antennas, const MultiSlopeModel &model,
                                     std::optional<double> spread, const PowerProfile &powers, CorrelationCache &cache)
    {
        ReceiverView view;
        view.bs = bs;
        view.m_antennas = m_antennas;
        view.k_users = net.k_users;
        view.users.reserve(static_cast<std::size_t>(net.num_bs()) * net.k_users);
        for (int l = 0; l < net.num_bs(); ++l)
        {
            for (int i = 0; i < net.k_users; ++i)
            {
                UserChannel u;
                u.cell = l;
                u.index = i;
                u.beta_own = path_loss(model, net.link(l, i, l).distance_m);
                const Link link = net.link(l, i, bs);
                u.r = cache.get(m_antennas, path_loss(model, link.distance_m), link.aoa, spread);
                u.p = powers.data_power(u.beta_own);
                u.pp = powers.pilot_power(u.beta_own);
                view.users.push_back(std::move(u));
            }
        }
        return view;
    }

    PilotCovariance pilot_covariance(const ReceiverView &view, const PilotAllocation &alloc, const PowerProfile &powers,
                                     int pilot)
    {
        const int m = view.m_antennas;
        const int k = view.k_users;
        PilotCovariance cov;
        cov.pilot = pilot;
        const int group = pilot / k;
        const int index = pilot % k;
        CVector col = CVector::Zero(m);
        for (int l = 0; l < view.num_cells(); ++l)
        {
            if (alloc.group[l] != group)
                continue;
            const int s = view.slot(l, index);
            cov.members.push_back(s);
            const UserChannel &u = view.users[s];
            const double w = u.pp * alloc.tau_p;
            if (u.r.isotropic())
                col(0) += w * u.r.beta;
            else
                col += (w * u.r.beta) * (*u.r.shape);
        }
        col(0) += powers.sigma2;
        // Every eigenvalue is at least σ², so tr(Q)/σ² bounds the condition number.
        if (col(0).real() * m / powers.sigma2 > 1e14)
            throw NumericalError("pilot_covariance: Q is too ill-conditioned");
        cov.q = toeplitz_from_column(col);
        Eigen::LLT<CMatrix> llt(cov.q);
        if (llt.info() != Eigen::Success)
            throw NumericalError("pilot_covariance: Cholesky factorization of Q failed");
        cov.lower = llt.matrixL();
        return cov;
    }

    CVector complex_normal(int n, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> g(0.0, std::sqrt(0.5));
        CVector z(n);
        for (int i = 0; i < n; ++i)
        {
            const double re = g(rng);
            const double im = g(rng);
            z(i) = Complex(re, im);
        }
        return z;
    }

    CMatrix psd_sqrt(const CMatrix &r)
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
        if (es.info() != Eigen::Success)
            throw NumericalError("psd_sqrt: eigendecomposition failed");
        const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    }

    CMatrix draw_channels(const ReceiverView &view, std::mt19937_64 &rng)
    {
        const int m = view.m_antennas;
        CMatrix h(m, static_cast<int>(view.users.size()));
        for (std::size_t s = 0; s < view.users.size(); ++s)
        {
            const CorrelationMatrix &r = view.users[s].r;
            const CVector z = complex_normal(m, rng);
            if (r.isotropic())
                h.col(static_cast<int>(s)) = std::sqrt(r.beta) * z;
            else
                h.col(static_cast<int>(s)) = psd_sqrt(r.entries()) * z;
        }
        return h;
    }

    CVector synthesize_observation(const ReceiverView &view, const PilotAllocation &alloc, const PowerProfile &powers,
                                   const CMatrix &channels, int pilot, std::mt19937_64 &rng, bool add_noise)
    {
        const int m = view.m_antennas;
        const int k = view.k_users;
        const int group = pilot / k;
        const int index = pilot % k;
        CVector y = CVector::Zero(m);
        for (int l = 0; l < view.num_cells(); ++l)
        {
            if (alloc.group[l] != group)
                continue;
            const int s = view.slot(l, index);
            y += std::sqrt(view.users[s].pp) * alloc.tau_p * channels.col(s);
        }
        if (add_noise)
            y += std::sqrt(alloc.tau_p * powers.sigma2) * complex_normal(m, rng);
        return y;
    }

    EstimationOutput mmse_estimate(const ReceiverView &view, const PilotAllocation &alloc, const PowerProfile &,
                                   const PilotCovariance &cov, const CVector &y)
    {
        EstimationOutput out;
        out.slots = cov.members;
        out.q = cov.q;
        const int m = view.m_antennas;
        const int n = static_cast<int>(cov.members.size());
        Eigen::LLT<CMatrix> llt(cov.q);
        const CVector w = llt.solve(y);
        out.h_hat.resize(m, n);
        std::vector<CMatrix> r_q_inv_r(static_cast<std::size_t>(n));
        std::vector<CMatrix> rq(static_cast<std::size_t>(n)); // Q^{-1} R_u
        for (int c = 0; c < n; ++c)
        {
            const UserChannel &u = view.users[cov.members[c]];
            out.h_hat.col(c) = std::sqrt(u.pp) * u.r.apply(w);
            rq[c] = llt.solve(u.r.entries());
        }
        const UserChannel &first = view.users[cov.members.front()];
        const CMatrix r0 = first.r.entries();
        for (int c = 0; c < n; ++c)
        {
            const UserChannel &u = view.users[cov.members[c]];
            const CMatrix r = u.r.entries();
            out.c.push_back(r - u.pp * alloc.tau_p * r * rq[c]);
            out.phi.push_back(std::sqrt(first.pp * u.pp) * alloc.tau_p * r0 * rq[c]);
        }
        return out;
    }

    EstimatorBank::EstimatorBank(const ReceiverView &view, const PilotAllocation &alloc, const PowerProfile &powers,
                                 std::vector<int> slots)
        : view_(view), slots_(std::move(slots))
    {
        const int k = view.k_users;
        pilot_of_.reserve(slots_.size());
        for (int s : slots_)
            pilot_of_.push_back(alloc.pilot(s / k, s % k));
        pilots_ = pilot_of_;
        std::sort(pilots_.begin(), pilots_.end());
        pilots_.erase(std::unique(pilots_.begin(), pilots_.end()), pilots_.end());
        covs_.reserve(pilots_.size());
        for (int t : pilots_)
            covs_.push_back(pilot_covariance(view, alloc, powers, t));

        factors_.reserve(slots_.size());
        trace_r_.reserve(slots_.size());
        for (std::size_t n = 0; n < slots_.size(); ++n)
        {
            const UserChannel &u = view.users[slots_[n]];
            const PilotCovariance &cov = covariance_for_pilot(pilot_of_[n]);
            const CMatrix r = u.r.entries();
            // (L^{-1} R)^H = R L^{-H} since R is Hermitian.
            CMatrix x = cov.lower.triangularView<Eigen::Lower>().solve(r);
            factors_.push_back(std::sqrt(u.pp * alloc.tau_p) * x.adjoint());
            trace_r_.push_back(u.r.beta * view.m_antennas);
        }
    }

    const PilotCovariance &EstimatorBank::covariance_for_pilot(int pilot) const
    {
        const auto it = std::lower_bound(pilots_.begin(), pilots_.end(), pilot);
        if (it == pilots_.end() || *it != pilot)
            throw DomainError("EstimatorBank: pilot not present in bank");
        return covs_[static_cast<std::size_t>(it - pilots_.begin())];
    }

    CMatrix EstimatorBank::error_covariance(int n) const
    {
        return view_.users[slots_[n]].r.entries() - estimate_covariance(n);
    }

    CMatrix EstimatorBank::cross_covariance(int a, int b) const
    {
        if (pilot_of_[a] != pilot_of_[b])
            return CMatrix::Zero(view_.m_antennas, view_.m_antennas);
        return factors_[a] * factors_[b].adjoint();
    }

    double EstimatorBank::nmse(int n) const
    {
        return 1.0 - factors_[n].squaredNorm() / trace_r_[n];
    }

    CMatrix EstimatorBank::draw(std::mt19937_64 &rng) const
    {
        const int m = view_.m_antennas;
        std::vector<CVector> z;
        z.reserve(pilots_.size());
        for (std::size_t t = 0; t < pilots_.size(); ++t)
            z.push_back(complex_normal(m, rng));
        CMatrix h(m, size());
        for (int n = 0; n < size(); ++n)
        {
            const auto t = std::lower_bound(pilots_.begin(), pilots_.end(), pilot_of_[n]) - pilots_.begin();
            h.col(n).noalias() = factors_[n] * z[static_cast<std::size_t>(t)];
        }
        return h;
    }

    double realization_nmse(const ReceiverView &view, const PilotAllocation &alloc, const PowerProfile &powers)
    {
        const int k = view.k_users;
        const int j = view.bs;
        double total = 0.0;
        for (int i = 0; i < k; ++i)
        {
            const int pilot = alloc.pilot(j, i);
            const UserChannel &u = view.users[view.slot(j, i)];
            if (u.r.isotropic())
            {
                // Q = q I, and tr(C)/tr(R) = 1 - p^p τ_p β / q.
                double q = powers.sigma2;
                for (int l = 0; l < view.num_cells(); ++l)
                {
                    if (alloc.shares(l, j))
                    {
                        const UserChannel &v = view.users[view.slot(l, i)];
                        q += v.pp * alloc.tau_p * v.r.beta;
                    }
                }
                total += 1.0 - u.pp * alloc.tau_p * u.r.beta / q;
                continue;
            }
            const PilotCovariance cov = pilot_covariance(view, alloc, powers, pilot);
            const CMatrix x = cov.lower.triangularView<Eigen::Lower>().solve(u.r.entries());
            total += 1.0 - u.pp * alloc.tau_p * x.squaredNorm() / (u.r.beta * view.m_antennas);
        }
        return total / k;
    }
} // namespace densemimo
