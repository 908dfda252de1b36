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

#include <utility>

#include "densemimo/common.hpp"
#include "densemimo/propagation.hpp"

/// Closed-form results for uncorrelated Rayleigh fading under a PPP deployment.
/// Densities are in BS/km², SNRs are linear, and ζ may be fractional.
namespace densemimo::analytic
{
    /// Interference moments μ1 and μ2 at one density.
    struct MomentPair
    {
        double mu1 = 0.0;
        double mu2 = 0.0;
        double lambda = 0.0;
    };

    /// μ_κ = E{Σ_{l≠j} (β^j_l / β^l_l)^κ} for the typical UE. Domain error when
    /// κ·α_n = 2 for some slope, or when κ·α_N <= 2 (the sum diverges).
    double mu_kappa(const MultiSlopeModel &model, double lambda_per_km2, int kappa);
    MomentPair moments(const MultiSlopeModel &model, double lambda_per_km2);

    /// The tail coefficient c_n(κ) multiplying the second Γ-difference of slope n (1-based).
    double tail_coefficient(const MultiSlopeModel &model, std::size_t n, int kappa);

    /// A(μ1) = 1 + μ1/ζ + 1/(τ_p SNR_tr).
    double a_factor(double mu1, double zeta, double tau_p, double snr_tr);

    /// 1 - 1/A(μ1).
    double nmse_upper_bound(const MultiSlopeModel &model, double lambda_per_km2, double zeta, double tau_p, double snr_tr);

    struct UatfInputs
    {
        double m_antennas = 100.0; // real so that the M -> ∞ limit can be probed
        double k_users = 10.0;
        double zeta = 4.0;
        double snr0 = 1.0;   // linear
        double snr_tr = 1.0; // linear
        double tau_c = 400.0;
        MomentPair moments;

        double tau_p() const { return zeta * k_users; }
    };

    /// Denominator of the closed-form UatF SINR split into its four parts.
    struct UatfTerms
    {
        double noise = 0.0;
        double intra = 0.0;
        double inter = 0.0;
        double pilot_contamination = 0.0;

        double total() const { return noise + intra + inter + pilot_contamination; }
    };

    UatfTerms uatf_terms(Scheme scheme, const UatfInputs &in);
    double uatf_sinr(Scheme scheme, const UatfInputs &in);
    /// (1 - ζK/τ_c) log2(1 + SINR); zero when ζK >= τ_c.
    double uatf_se(Scheme scheme, const UatfInputs &in);

    /// (1 - ζK/τ_c) log2(1 + ζ/μ2).
    double asymptotic_rate(double mu2, double zeta, double k_users, double tau_c);
    double asymptotic_rate(const MultiSlopeModel &model, double lambda_per_km2, double zeta, double k_users, double tau_c);

    /// ζ maximizing the asymptotic rate: μ2 (ν / W(ν e) - 1), ν = 1 + τ_c/(μ2 K).
    double optimal_zeta_asymptotic(double mu2, double k_users, double tau_c);
    double optimal_zeta_asymptotic(const MultiSlopeModel &model, double lambda_per_km2, double k_users, double tau_c);

    /// Smallest M at which pilot contamination equals intra- plus inter-cell interference.
    double dominance_threshold(Scheme scheme, const MomentPair &mom, double zeta, double k_users, double tau_p, double snr_tr);
    double dominance_threshold(Scheme scheme, const MultiSlopeModel &model, double lambda_per_km2, double zeta,
                               double k_users, double tau_p, double snr_tr);

    /// Central differences of the MR and ZF UatF SINRs over λ with relative step
    /// `rel_step`; returns (|dSINR_MR/dλ|, |dSINR_ZF/dλ|) and, through the
    /// optional pointers, the signed derivatives.
    std::pair<double, double> sinr_reduction_rates(const MultiSlopeModel &model, double lambda_per_km2,
                                                   const UatfInputs &in, double rel_step = 1e-3,
                                                   double *signed_mr = nullptr, double *signed_zf = nullptr);
} // namespace densemimo::analytic
