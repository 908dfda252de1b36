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
#include "densemimo/analytic.hpp"

#include <cmath>
#include <limits>

#include "densemimo/specfun.hpp"

namespace densemimo::analytic
{
    namespace
    {
        // r^{2-s}, with r = ∞ mapped to 0 (valid for s > 2).
        double radial_power(double r, double s)
        {
            return std::isinf(r) ? 0.0 : std::pow(r, 2.0 - s);
        }

        void check_poles(const MultiSlopeModel &model, int kappa)
        {
            if (kappa != 1 && kappa != 2)
                throw DomainError("mu_kappa: kappa must be 1 or 2");
            for (std::size_t n = 1; n <= model.slopes(); ++n)
            {
                if (kappa * model.exponent(n) == 2.0)
                    throw DomainError("mu_kappa: kappa * alpha_n = 2 is a pole of the closed form");
            }
            if (!(kappa * model.exponent(model.slopes()) > 2.0))
                throw DomainError("mu_kappa: kappa * alpha_N must exceed 2 for a finite moment");
        }

        UatfInputs with_moments(UatfInputs in, const MultiSlopeModel &model, double lambda)
        {
            in.moments = moments(model, lambda);
            return in;
        }
    } // namespace

    double tail_coefficient(const MultiSlopeModel &model, std::size_t n, int kappa)
    {
        const std::size_t slopes = model.slopes();
        if (n < 1 || n > slopes)
            throw DomainError("tail_coefficient: slope index out of range");
        if (n == slopes)
            return 0.0;
        const double s_n = kappa * model.exponent(n);
        double c = -radial_power(model.breakpoint(n), s_n) / (s_n - 2.0);
        for (std::size_t i = n + 1; i <= slopes; ++i)
        {
            const double s_i = kappa * model.exponent(i);
            const double ratio = std::pow(model.upsilon(i) / model.upsilon(n), kappa);
            c += ratio * (radial_power(model.breakpoint(i - 1), s_i) - radial_power(model.breakpoint(i), s_i)) /
                 (s_i - 2.0);
        }
        return c;
    }

    double mu_kappa(const MultiSlopeModel &model, double lambda_per_km2, int kappa)
    {
        if (!(lambda_per_km2 > 0.0) || !std::isfinite(lambda_per_km2))
            throw DomainError("mu_kappa: density must be positive");
        check_poles(model, kappa);

        const double pl = kPi * lambda_per_km2 * 1e-6; // π λ in 1/m²
        double mu = 0.0;
        for (std::size_t n = 1; n <= model.slopes(); ++n)
        {
            const double s = kappa * model.exponent(n);
            const double r0 = model.breakpoint(n - 1);
            const double r1 = model.breakpoint(n);
            const double t0 = pl * r0 * r0;
            const double t1 = std::isinf(r1) ? std::numeric_limits<double>::infinity() : pl * r1 * r1;

            mu += 2.0 * specfun::incomplete_gamma_difference(2.0, t0, t1) / (s - 2.0);
            const double c = tail_coefficient(model, n, kappa);
            if (c != 0.0)
                mu += 2.0 * c * std::pow(pl, 1.0 - 0.5 * s) * specfun::incomplete_gamma_difference(1.0 + 0.5 * s, t0, t1);
        }
        return mu;
    }

    MomentPair moments(const MultiSlopeModel &model, double lambda_per_km2)
    {
        return {mu_kappa(model, lambda_per_km2, 1), mu_kappa(model, lambda_per_km2, 2), lambda_per_km2};
    }

    double a_factor(double mu1, double zeta, double tau_p, double snr_tr)
    {
        if (!(zeta > 0.0) || !(tau_p > 0.0) || !(snr_tr > 0.0))
            throw DomainError("a_factor: zeta, tau_p and snr_tr must be positive");
        return 1.0 + mu1 / zeta + 1.0 / (tau_p * snr_tr);
    }

    double nmse_upper_bound(const MultiSlopeModel &model, double lambda_per_km2, double zeta, double tau_p, double snr_tr)
    {
        return 1.0 - 1.0 / a_factor(mu_kappa(model, lambda_per_km2, 1), zeta, tau_p, snr_tr);
    }

    UatfTerms uatf_terms(Scheme scheme, const UatfInputs &in)
    {
        const double m = in.m_antennas;
        const double k = in.k_users;
        if (!(k >= 1.0) || !(m >= 1.0))
            throw DomainError("uatf: need M >= 1 and K >= 1");
        if (!(in.snr0 > 0.0))
            throw DomainError("uatf: SNR_0 must be positive");
        const double mu1 = in.moments.mu1;
        const double mu2 = in.moments.mu2;
        const double a = a_factor(mu1, in.zeta, in.tau_p(), in.snr_tr);

        UatfTerms t;
        t.pilot_contamination = mu2 / in.zeta;
        switch (scheme)
        {
        case Scheme::MR:
            t.noise = a / (m * in.snr0);
            t.intra = k / m * a;
            t.inter = k / m * (a * mu1 + mu2 / in.zeta);
            break;
        case Scheme::ZF:
            if (!(m > k))
                throw DomainError("uatf: ZF needs M > K");
            t.noise = a / ((m - k) * in.snr0);
            t.intra = k / (m - k) * (a - 1.0);
            t.inter = k / (m - k) * a * mu1;
            break;
        default:
            throw DomainError("uatf: closed forms exist only for MR and ZF");
        }
        return t;
    }

    double uatf_sinr(Scheme scheme, const UatfInputs &in)
    {
        return 1.0 / uatf_terms(scheme, in).total();
    }

    double uatf_se(Scheme scheme, const UatfInputs &in)
    {
        const double prelog = 1.0 - in.zeta * in.k_users / in.tau_c;
        if (prelog <= 0.0)
            return 0.0;
        return prelog * std::log2(1.0 + uatf_sinr(scheme, in));
    }

    double asymptotic_rate(double mu2, double zeta, double k_users, double tau_c)
    {
        if (!(mu2 > 0.0) || !(zeta > 0.0))
            throw DomainError("asymptotic_rate: mu2 and zeta must be positive");
        const double prelog = 1.0 - zeta * k_users / tau_c;
        if (prelog <= 0.0)
            return 0.0;
        return prelog * std::log2(1.0 + zeta / mu2);
    }

    double asymptotic_rate(const MultiSlopeModel &model, double lambda_per_km2, double zeta, double k_users, double tau_c)
    {
        return asymptotic_rate(mu_kappa(model, lambda_per_km2, 2), zeta, k_users, tau_c);
    }

    double optimal_zeta_asymptotic(double mu2, double k_users, double tau_c)
    {
        if (!(mu2 > 0.0) || !(k_users > 0.0) || !(tau_c > 0.0))
            throw DomainError("optimal_zeta: mu2, K and tau_c must be positive");
        const double nu = 1.0 + tau_c / (mu2 * k_users);
        return mu2 * (nu / specfun::lambert_w0(nu * std::exp(1.0)) - 1.0);
    }

    double optimal_zeta_asymptotic(const MultiSlopeModel &model, double lambda_per_km2, double k_users, double tau_c)
    {
        return optimal_zeta_asymptotic(mu_kappa(model, lambda_per_km2, 2), k_users, tau_c);
    }

    double dominance_threshold(Scheme scheme, const MomentPair &mom, double zeta, double k_users, double tau_p, double snr_tr)
    {
        if (!(mom.mu2 > 0.0))
            throw DomainError("dominance_threshold: mu2 must be positive");
        const double a = a_factor(mom.mu1, zeta, tau_p, snr_tr);
        const double base = k_users * (1.0 + zeta * a * (1.0 + mom.mu1) / mom.mu2);
        switch (scheme)
        {
        case Scheme::MR:
            return base;
        case Scheme::ZF:
            return base - k_users * zeta / mom.mu2;
        default:
            throw DomainError("dominance_threshold: defined only for MR and ZF");
        }
    }

    double dominance_threshold(Scheme scheme, const MultiSlopeModel &model, double lambda_per_km2, double zeta,
                               double k_users, double tau_p, double snr_tr)
    {
        return dominance_threshold(scheme, moments(model, lambda_per_km2), zeta, k_users, tau_p, snr_tr);
    }

    std::pair<double, double> sinr_reduction_rates(const MultiSlopeModel &model, double lambda_per_km2,
                                                   const UatfInputs &in, double rel_step, double *signed_mr,
                                                   double *signed_zf)
    {
        if (!(rel_step > 0.0 && rel_step < 1.0))
            throw DomainError("sinr_reduction_rates: relative step must lie in (0, 1)");
        const double h = rel_step * lambda_per_km2;
        const UatfInputs hi = with_moments(in, model, lambda_per_km2 + h);
        const UatfInputs lo = with_moments(in, model, lambda_per_km2 - h);
        const double d_mr = (uatf_sinr(Scheme::MR, hi) - uatf_sinr(Scheme::MR, lo)) / (2.0 * h);
        const double d_zf = (uatf_sinr(Scheme::ZF, hi) - uatf_sinr(Scheme::ZF, lo)) / (2.0 * h);
        if (signed_mr)
            *signed_mr = d_mr;
        if (signed_zf)
            *signed_zf = d_zf;
        return {std::abs(d_mr), std::abs(d_zf)};
    }
} // namespace densemimo::analytic
