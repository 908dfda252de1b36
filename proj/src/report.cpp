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
#include "densemimo/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#ifndef DENSEMIMO_VERSION
#define DENSEMIMO_VERSION "0.0.0"
#endif
#ifndef DENSEMIMO_GIT_DESCRIBE
#define DENSEMIMO_GIT_DESCRIBE "unknown"
#endif

namespace densemimo
{
    std::string version_string()
    {
        return std::string(DENSEMIMO_VERSION) + " (" + DENSEMIMO_GIT_DESCRIBE + ")";
    }

    std::string format_number(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }

    AnalyticRow analytic_row(const MultiSlopeModel &model, const AnalyticPoint &p)
    {
        AnalyticRow row;
        row.point = p;
        const analytic::MomentPair mom = analytic::moments(model, p.lambda);
        row.mu1 = mom.mu1;
        row.mu2 = mom.mu2;
        const double snr_tr = db_to_linear(p.snrtr_db);
        const double tau_p = p.zeta * p.k_users;
        row.a = analytic::a_factor(mom.mu1, p.zeta, tau_p, snr_tr);
        row.nmse_bound = 1.0 - 1.0 / row.a;

        analytic::UatfInputs in;
        in.m_antennas = p.m_antennas;
        in.k_users = p.k_users;
        in.zeta = p.zeta;
        in.snr0 = db_to_linear(p.snr0_db);
        in.snr_tr = snr_tr;
        in.tau_c = p.tau_c;
        in.moments = mom;
        row.sinr_mr = analytic::uatf_sinr(Scheme::MR, in);
        row.se_mr = analytic::uatf_se(Scheme::MR, in);
        if (p.m_antennas > p.k_users)
        {
            row.sinr_zf = analytic::uatf_sinr(Scheme::ZF, in);
            row.se_zf = analytic::uatf_se(Scheme::ZF, in);
        }
        else
        {
            row.sinr_zf = row.se_zf = std::nan("");
        }
        row.rate_inf = analytic::asymptotic_rate(mom.mu2, p.zeta, p.k_users, p.tau_c);
        row.zeta_opt = analytic::optimal_zeta_asymptotic(mom.mu2, p.k_users, p.tau_c);
        row.m_threshold_mr = analytic::dominance_threshold(Scheme::MR, mom, p.zeta, p.k_users, tau_p, snr_tr);
        row.m_threshold_zf = analytic::dominance_threshold(Scheme::ZF, mom, p.zeta, p.k_users, tau_p, snr_tr);
        return row;
    }

    void write_metadata(std::ostream &out, const RunConfig &config, const std::vector<std::string> &extra)
    {
        out << "# densemimo " << version_string() << '\n';
        out << "# format_version: " << config.format_version << '\n';
        out << "# subcommand: " << config.subcommand << '\n';
        if (config.subcommand == "simulate")
            out << "# mode: " << config.mode << '\n';
        out << "# master_seed: " << config.master_seed << '\n';
        out << "# model: breakpoints_m=[";
        const auto &bp = config.model.interior_breakpoints();
        for (std::size_t i = 0; i < bp.size(); ++i)
            out << (i ? "," : "") << format_number(bp[i]);
        out << "] exponents=[";
        const auto &ex = config.model.exponents();
        for (std::size_t i = 0; i < ex.size(); ++i)
            out << (i ? "," : "") << format_number(ex[i]);
        out << "] upsilon=[";
        for (std::size_t n = 1; n <= config.model.slopes(); ++n)
            out << (n > 1 ? "," : "") << format_number(config.model.upsilon(n));
        out << "]\n";
        out << "# geometry: torus window, side max(1 km, sqrt(200/lambda)) unless window_side_km given; d_min 1 m\n";
        out << "# noise: sigma2=1; snrtr_db default snr0_db+10\n";
        for (const auto &line : extra)
            out << "# " << line << '\n';
    }

    void write_analytic_csv(std::ostream &out, const std::vector<AnalyticRow> &rows)
    {
        out << "lambda,zeta,M,K,snr0_db,snrtr_db,tau_c,mu1,mu2,A,nmse_bound,sinr_mr,sinr_zf,se_mr,se_zf,rate_inf,"
               "zeta_opt,m_threshold_mr,m_threshold_zf\n";
        for (const AnalyticRow &r : rows)
        {
            const AnalyticPoint &p = r.point;
            const double v[] = {p.lambda,   p.zeta,       p.m_antennas, p.k_users,   p.snr0_db,   p.snrtr_db,
                                p.tau_c,    r.mu1,        r.mu2,        r.a,         r.nmse_bound, r.sinr_mr,
                                r.sinr_zf,  r.se_mr,      r.se_zf,      r.rate_inf,  r.zeta_opt,  r.m_threshold_mr,
                                r.m_threshold_zf};
            for (std::size_t i = 0; i < std::size(v); ++i)
                out << (i ? "," : "") << format_number(v[i]);
            out << '\n';
        }
    }

    void write_records_header(std::ostream &out, bool with_wall_time)
    {
        out << "lambda,M,K,zeta,delta_deg,snr0_db,snrtr_db,tau_c,trials,fading_redraws,estimated_cells,window_km,"
               "scheme,kind,se,se_ci,ase,ase_ci,nmse,nmse_ci,noncoherent_db,coherent_db,failed_trials,error";
        if (with_wall_time)
            out << ",wall_time";
        out << '\n';
    }

    void write_record(std::ostream &out, const ResultRecord &r, bool with_wall_time)
    {
        const Scenario &s = r.scenario;
        auto num = [&](double v) { out << format_number(v) << ','; };
        num(s.lambda);
        out << s.m_antennas << ',' << s.k_users << ',' << s.zeta << ',';
        out << (s.delta_deg ? format_number(*s.delta_deg) : std::string("none")) << ',';
        num(s.snr0_db);
        num(s.snr_tr_db());
        num(s.tau_c);
        out << s.trials << ',' << s.fading_redraws << ',' << s.estimated_cells << ',';
        num(s.window_km());
        out << r.scheme << ',' << r.kind << ',';
        num(r.se.mean);
        num(r.se.half_width);
        num(r.ase);
        num(r.ase_half_width);
        num(r.nmse.mean);
        num(r.nmse.half_width);
        const bool has_interf = r.kind == "se" && r.error.empty();
        num(has_interf ? r.noncoherent_db() : std::nan(""));
        num(has_interf ? r.coherent_db() : std::nan(""));
        out << r.failed_trials << ',';
        std::string err = r.error;
        for (char &c : err)
            if (c == ',' || c == '\n')
                c = ';';
        out << err;
        if (with_wall_time)
            out << ',' << format_number(r.wall_time);
        out << '\n';
    }
} // namespace densemimo
