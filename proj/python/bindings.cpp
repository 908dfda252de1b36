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
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "densemimo/analytic.hpp"
#include "densemimo/config.hpp"
#include "densemimo/montecarlo.hpp"
#include "densemimo/propagation.hpp"
#include "densemimo/report.hpp"
#include "densemimo/selftest.hpp"
#include "densemimo/specfun.hpp"

namespace py = pybind11;
namespace dm = densemimo;
namespace an = densemimo::analytic;

namespace
{
    py::dict estimate_dict(const dm::Estimate &e)
    {
        py::dict d;
        d["mean"] = e.mean;
        d["half_width"] = e.half_width;
        d["count"] = e.count;
        return d;
    }

    py::dict record_dict(const dm::ResultRecord &r)
    {
        py::dict d;
        d["lambda"] = r.scenario.lambda;
        d["M"] = r.scenario.m_antennas;
        d["K"] = r.scenario.k_users;
        d["zeta"] = r.scenario.zeta;
        d["delta_deg"] = r.scenario.delta_deg ? py::cast(*r.scenario.delta_deg) : py::none();
        d["scheme"] = r.scheme;
        d["kind"] = r.kind;
        d["se"] = estimate_dict(r.se);
        d["ase"] = r.ase;
        d["ase_half_width"] = r.ase_half_width;
        d["nmse"] = estimate_dict(r.nmse);
        d["noncoherent_db"] = r.kind == "se" ? r.noncoherent_db() : std::nan("");
        d["coherent_db"] = r.kind == "se" ? r.coherent_db() : std::nan("");
        d["failed_trials"] = r.failed_trials;
        d["wall_time"] = r.wall_time;
        return d;
    }

    an::UatfInputs uatf_inputs(const dm::MultiSlopeModel &model, double lambda, double m, double k, double zeta,
                               double snr0_db, double snrtr_db, double tau_c)
    {
        an::UatfInputs in;
        in.m_antennas = m;
        in.k_users = k;
        in.zeta = zeta;
        in.snr0 = dm::db_to_linear(snr0_db);
        in.snr_tr = dm::db_to_linear(snrtr_db);
        in.tau_c = tau_c;
        in.moments = an::moments(model, lambda);
        return in;
    }

    std::vector<dm::Scheme> schemes_from(const std::vector<std::string> &names)
    {
        std::vector<dm::Scheme> out;
        for (const auto &n : names)
            out.push_back(dm::parse_scheme(n));
        return out;
    }
} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Uplink massive MIMO in PPP networks: closed forms and Monte Carlo";

    py::register_exception<dm::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<dm::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<dm::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("version", &dm::version_string);

    m.def("upper_incomplete_gamma", &dm::specfun::upper_incomplete_gamma, py::arg("a"), py::arg("x"));
    m.def("lambert_w0", &dm::specfun::lambert_w0, py::arg("v"));

    py::class_<dm::MultiSlopeModel>(m, "MultiSlopeModel")
        .def(py::init<std::vector<double>, std::vector<double>, double>(), py::arg("breakpoints_m"),
             py::arg("exponents"), py::arg("upsilon1"))
        .def_static("dual_slope_default", &dm::MultiSlopeModel::dual_slope_default)
        .def_static("single_slope", &dm::MultiSlopeModel::single_slope, py::arg("exponent"), py::arg("upsilon1") = 1.0)
        .def("gain", &dm::MultiSlopeModel::gain, py::arg("d_m"))
        .def("upsilon", &dm::MultiSlopeModel::upsilon, py::arg("n"))
        .def("exponent", &dm::MultiSlopeModel::exponent, py::arg("n"))
        .def_property_readonly("slopes", &dm::MultiSlopeModel::slopes);

    m.def("path_loss", &dm::path_loss, py::arg("model"), py::arg("distance_m"));
    m.def(
        "one_ring",
        [](int m_antennas, double beta, double aoa, double spread) {
            return dm::one_ring(m_antennas, beta, aoa, spread).entries();
        },
        py::arg("m_antennas"), py::arg("beta"), py::arg("aoa"), py::arg("spread"),
        "Dense one-ring correlation matrix (angles in radians).");

    m.def("mu_kappa", &an::mu_kappa, py::arg("model"), py::arg("lambda_per_km2"), py::arg("kappa"));
    m.def("nmse_upper_bound", &an::nmse_upper_bound, py::arg("model"), py::arg("lambda_per_km2"), py::arg("zeta"),
          py::arg("tau_p"), py::arg("snr_tr"));
    m.def(
        "uatf_se",
        [](const std::string &scheme, const dm::MultiSlopeModel &model, double lambda, double m_antennas,
           double k_users, double zeta, double snr0_db, double snrtr_db, double tau_c) {
            return an::uatf_se(dm::parse_scheme(scheme),
                               uatf_inputs(model, lambda, m_antennas, k_users, zeta, snr0_db, snrtr_db, tau_c));
        },
        py::arg("scheme"), py::arg("model"), py::arg("lambda_per_km2"), py::arg("m_antennas"), py::arg("k_users"),
        py::arg("zeta"), py::arg("snr0_db") = 5.0, py::arg("snrtr_db") = 15.0, py::arg("tau_c") = 400.0);
    m.def(
        "uatf_sinr",
        [](const std::string &scheme, const dm::MultiSlopeModel &model, double lambda, double m_antennas,
           double k_users, double zeta, double snr0_db, double snrtr_db) {
            return an::uatf_sinr(dm::parse_scheme(scheme),
                                 uatf_inputs(model, lambda, m_antennas, k_users, zeta, snr0_db, snrtr_db, 400.0));
        },
        py::arg("scheme"), py::arg("model"), py::arg("lambda_per_km2"), py::arg("m_antennas"), py::arg("k_users"),
        py::arg("zeta"), py::arg("snr0_db") = 5.0, py::arg("snrtr_db") = 15.0);
    m.def("optimal_zeta", py::overload_cast<const dm::MultiSlopeModel &, double, double, double>(
                              &an::optimal_zeta_asymptotic),
          py::arg("model"), py::arg("lambda_per_km2"), py::arg("k_users"), py::arg("tau_c"));
    m.def(
        "dominance_threshold",
        [](const std::string &scheme, const dm::MultiSlopeModel &model, double lambda, double zeta, double k_users,
           double snrtr_db) {
            return an::dominance_threshold(dm::parse_scheme(scheme), model, lambda, zeta, k_users, zeta * k_users,
                                           dm::db_to_linear(snrtr_db));
        },
        py::arg("scheme"), py::arg("model"), py::arg("lambda_per_km2"), py::arg("zeta"), py::arg("k_users"),
        py::arg("snrtr_db") = 15.0);

    py::class_<dm::Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("lambda_", &dm::Scenario::lambda)
        .def_readwrite("m_antennas", &dm::Scenario::m_antennas)
        .def_readwrite("k_users", &dm::Scenario::k_users)
        .def_readwrite("zeta", &dm::Scenario::zeta)
        .def_readwrite("delta_deg", &dm::Scenario::delta_deg)
        .def_readwrite("snr0_db", &dm::Scenario::snr0_db)
        .def_readwrite("snrtr_db", &dm::Scenario::snrtr_db)
        .def_readwrite("tau_c", &dm::Scenario::tau_c)
        .def_readwrite("model", &dm::Scenario::model)
        .def_readwrite("trials", &dm::Scenario::trials)
        .def_readwrite("fading_redraws", &dm::Scenario::fading_redraws)
        .def_readwrite("master_seed", &dm::Scenario::master_seed)
        .def_readwrite("stream", &dm::Scenario::stream)
        .def_readwrite("estimated_cells", &dm::Scenario::estimated_cells)
        .def_readwrite("window_side_km", &dm::Scenario::window_side_km)
        .def("validate", &dm::Scenario::validate);

    m.def(
        "simulate",
        [](const dm::Scenario &sc, const std::vector<std::string> &schemes, int threads) {
            dm::RunOptions opts;
            opts.threads = threads;
            std::vector<dm::ResultRecord> recs;
            {
                py::gil_scoped_release release;
                recs = dm::simulate(sc, schemes_from(schemes), opts);
            }
            py::list out;
            for (const auto &r : recs)
                out.append(record_dict(r));
            return out;
        },
        py::arg("scenario"), py::arg("schemes") = std::vector<std::string>{"MR", "ZF", "S-MMSE", "M-MMSE"},
        py::arg("threads") = 1);
    m.def(
        "estimate_uatf_se",
        [](const dm::Scenario &sc, const std::string &scheme, int threads) {
            dm::RunOptions opts;
            opts.threads = threads;
            dm::ResultRecord r;
            {
                py::gil_scoped_release release;
                r = dm::estimate_uatf_se(sc, dm::parse_scheme(scheme), opts);
            }
            return record_dict(r);
        },
        py::arg("scenario"), py::arg("scheme"), py::arg("threads") = 1);
    m.def(
        "estimate_nmse",
        [](const dm::Scenario &sc, int threads) {
            dm::RunOptions opts;
            opts.threads = threads;
            dm::ResultRecord r;
            {
                py::gil_scoped_release release;
                r = dm::estimate_nmse(sc, opts);
            }
            return record_dict(r);
        },
        py::arg("scenario"), py::arg("threads") = 1);

    m.def("selftest", [] {
        py::list out;
        for (const auto &r : dm::run_selftest())
            out.append(py::make_tuple(r.name, r.passed, r.detail));
        return out;
    });
}
