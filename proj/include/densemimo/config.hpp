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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "densemimo/montecarlo.hpp"
#include "densemimo/propagation.hpp"

namespace densemimo
{
    /// Raised for malformed or inconsistent run configurations.
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    inline constexpr int kFormatVersion = 1;

    /// One grid axis value; `none` marks an absent optional (uncorrelated fading,
    /// default SNR_tr, default window).
    struct AxisValue
    {
        std::optional<double> value;
    };

    /// Parsed run configuration (YAML). Grid axes are expanded as a Cartesian
    /// product; the last axis in kAxisOrder varies fastest.
    struct RunConfig
    {
        std::string subcommand; // analytic | simulate
        int format_version = kFormatVersion;
        std::uint64_t master_seed = 1;
        std::string output;
        int threads = 1;
        MultiSlopeModel model = MultiSlopeModel::dual_slope_default();
        std::map<std::string, std::vector<AxisValue>> axes;
        std::vector<Scheme> schemes{kAllSchemes, kAllSchemes + 4};
        std::string mode = "se"; // simulate: se | uatf | nmse | required_m
        double target_se = 3.0;
        int m_min = 10;
        int m_max = 1000;
    };

    /// Axis names in expansion order (outermost first).
    extern const std::vector<std::string> kAxisOrder;

    RunConfig parse_config(const std::string &yaml_text);
    RunConfig load_config(const std::string &path);

    /// Simulation scenarios in grid order, streams numbered 0, 1, ...
    std::vector<Scenario> expand_scenarios(const RunConfig &config);

    /// Analytic grid point (ζ may be fractional).
    struct AnalyticPoint
    {
        double lambda = 1.0;
        double zeta = 1.0;
        double m_antennas = 100.0;
        double k_users = 10.0;
        double snr0_db = 5.0;
        double snrtr_db = 15.0;
        double tau_c = 400.0;
    };

    std::vector<AnalyticPoint> expand_analytic(const RunConfig &config);
} // namespace densemimo
