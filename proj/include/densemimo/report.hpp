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

#include <iosfwd>
#include <string>
#include <vector>

#include "densemimo/analytic.hpp"
#include "densemimo/config.hpp"
#include "densemimo/montecarlo.hpp"

namespace densemimo
{
    /// Library version and git-describe string baked in at build time.
    std::string version_string();

    /// Closed-form quantities for one analytic grid point.
    struct AnalyticRow
    {
        AnalyticPoint point;
        double mu1 = 0.0, mu2 = 0.0, a = 0.0, nmse_bound = 0.0;
        double sinr_mr = 0.0, sinr_zf = 0.0, se_mr = 0.0, se_zf = 0.0;
        double rate_inf = 0.0, zeta_opt = 0.0;
        double m_threshold_mr = 0.0, m_threshold_zf = 0.0;
    };

    AnalyticRow analytic_row(const MultiSlopeModel &model, const AnalyticPoint &p);

    /// Metadata lines ('#'-prefixed) echoing every result-affecting setting.
    void write_metadata(std::ostream &out, const RunConfig &config, const std::vector<std::string> &extra = {});

    void write_analytic_csv(std::ostream &out, const std::vector<AnalyticRow> &rows);

    /// Simulation rows. `with_wall_time` adds a wall_time column (output is then
    /// no longer byte-reproducible).
    void write_records_header(std::ostream &out, bool with_wall_time = false);
    void write_record(std::ostream &out, const ResultRecord &r, bool with_wall_time = false);

    /// Shortest round-trip decimal form, stable across runs.
    std::string format_number(double v);
} // namespace densemimo
