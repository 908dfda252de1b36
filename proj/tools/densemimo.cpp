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
// Batch front end: analytic sweeps, Monte Carlo sweeps and the invariant self-test.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "densemimo/config.hpp"
#include "densemimo/montecarlo.hpp"
#include "densemimo/report.hpp"
#include "densemimo/selftest.hpp"

namespace dm = densemimo;

namespace
{
    enum Exit
    {
        kOk = 0,
        kValidation = 1,
        kNumerical = 2
    };

    struct Overrides
    {
        std::string config_path;
        std::optional<std::uint64_t> seed;
        std::string out;
        std::optional<int> threads;
        std::optional<int> trials;
        std::optional<int> fading;
        bool wall_time = false;
        bool progress = false;
    };

    dm::RunConfig load(const Overrides &o, const std::string &expected)
    {
        dm::RunConfig cfg = dm::load_config(o.config_path);
        if (cfg.subcommand != expected)
            throw dm::ConfigError("config declares subcommand '" + cfg.subcommand + "' but '" + expected +
                                  "' was invoked");
        if (o.seed)
            cfg.master_seed = *o.seed;
        if (!o.out.empty())
            cfg.output = o.out;
        if (o.threads)
        {
            if (*o.threads < 1)
                throw dm::ConfigError("--threads must be >= 1");
            cfg.threads = *o.threads;
        }
        if (o.trials)
            cfg.axes["trials"] = {dm::AxisValue{double(*o.trials)}};
        if (o.fading)
            cfg.axes["fading_redraws"] = {dm::AxisValue{double(*o.fading)}};
        return cfg;
    }

    // Opened only after the grid has been validated, so a bad config leaves no file behind.
    class Sink
    {
    public:
        explicit Sink(const std::string &path)
        {
            if (path.empty() || path == "-")
                return;
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_)
                throw dm::ConfigError("cannot open output file " + path);
        }
        std::ostream &stream() { return file_ ? *file_ : std::cout; }

    private:
        std::unique_ptr<std::ofstream> file_;
    };

    int cmd_analytic(const Overrides &o)
    {
        const dm::RunConfig cfg = load(o, "analytic");
        const auto points = dm::expand_analytic(cfg);
        std::vector<dm::AnalyticRow> rows;
        rows.reserve(points.size());
        for (const auto &p : points)
            rows.push_back(dm::analytic_row(cfg.model, p));
        Sink sink(cfg.output);
        dm::write_metadata(sink.stream(), cfg, {"points: " + std::to_string(rows.size())});
        dm::write_analytic_csv(sink.stream(), rows);
        return kOk;
    }

    int cmd_simulate(const Overrides &o)
    {
        const dm::RunConfig cfg = load(o, "simulate");
        const auto grid = dm::expand_scenarios(cfg);
        std::vector<std::string> extra = {"scenarios: " + std::to_string(grid.size()),
                                          "threads do not affect results; per-row columns echo trials, "
                                          "fading_redraws, tau_c and snrtr_db"};
        if (cfg.mode == "required_m")
            extra.push_back("required_m: target_se=" + dm::format_number(cfg.target_se) + " m_range=[" +
                            std::to_string(cfg.m_min) + "," + std::to_string(cfg.m_max) +
                            "]; M column holds the answer, m_max+1 when unreachable");
        if (o.trials)
            extra.push_back("trials overridden on the command line: " + std::to_string(*o.trials));

        Sink sink(cfg.output);
        std::ostream &out = sink.stream();
        dm::write_metadata(out, cfg, extra);
        dm::write_records_header(out, o.wall_time);

        dm::RunOptions opts;
        opts.threads = cfg.threads;
        int status = kOk;
        for (std::size_t n = 0; n < grid.size(); ++n)
        {
            const dm::Scenario &sc = grid[n];
            if (o.progress)
                opts.progress = [n, &grid](int done, int total) {
                    std::cerr << "\rscenario " << n + 1 << "/" << grid.size() << "  trial " << done << "/" << total
                              << std::flush;
                };
            std::vector<dm::ResultRecord> recs;
            try
            {
                if (cfg.mode == "se")
                    recs = dm::simulate(sc, cfg.schemes, opts);
                else if (cfg.mode == "nmse")
                    recs.push_back(dm::estimate_nmse(sc, opts));
                else if (cfg.mode == "uatf")
                    for (dm::Scheme s : cfg.schemes)
                        recs.push_back(dm::estimate_uatf_se(sc, s, opts));
                else
                    for (dm::Scheme s : cfg.schemes)
                    {
                        dm::ResultRecord r;
                        r.scenario = sc;
                        r.scheme = std::string(dm::to_string(s));
                        r.kind = "required_m";
                        r.scenario.m_antennas = dm::required_antennas(sc, s, cfg.target_se, cfg.m_min, cfg.m_max, opts);
                        r.se.mean = r.se.half_width = std::nan("");
                        r.ase = r.ase_half_width = std::nan("");
                        recs.push_back(std::move(r));
                    }
            }
            catch (const std::exception &e)
            {
                const bool numerical = dynamic_cast<const dm::NumericalError *>(&e) != nullptr;
                status = std::max(status, numerical ? int(kNumerical) : int(kValidation));
                std::cerr << "scenario " << n << " failed: " << e.what() << '\n';
                recs.clear();
                for (dm::Scheme s : cfg.schemes)
                {
                    dm::ResultRecord r;
                    r.scenario = sc;
                    r.scheme = cfg.mode == "nmse" ? "-" : std::string(dm::to_string(s));
                    r.kind = cfg.mode;
                    r.error = e.what();
                    recs.push_back(std::move(r));
                    if (cfg.mode == "nmse")
                        break;
                }
            }
            if (o.progress)
                std::cerr << '\n';
            for (const auto &r : recs)
                dm::write_record(out, r, o.wall_time);
            out.flush();
        }
        return status;
    }

    int cmd_selftest()
    {
        const auto results = dm::run_selftest(&std::cout);
        int failed = 0;
        for (const auto &r : results)
            failed += r.passed ? 0 : 1;
        std::cout << (failed ? std::to_string(failed) + " check(s) failed" : std::string("all checks passed")) << '\n';
        return failed ? kNumerical : kOk;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Uplink massive MIMO in dense PPP networks: closed forms and Monte Carlo"};
    app.set_version_flag("--version", dm::version_string());
    app.require_subcommand(1);

    Overrides o;
    auto add_common = [&](CLI::App *sub, bool sim) {
        sub->add_option("--config", o.config_path, "YAML run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "Master seed (overrides the config)");
        sub->add_option("--out", o.out, "Output CSV path ('-' for stdout)");
        if (sim)
        {
            sub->add_option("--threads", o.threads, "Worker threads");
            sub->add_option("--trials", o.trials, "Position/pilot draws per scenario (overrides the grid)");
            sub->add_option("--fading-redraws", o.fading, "Fading draws per trial (overrides the grid)");
            sub->add_flag("--wall-time", o.wall_time, "Append a wall_time column (breaks byte reproducibility)");
            sub->add_flag("--progress", o.progress, "Report trial progress on stderr");
        }
    };
    CLI::App *analytic = app.add_subcommand("analytic", "Closed-form moments, UatF SE, optimal pilot reuse, thresholds");
    add_common(analytic, false);
    CLI::App *simulate = app.add_subcommand("simulate", "Monte Carlo SE, NMSE, UatF SE or required antennas");
    add_common(simulate, true);
    CLI::App *selftest = app.add_subcommand("selftest", "Fast invariant suite");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    try
    {
        if (*analytic)
            return cmd_analytic(o);
        if (*simulate)
            return cmd_simulate(o);
        if (*selftest)
            return cmd_selftest();
    }
    catch (const dm::NumericalError &e)
    {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    }
    return kValidation;
}
