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
#include "densemimo/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace densemimo
{
    const std::vector<std::string> kAxisOrder = {
        "delta_deg", "zeta",   "m_antennas", "k_users",         "snr0_db",        "snrtr_db",
        "tau_c",     "trials", "fading_redraws", "estimated_cells", "window_side_km", "lambda"};

    namespace
    {
        void reject_unknown(const YAML::Node &node, const std::set<std::string> &allowed, const std::string &where)
        {
            for (const auto &kv : node)
            {
                const std::string key = kv.first.as<std::string>();
                if (!allowed.count(key))
                    throw ConfigError("unknown key '" + key + "' in " + where);
            }
        }

        double as_double(const YAML::Node &n, const std::string &what)
        {
            try
            {
                const double v = n.as<double>();
                if (!std::isfinite(v))
                    throw ConfigError(what + ": value must be finite");
                return v;
            }
            catch (const YAML::Exception &)
            {
                throw ConfigError(what + ": expected a number");
            }
        }

        bool is_none(const YAML::Node &n)
        {
            if (n.IsNull())
                return true;
            if (n.IsScalar())
            {
                const std::string s = n.Scalar();
                return s == "none" || s == "None" || s == "uncorrelated";
            }
            return false;
        }

        std::vector<AxisValue> parse_axis(const YAML::Node &n, const std::string &name)
        {
            std::vector<AxisValue> out;
            auto scalar = [&](const YAML::Node &v) {
                if (is_none(v))
                    out.push_back({std::nullopt});
                else
                    out.push_back({as_double(v, "grid." + name)});
            };
            if (n.IsSequence())
            {
                for (const auto &v : n)
                    scalar(v);
            }
            else if (n.IsMap())
            {
                reject_unknown(n, {"start", "stop", "count", "scale"}, "grid." + name);
                if (!n["start"] || !n["stop"] || !n["count"])
                    throw ConfigError("grid." + name + ": a range needs start, stop and count");
                const double start = as_double(n["start"], "grid." + name + ".start");
                const double stop = as_double(n["stop"], "grid." + name + ".stop");
                const int count = static_cast<int>(as_double(n["count"], "grid." + name + ".count"));
                const std::string scale = n["scale"] ? n["scale"].as<std::string>() : "linear";
                if (count < 1)
                    throw ConfigError("grid." + name + ": count must be >= 1");
                if (scale != "linear" && scale != "log")
                    throw ConfigError("grid." + name + ": scale must be linear or log");
                if (scale == "log" && !(start > 0.0 && stop > 0.0))
                    throw ConfigError("grid." + name + ": log ranges need positive endpoints");
                for (int c = 0; c < count; ++c)
                {
                    const double t = count == 1 ? 0.0 : static_cast<double>(c) / (count - 1);
                    const double v = scale == "log" ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                                                    : start + t * (stop - start);
                    out.push_back({v});
                }
            }
            else
            {
                scalar(n);
            }
            if (out.empty())
                throw ConfigError("grid." + name + ": empty axis");
            return out;
        }

        int as_int(double v, const std::string &what)
        {
            if (std::floor(v) != v || std::abs(v) > 1e9)
                throw ConfigError(what + ": expected an integer");
            return static_cast<int>(v);
        }

        /// Cartesian product in kAxisOrder; `visit` receives one value per axis name.
        template <class Fn>
        void for_each_point(const RunConfig &config, Fn &&visit)
        {
            std::vector<std::string> names;
            std::vector<const std::vector<AxisValue> *> axes;
            for (const auto &name : kAxisOrder)
            {
                const auto it = config.axes.find(name);
                if (it != config.axes.end())
                {
                    names.push_back(name);
                    axes.push_back(&it->second);
                }
            }
            if (names.empty() || !config.axes.count("lambda"))
                throw ConfigError("grid: a lambda axis is required");
            std::vector<std::size_t> idx(axes.size(), 0);
            while (true)
            {
                std::map<std::string, std::optional<double>> point;
                for (std::size_t a = 0; a < axes.size(); ++a)
                    point[names[a]] = (*axes[a])[idx[a]].value;
                visit(point);
                std::size_t a = axes.size();
                while (a > 0)
                {
                    --a;
                    if (++idx[a] < axes[a]->size())
                        break;
                    idx[a] = 0;
                    if (a == 0)
                        return;
                }
            }
        }
    } // namespace

    RunConfig parse_config(const std::string &yaml_text)
    {
        YAML::Node root;
        try
        {
            root = YAML::Load(yaml_text);
        }
        catch (const YAML::Exception &e)
        {
            throw ConfigError(std::string("config is not valid YAML: ") + e.what());
        }
        if (!root.IsMap())
            throw ConfigError("config must be a mapping");
        reject_unknown(root,
                       {"format_version", "subcommand", "seed", "output", "threads", "model", "grid", "schemes", "mode",
                        "target_se", "m_range"},
                       "config");

        RunConfig cfg;
        try
        {
            if (root["format_version"])
            {
                cfg.format_version = root["format_version"].as<int>();
                if (cfg.format_version != kFormatVersion)
                    throw ConfigError("unsupported format_version " + std::to_string(cfg.format_version));
            }
            if (root["subcommand"])
                cfg.subcommand = root["subcommand"].as<std::string>();
            if (root["seed"])
                cfg.master_seed = root["seed"].as<std::uint64_t>();
            if (root["output"])
                cfg.output = root["output"].as<std::string>();
            if (root["threads"])
                cfg.threads = root["threads"].as<int>();
            if (root["mode"])
                cfg.mode = root["mode"].as<std::string>();
            if (root["target_se"])
                cfg.target_se = as_double(root["target_se"], "target_se");
            if (root["m_range"])
            {
                const auto r = root["m_range"].as<std::vector<int>>();
                if (r.size() != 2 || r[0] < 1 || r[1] < r[0])
                    throw ConfigError("m_range: expected [min, max] with 1 <= min <= max");
                cfg.m_min = r[0];
                cfg.m_max = r[1];
            }
            if (root["schemes"])
            {
                cfg.schemes.clear();
                for (const auto &s : root["schemes"])
                {
                    try
                    {
                        cfg.schemes.push_back(parse_scheme(s.as<std::string>()));
                    }
                    catch (const std::invalid_argument &e)
                    {
                        throw ConfigError(e.what());
                    }
                }
                if (cfg.schemes.empty())
                    throw ConfigError("schemes: empty list");
            }
            if (const YAML::Node m = root["model"])
            {
                reject_unknown(m, {"breakpoints_m", "exponents", "upsilon1"}, "model");
                std::vector<double> bp = m["breakpoints_m"] ? m["breakpoints_m"].as<std::vector<double>>()
                                                            : std::vector<double>{};
                std::vector<double> ex = m["exponents"] ? m["exponents"].as<std::vector<double>>()
                                                        : std::vector<double>{};
                const double ups = m["upsilon1"] ? as_double(m["upsilon1"], "model.upsilon1") : 1.0;
                try
                {
                    cfg.model = MultiSlopeModel(bp, ex, ups);
                }
                catch (const std::invalid_argument &e)
                {
                    throw ConfigError(e.what());
                }
            }
            if (const YAML::Node g = root["grid"])
            {
                if (!g.IsMap())
                    throw ConfigError("grid must be a mapping");
                const std::set<std::string> allowed(kAxisOrder.begin(), kAxisOrder.end());
                reject_unknown(g, allowed, "grid");
                for (const auto &kv : g)
                {
                    const std::string name = kv.first.as<std::string>();
                    cfg.axes[name] = parse_axis(kv.second, name);
                }
            }
        }
        catch (const YAML::Exception &e)
        {
            throw ConfigError(std::string("config: ") + e.what());
        }

        if (cfg.subcommand != "analytic" && cfg.subcommand != "simulate")
            throw ConfigError("subcommand must be 'analytic' or 'simulate'");
        if (cfg.threads < 1)
            throw ConfigError("threads must be >= 1");
        if (cfg.mode != "se" && cfg.mode != "uatf" && cfg.mode != "nmse" && cfg.mode != "required_m")
            throw ConfigError("mode must be se, uatf, nmse or required_m");
        if (!cfg.axes.count("lambda"))
            throw ConfigError("grid: a lambda axis is required");
        return cfg;
    }

    RunConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_config(ss.str());
    }

    std::vector<Scenario> expand_scenarios(const RunConfig &config)
    {
        std::vector<Scenario> out;
        for_each_point(config, [&](const std::map<std::string, std::optional<double>> &pt) {
            Scenario sc;
            sc.model = config.model;
            sc.master_seed = config.master_seed;
            sc.stream = out.size();
            auto get = [&](const char *name) -> std::optional<std::optional<double>> {
                const auto it = pt.find(name);
                if (it == pt.end())
                    return std::nullopt;
                return it->second;
            };
            auto required = [&](const char *name) {
                const auto v = get(name);
                if (v && !*v)
                    throw ConfigError(std::string("grid.") + name + ": 'none' is not allowed here");
                return v ? std::optional<double>(**v) : std::nullopt;
            };
            if (auto v = required("lambda"))
                sc.lambda = *v;
            if (auto v = required("m_antennas"))
                sc.m_antennas = as_int(*v, "grid.m_antennas");
            if (auto v = required("k_users"))
                sc.k_users = as_int(*v, "grid.k_users");
            if (auto v = required("zeta"))
                sc.zeta = as_int(*v, "grid.zeta");
            if (auto v = get("delta_deg"))
                sc.delta_deg = *v;
            if (auto v = required("snr0_db"))
                sc.snr0_db = *v;
            if (auto v = get("snrtr_db"))
                sc.snrtr_db = *v;
            if (auto v = required("tau_c"))
                sc.tau_c = *v;
            if (auto v = required("trials"))
                sc.trials = as_int(*v, "grid.trials");
            if (auto v = required("fading_redraws"))
                sc.fading_redraws = as_int(*v, "grid.fading_redraws");
            if (auto v = required("estimated_cells"))
                sc.estimated_cells = as_int(*v, "grid.estimated_cells");
            if (auto v = get("window_side_km"))
                sc.window_side_km = *v;
            try
            {
                sc.validate();
            }
            catch (const DomainError &e)
            {
                throw ConfigError(std::string("grid point ") + std::to_string(out.size()) + ": " + e.what());
            }
            out.push_back(std::move(sc));
        });
        if (out.empty())
            throw ConfigError("grid: no scenarios");
        return out;
    }

    std::vector<AnalyticPoint> expand_analytic(const RunConfig &config)
    {
        std::vector<AnalyticPoint> out;
        for_each_point(config, [&](const std::map<std::string, std::optional<double>> &pt) {
            AnalyticPoint a;
            auto set = [&](const char *name, double &field) {
                const auto it = pt.find(name);
                if (it == pt.end())
                    return;
                if (!it->second)
                    throw ConfigError(std::string("grid.") + name + ": 'none' is not allowed for analytic runs");
                field = *it->second;
            };
            for (const char *name : {"delta_deg", "trials", "fading_redraws", "estimated_cells", "window_side_km"})
            {
                if (pt.count(name))
                    throw ConfigError(std::string("grid.") + name + ": not an analytic parameter");
            }
            set("lambda", a.lambda);
            set("zeta", a.zeta);
            set("m_antennas", a.m_antennas);
            set("k_users", a.k_users);
            set("snr0_db", a.snr0_db);
            a.snrtr_db = a.snr0_db + 10.0;
            set("snrtr_db", a.snrtr_db);
            set("tau_c", a.tau_c);
            if (!(a.lambda > 0.0) || !(a.zeta > 0.0) || !(a.k_users >= 1.0) || !(a.m_antennas >= 1.0) ||
                !(a.tau_c > 0.0))
                throw ConfigError("analytic grid point " + std::to_string(out.size()) + ": invalid parameters");
            out.push_back(a);
        });
        if (out.empty())
            throw ConfigError("grid: no points");
        return out;
    }
} // namespace densemimo
