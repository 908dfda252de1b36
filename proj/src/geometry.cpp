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
#include "densemimo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "densemimo/propagation.hpp"

namespace densemimo
{
    namespace
    {
        double wrap(double d, double side)
        {
            d = std::fmod(d, side);
            if (d >= 0.5 * side)
                d -= side;
            else if (d < -0.5 * side)
                d += side;
            return d;
        }

        double torus_dist2(const Point &a, const Point &b, double side)
        {
            const Point d = torus_delta(a, b, side);
            return d.x * d.x + d.y * d.y;
        }
    } // namespace

    double default_window_side_km(double lambda_per_km2)
    {
        if (!(lambda_per_km2 > 0.0))
            throw DomainError("window side: density must be positive");
        return std::max(1.0, std::sqrt(200.0 / lambda_per_km2));
    }

    Point torus_delta(const Point &from, const Point &to, double side)
    {
        return {wrap(to.x - from.x, side), wrap(to.y - from.y, side)};
    }

    Link torus_link(const Point &bs, const Point &ue, double side)
    {
        const Point d = torus_delta(bs, ue, side);
        Link link;
        link.distance_m = std::max(kMinDistanceM, std::hypot(d.x, d.y));
        link.aoa = std::atan2(d.y, d.x);
        if (link.aoa == -kPi)
            link.aoa = kPi;
        return link;
    }

    Link NetworkRealization::link(int l, int i, int j) const
    {
        return torus_link(bs_positions[j], ue_positions[l][i], window_side_m);
    }

    TorusNearest::TorusNearest(const std::vector<Point> &sites, double side) : sites_(sites), side_(side)
    {
        if (sites.empty())
            throw DomainError("TorusNearest: no sites");
        cells_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(sites.size()))));
        cell_size_ = side_ / cells_;
        buckets_.resize(static_cast<std::size_t>(cells_) * cells_);
        for (int s = 0; s < static_cast<int>(sites.size()); ++s)
        {
            const int cx = std::clamp(static_cast<int>(sites[s].x / cell_size_), 0, cells_ - 1);
            const int cy = std::clamp(static_cast<int>(sites[s].y / cell_size_), 0, cells_ - 1);
            buckets_[static_cast<std::size_t>(cy) * cells_ + cx].push_back(s);
        }
    }

    int TorusNearest::nearest(const Point &q) const
    {
        const int qx = std::clamp(static_cast<int>(q.x / cell_size_), 0, cells_ - 1);
        const int qy = std::clamp(static_cast<int>(q.y / cell_size_), 0, cells_ - 1);
        int best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        auto scan = [&](int cx, int cy) {
            cx = ((cx % cells_) + cells_) % cells_;
            cy = ((cy % cells_) + cells_) % cells_;
            for (int s : buckets_[static_cast<std::size_t>(cy) * cells_ + cx])
            {
                const double d2 = torus_dist2(q, sites_[s], side_);
                if (d2 < best_d2 || (d2 == best_d2 && s < best))
                {
                    best_d2 = d2;
                    best = s;
                }
            }
        };
        for (int r = 0;; ++r)
        {
            if (r == 0)
                scan(qx, qy);
            else
            {
                for (int t = -r; t <= r; ++t)
                {
                    scan(qx + t, qy - r);
                    scan(qx + t, qy + r);
                }
                for (int t = -r + 1; t <= r - 1; ++t)
                {
                    scan(qx - r, qy + t);
                    scan(qx + r, qy + t);
                }
            }
            // Anything outside ring r is at least r cells away.
            const double reach = r * cell_size_;
            if ((best >= 0 && best_d2 <= reach * reach) || 2 * r + 1 >= cells_)
                break;
        }
        return best;
    }

    NetworkRealization sample_network(double lambda_per_km2, int k_users, double window_side_km, std::uint64_t rng_seed)
    {
        if (!(lambda_per_km2 > 0.0) || !std::isfinite(lambda_per_km2))
            throw DomainError("sample_network: density must be positive");
        if (k_users < 1)
            throw DomainError("sample_network: need at least one UE per cell");
        if (!(window_side_km > 0.0))
            throw DomainError("sample_network: window side must be positive");
        const double expected = lambda_per_km2 * window_side_km * window_side_km;
        if (expected < 50.0)
            throw DomainError("sample_network: window too small, expected BS count below 50");

        std::mt19937_64 rng(rng_seed);
        const double side = window_side_km * 1000.0;
        std::poisson_distribution<long long> count_dist(expected);
        std::uniform_real_distribution<double> coord(0.0, side);

        long long n_bs = count_dist(rng);
        for (int attempt = 0; n_bs < 2; ++attempt)
        {
            if (attempt >= 100)
                throw DomainError("sample_network: fewer than 2 BSs after 100 resamples");
            n_bs = count_dist(rng);
        }

        std::vector<Point> sites(static_cast<std::size_t>(n_bs));
        for (auto &p : sites)
        {
            p.x = coord(rng);
            p.y = coord(rng);
        }
        NetworkRealization net = realization_from_sites(std::move(sites), k_users, side, rng());
        net.lambda_per_km2 = lambda_per_km2;
        return net;
    }

    NetworkRealization realization_from_sites(std::vector<Point> bs_m, int k_users, double side_m, std::uint64_t rng_seed)
    {
        if (bs_m.empty() || k_users < 1 || !(side_m > 0.0))
            throw DomainError("realization_from_sites: need sites, K >= 1 and a positive side");
        std::mt19937_64 rng(rng_seed);
        std::uniform_real_distribution<double> coord(0.0, side_m);
        const std::size_t n_bs = bs_m.size();

        NetworkRealization net;
        net.window_side_m = side_m;
        net.k_users = k_users;
        net.bs_positions = std::move(bs_m);
        net.lambda_per_km2 = n_bs / (side_m * side_m * 1e-6);

        const TorusNearest locator(net.bs_positions, side_m);
        net.typical_bs = locator.nearest({0.5 * side_m, 0.5 * side_m});

        net.ue_positions.assign(n_bs, {});
        for (auto &cell : net.ue_positions)
            cell.reserve(static_cast<std::size_t>(k_users));
        std::size_t open_cells = n_bs;
        while (open_cells > 0)
        {
            const Point p{coord(rng), coord(rng)};
            auto &cell = net.ue_positions[static_cast<std::size_t>(locator.nearest(p))];
            if (static_cast<int>(cell.size()) < k_users)
            {
                cell.push_back(p);
                if (static_cast<int>(cell.size()) == k_users)
                    --open_cells;
            }
        }

        net.serving_index.resize(n_bs * k_users);
        for (std::size_t l = 0; l < n_bs; ++l)
            std::fill_n(net.serving_index.begin() + static_cast<std::ptrdiff_t>(l * k_users), k_users, static_cast<int>(l));
        return net;
    }

    PairwiseGeometry pairwise_geometry(const NetworkRealization &net)
    {
        PairwiseGeometry g;
        g.num_bs = net.num_bs();
        g.k_users = net.k_users;
        const std::size_t n = static_cast<std::size_t>(g.num_bs) * g.k_users * g.num_bs;
        g.distance_m.resize(n);
        g.aoa.resize(n);
        for (int l = 0; l < g.num_bs; ++l)
        {
            for (int i = 0; i < g.k_users; ++i)
            {
                for (int j = 0; j < g.num_bs; ++j)
                {
                    const Link link = net.link(l, i, j);
                    g.distance_m[g.index(l, i, j)] = link.distance_m;
                    g.aoa[g.index(l, i, j)] = link.aoa;
                }
            }
        }
        return g;
    }

    void write_bs_layout_csv(const NetworkRealization &net, std::ostream &out)
    {
        out << "bs_id,x_km,y_km\n";
        for (int l = 0; l < net.num_bs(); ++l)
            out << l << ',' << net.bs_positions[l].x / 1000.0 << ',' << net.bs_positions[l].y / 1000.0 << '\n';
    }

    void write_ue_layout_csv(const NetworkRealization &net, std::ostream &out)
    {
        out << "ue_id,bs_id,x_km,y_km\n";
        for (int l = 0; l < net.num_bs(); ++l)
        {
            for (int i = 0; i < net.k_users; ++i)
            {
                const Point &p = net.ue_positions[l][i];
                out << l * net.k_users + i << ',' << l << ',' << p.x / 1000.0 << ',' << p.y / 1000.0 << '\n';
            }
        }
    }
} // namespace densemimo
