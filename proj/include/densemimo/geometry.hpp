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
#include <iosfwd>
#include <vector>

#include "densemimo/common.hpp"

namespace densemimo
{
    /// Planar point in meters.
    struct Point
    {
        double x = 0.0;
        double y = 0.0;
    };

    /// Distance and angle of arrival from one BS toward one UE.
    struct Link
    {
        double distance_m = 0.0; // torus metric, clamped at kMinDistanceM
        double aoa = 0.0;        // radians in (-pi, pi], broadside (east) at 0
    };

    /// One H-PPP deployment on a square torus. Positions are stored in meters;
    /// the public sampling entry point takes km and BS/km².
    struct NetworkRealization
    {
        double lambda_per_km2 = 0.0;
        double window_side_m = 0.0;
        int k_users = 0;
        int typical_bs = 0;
        std::vector<Point> bs_positions;
        std::vector<std::vector<Point>> ue_positions; // [serving BS][UE index]
        std::vector<int> serving_index;               // flat UE id (l*K + i) -> l

        int num_bs() const { return static_cast<int>(bs_positions.size()); }
        const Point &ue(int l, int i) const { return ue_positions[l][i]; }
        /// Link from BS j to UE i of cell l.
        Link link(int l, int i, int j) const;
    };

    /// All pairwise links, indexed [(l*K + i)*L + j].
    struct PairwiseGeometry
    {
        int num_bs = 0;
        int k_users = 0;
        std::vector<double> distance_m;
        std::vector<double> aoa;

        std::size_t index(int l, int i, int j) const
        {
            return (static_cast<std::size_t>(l) * k_users + i) * num_bs + j;
        }
        double distance(int l, int i, int j) const { return distance_m[index(l, i, j)]; }
        double angle(int l, int i, int j) const { return aoa[index(l, i, j)]; }
    };

    /// max(1 km, sqrt(200/λ) km).
    double default_window_side_km(double lambda_per_km2);

    /// Signed shortest displacement from `from` to `to` on a torus of side `side`.
    Point torus_delta(const Point &from, const Point &to, double side);
    Link torus_link(const Point &bs, const Point &ue, double side);

    /// Draws BSs as a PPP on the torus (count conditioned on >= 2) and drops
    /// exactly K UEs uniformly in every Voronoi cell by rejection.
    NetworkRealization sample_network(double lambda_per_km2, int k_users, double window_side_km, std::uint64_t rng_seed);

    /// Drops K UEs per cell for fixed BS sites (meters) on a torus of side `side_m`.
    /// No minimum-count rule; used for small hand-built networks.
    NetworkRealization realization_from_sites(std::vector<Point> bs_m, int k_users, double side_m, std::uint64_t rng_seed);

    PairwiseGeometry pairwise_geometry(const NetworkRealization &net);

    /// Nearest-BS lookup on the torus using a uniform bucket grid.
    class TorusNearest
    {
    public:
        TorusNearest(const std::vector<Point> &sites, double side);
        int nearest(const Point &q) const;

    private:
        const std::vector<Point> &sites_;
        double side_;
        int cells_;
        double cell_size_;
        std::vector<std::vector<int>> buckets_;
    };

    /// Layout dumps in km: "bs_id,x_km,y_km" and "ue_id,bs_id,x_km,y_km".
    void write_bs_layout_csv(const NetworkRealization &net, std::ostream &out);
    void write_ue_layout_csv(const NetworkRealization &net, std::ostream &out);
} // namespace densemimo
