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

#include <vector>

#include "densemimo/common.hpp"

namespace densemimo
{
    /// Everything the receiver at BS j knows in one fading draw. Columns of
    /// `h_hat` are channel estimates at BS j; the first `k_serving` columns are
    /// the UEs of cell j. `z` is the M-MMSE error-plus-noise matrix and
    /// `z_single` the S-MMSE one (other cells through their full correlation).
    struct CombiningInputs
    {
        const CMatrix *h_hat = nullptr;
        const Eigen::VectorXd *power = nullptr;
        int k_serving = 0;
        const CMatrix *z = nullptr;
        const CMatrix *z_single = nullptr;
    };

    struct CombinerSet
    {
        Scheme scheme = Scheme::MR;
        CMatrix vectors; // M x K
    };

    /// Interference-plus-noise breakdown of one combiner column.
    struct SinrSample
    {
        double signal = 0.0;
        double intra = 0.0;      // other estimated UEs of the serving cell
        double inter = 0.0;      // estimated UEs of other cells
        double residual = 0.0;   // v^H (Z - σ² I) v: estimation errors and unestimated UEs
        double noise = 0.0;      // σ² ‖v‖²
        double sinr = 0.0;

        double interference() const { return intra + inter + residual; }
    };

    /// Solves A X = B for Hermitian positive definite A: Cholesky, then pivoted
    /// LDL^T, then column-pivoted QR. Throws NumericalError if all three fail.
    CMatrix hermitian_solve(const CMatrix &a, const CMatrix &b);

    CombinerSet build_combiner(Scheme scheme, const CombiningInputs &in);

    /// Instantaneous SINR of serving UE k with combiner v:
    /// p_k |v^H ĥ_k|² / (Σ_{u≠k} p_u |v^H ĥ_u|² + v^H Z v).
    SinrSample instantaneous_sinr(const CVector &v, int k, const CombiningInputs &in, double sigma2 = 1.0);

    /// instantaneous_sinr for every column of a combiner set, sharing the products.
    std::vector<SinrSample> sinr_all(const CombinerSet &set, const CombiningInputs &in, double sigma2 = 1.0);
} // namespace densemimo
