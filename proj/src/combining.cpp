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
#include "densemimo/combining.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace densemimo
{
    namespace
    {
        void check_inputs(const CombiningInputs &in)
        {
            if (!in.h_hat || !in.power || !in.z)
                throw DomainError("combining: estimates, powers and Z are required");
            if (in.k_serving < 1 || in.k_serving > in.h_hat->cols())
                throw DomainError("combining: serving UE count out of range");
            if (in.power->size() != in.h_hat->cols())
                throw DomainError("combining: one power per estimate is required");
        }

        SinrSample compose(double signal, double intra, double inter, double vzv, double vnorm2, double sigma2)
        {
            SinrSample s;
            s.signal = signal;
            s.intra = intra;
            s.inter = inter;
            s.noise = sigma2 * vnorm2;
            s.residual = std::max(0.0, vzv - s.noise);
            s.sinr = signal / (intra + inter + vzv);
            return s;
        }
    } // namespace

    CMatrix hermitian_solve(const CMatrix &a, const CMatrix &b)
    {
        Eigen::LLT<CMatrix> llt(a);
        if (llt.info() == Eigen::Success)
            return llt.solve(b);
        Eigen::LDLT<CMatrix> ldlt(a);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive())
        {
            CMatrix x = ldlt.solve(b);
            if (x.allFinite() && (a * x - b).norm() <= 1e-8 * b.norm())
                return x;
        }
        Eigen::ColPivHouseholderQR<CMatrix> qr(a);
        if (qr.rank() < a.rows())
            throw NumericalError("hermitian_solve: matrix is singular");
        return qr.solve(b);
    }

    CombinerSet build_combiner(Scheme scheme, const CombiningInputs &in)
    {
        check_inputs(in);
        const CMatrix &h = *in.h_hat;
        const int k = in.k_serving;
        const auto hj = h.leftCols(k);
        const Eigen::VectorXd pj = in.power->head(k);

        CombinerSet set;
        set.scheme = scheme;
        switch (scheme)
        {
        case Scheme::MR:
            set.vectors = hj;
            break;
        case Scheme::ZF:
        {
            if (k > h.rows())
                throw DomainError("ZF: needs K <= M");
            const CMatrix gram = hj.adjoint() * hj;
            Eigen::ColPivHouseholderQR<CMatrix> qr(hj);
            if (qr.rank() < k)
                throw NumericalError("ZF: channel estimates are linearly dependent");
            set.vectors = hj * hermitian_solve(gram, CMatrix::Identity(k, k));
            break;
        }
        case Scheme::SMMSE:
        {
            if (!in.z_single)
                throw DomainError("S-MMSE: needs the single-cell Z matrix");
            CMatrix a = *in.z_single;
            a.noalias() += hj * pj.asDiagonal() * hj.adjoint();
            set.vectors = hermitian_solve(a, hj * pj.asDiagonal());
            break;
        }
        case Scheme::MMMSE:
        {
            CMatrix a = *in.z;
            a.noalias() += h * in.power->asDiagonal() * h.adjoint();
            set.vectors = hermitian_solve(a, hj * pj.asDiagonal());
            break;
        }
        }
        if (!set.vectors.allFinite())
            throw NumericalError("build_combiner: non-finite combining vectors");
        return set;
    }

    SinrSample instantaneous_sinr(const CVector &v, int k, const CombiningInputs &in, double sigma2)
    {
        check_inputs(in);
        if (k < 0 || k >= in.k_serving)
            throw DomainError("instantaneous_sinr: UE index out of range");
        const double vnorm2 = v.squaredNorm();
        if (!(vnorm2 > 0.0))
            throw DomainError("instantaneous_sinr: combiner must be nonzero");
        const Eigen::RowVectorXcd g = v.adjoint() * (*in.h_hat);
        const Eigen::VectorXd &p = *in.power;
        double intra = 0.0, inter = 0.0;
        for (int u = 0; u < g.size(); ++u)
        {
            if (u == k)
                continue;
            const double term = p(u) * std::norm(g(u));
            (u < in.k_serving ? intra : inter) += term;
        }
        const double vzv = (v.adjoint() * (*in.z) * v)(0, 0).real();
        return compose(p(k) * std::norm(g(k)), intra, inter, vzv, vnorm2, sigma2);
    }

    std::vector<SinrSample> sinr_all(const CombinerSet &set, const CombiningInputs &in, double sigma2)
    {
        check_inputs(in);
        const CMatrix &v = set.vectors;
        const CMatrix g = v.adjoint() * (*in.h_hat);
        const CMatrix zv = (*in.z) * v;
        const Eigen::VectorXd &p = *in.power;
        std::vector<SinrSample> out;
        out.reserve(static_cast<std::size_t>(v.cols()));
        for (int k = 0; k < v.cols(); ++k)
        {
            double intra = 0.0, inter = 0.0;
            for (int u = 0; u < g.cols(); ++u)
            {
                if (u == k)
                    continue;
                const double term = p(u) * std::norm(g(k, u));
                (u < in.k_serving ? intra : inter) += term;
            }
            const double vzv = v.col(k).dot(zv.col(k)).real();
            out.push_back(compose(p(k) * std::norm(g(k, k)), intra, inter, vzv, v.col(k).squaredNorm(), sigma2));
        }
        return out;
    }
} // namespace densemimo
