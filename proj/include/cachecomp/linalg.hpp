// SPDX-License-Identifier: Apache-2.0
//
// cachecomp: cache-induced opportunistic CoMP simulation and optimization
// Copyright (C) 2026 The cachecomp authors
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

#ifndef CACHECOMP_LINALG_HPP
#define CACHECOMP_LINALG_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>

namespace cachecomp
{

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

namespace linalg
{

inline CMat hermitian_part(const CMat &A)
{
    return 0.5 * (A + A.adjoint());
}

inline double trace_re(const CMat &A)
{
    return A.trace().real();
}

// ||A||_F^2 == Tr(A A^H)
inline double power(const CMat &A)
{
    return A.squaredNorm();
}

// log|A| for Hermitian positive definite A.
inline double logdet_hpd(const CMat &A)
{
    if (A.size() == 0)
        return 0.0;
    Eigen::LLT<CMat> llt(hermitian_part(A));
    if (llt.info() != Eigen::Success)
    {
        // Near-singular PD input; fall back to the eigenvalue route.
        Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(A), Eigen::EigenvaluesOnly);
        double s = 0.0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            s += std::log(es.eigenvalues()(i));
        return s;
    }
    const CMat &L = llt.matrixLLT();
    double s = 0.0;
    for (Eigen::Index i = 0; i < L.rows(); ++i)
        s += 2.0 * std::log(L(i, i).real());
    return s;
}

// Solves A X = B for Hermitian positive definite A without forming A^{-1}.
inline CMat solve_hpd(const CMat &A, const CMat &B)
{
    Eigen::LDLT<CMat> ldlt(hermitian_part(A));
    return ldlt.solve(B);
}

// General square solve, used for (I - U^H H V) which is Hermitian only at
// the MMSE receiver.
inline CMat solve_general(const CMat &A, const CMat &B)
{
    return A.partialPivLu().solve(B);
}

inline CMat identity(Eigen::Index n)
{
    return CMat::Identity(n, n);
}

// Dominant right singular vector of H (unit norm) and the matching singular value.
inline std::pair<Eigen::VectorXcd, double> dominant_right_singular(const CMat &H)
{
    Eigen::JacobiSVD<CMat> svd(H, Eigen::ComputeFullV);
    return {svd.matrixV().col(0), svd.singularValues()(0)};
}

// Orthonormal basis of span(A), rank decided relative to the largest singular value.
inline CMat orth(const CMat &A, double rel_tol = 1e-12)
{
    if (A.size() == 0)
        return CMat(A.rows(), 0);
    Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU);
    const auto &s = svd.singularValues();
    Eigen::Index r = 0;
    const double smax = s.size() > 0 ? s(0) : 0.0;
    while (r < s.size() && s(r) > rel_tol * smax && smax > 0.0)
        ++r;
    return svd.matrixU().leftCols(r);
}

inline bool all_finite(const CMat &A)
{
    return A.allFinite();
}

} // namespace linalg
} // namespace cachecomp

#endif
