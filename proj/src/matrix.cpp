// SPDX-License-Identifier: Apache-2.0
//
// csifb: index-based CSI feedback simulation toolkit
// Copyright (C) 2026 The csifb Authors
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

#include "csifb/matrix.hpp"

#include <Eigen/SVD>
#include <Eigen/Eigenvalues>

namespace csifb
{

Svd svd(const CMatrix &m)
{
    if (m.rows() < 1 || m.cols() < 1)
        throw InvalidInput("svd: empty matrix");
    if (!m.allFinite())
        throw InvalidInput("svd: non-finite entries");
    Eigen::JacobiSVD<CMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return Svd{solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

double gcs(const CMatrix &v, const CMatrix &v_hat)
{
    if (v.rows() != v_hat.rows() || v.cols() != v_hat.cols())
        throw InvalidInput("gcs: dimension mismatch");
    if (v.cols() < 1)
        throw InvalidInput("gcs: empty matrix");
    double acc = 0.0;
    for (Eigen::Index j = 0; j < v.cols(); ++j)
        acc += std::abs(v.col(j).dot(v_hat.col(j)));
    return acc / static_cast<double>(v.cols());
}

CMatrix normalize_last_row_phase(const CMatrix &v)
{
    CMatrix out = v;
    const Eigen::Index last = v.rows() - 1;
    for (Eigen::Index j = 0; j < v.cols(); ++j)
    {
        const cplx e = v(last, j);
        const double mag = std::abs(e);
        if (mag > 0.0)
            out.col(j) *= std::conj(e) / mag;
    }
    return out;
}

HermitianEigen hermitian_eigen(const CMatrix &k)
{
    if (k.rows() != k.cols() || k.rows() < 1)
        throw InvalidInput("hermitian_eigen: matrix must be square");
    if (!k.allFinite())
        throw InvalidInput("hermitian_eigen: non-finite entries");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(k);
    // Eigen returns ascending order
    const RVector vals = solver.eigenvalues().reverse();
    const CMatrix vecs = solver.eigenvectors().rowwise().reverse();
    return HermitianEigen{vals, vecs};
}

} // namespace csifb
