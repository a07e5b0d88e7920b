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

// Complex linear-algebra primitives shared by the codec, the clustering
// and the link evaluation. Everything here is a thin layer over Eigen.

#ifndef CSIFB_MATRIX_HPP
#define CSIFB_MATRIX_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

#include "csifb/errors.hpp"

namespace csifb
{

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Thin SVD: m = u * diag(s) * v^H, s sorted descending.
struct Svd
{
    CMatrix u;
    RVector s;
    CMatrix v;
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived> &m)
{
    return m.allFinite();
}

/// Thin SVD of a complex matrix. Throws InvalidInput on non-finite entries.
Svd svd(const CMatrix &m);

/// Square root of the sum of squared magnitudes.
template <typename Derived>
double frobenius_norm(const Eigen::MatrixBase<Derived> &m)
{
    return std::sqrt(m.cwiseAbs2().sum());
}

/// Modified Gram-Schmidt on the columns of m. Column i of the result lies
/// in the span of input columns 0..i. Throws DegenerateInput when an
/// intermediate column norm drops below `tol`.
template <typename Scalar>
Matrix<Scalar> gram_schmidt(const Matrix<Scalar> &m, double tol = 1e-12)
{
    if (m.rows() < 1 || m.cols() < 1)
        throw InvalidInput("gram_schmidt: empty matrix");
    if (!m.allFinite())
        throw InvalidInput("gram_schmidt: non-finite entries");
    Matrix<Scalar> q = m;
    for (Eigen::Index j = 0; j < q.cols(); ++j)
    {
        // two passes keep the Gram deviation at machine precision
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < j; ++i)
            {
                const Scalar proj = q.col(i).dot(q.col(j));
                q.col(j) -= proj * q.col(i);
            }
        const double n = q.col(j).norm();
        if (!(n > tol))
            throw DegenerateInput("gram_schmidt: column " + std::to_string(j) +
                                  " is linearly dependent on previous columns");
        q.col(j) /= n;
    }
    return q;
}

/// Largest |entry| of m^H m - I.
template <typename Derived>
double gram_deviation(const Eigen::MatrixBase<Derived> &m)
{
    using Scalar = typename Derived::Scalar;
    const auto n = m.cols();
    const Matrix<Scalar> g = m.adjoint() * m - Matrix<Scalar>::Identity(n, n);
    return g.cwiseAbs().maxCoeff();
}

/// Generalized cosine similarity. Single column: |v^H v_hat|; multiple
/// columns: mean over columns of |v_i^H v_hat_i|.
double gcs(const CMatrix &v, const CMatrix &v_hat);

/// Multiply every column by the unit phasor that makes its last-row entry
/// real and nonnegative.
CMatrix normalize_last_row_phase(const CMatrix &v);

/// Hermitian eigendecomposition, eigenvalues sorted descending.
struct HermitianEigen
{
    RVector values;
    CMatrix vectors;
};
HermitianEigen hermitian_eigen(const CMatrix &k);

} // namespace csifb

#endif
