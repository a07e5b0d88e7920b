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

// Lloyd k-means with k-means++ seeding over the columns of a dense matrix.
// The distance and the centroid rule are policies so the same engine serves
// angle-index vectors, serialized steering matrices and covariance matrices.
//
// Distance policy:
//   double operator()(const A &a, const B &b) const;           // one pair
//   void to_all(const M &points, const V &x, RVector &out) const; // x vs every column
// Centroid rule:
//   Vector<Scalar> operator()(const Matrix<Scalar> &points,
//                             std::span<const Eigen::Index> members,
//                             const Vector<Scalar> &previous) const;
// A rule must never increase the within-cluster distortion relative to
// `previous`; the engine relies on that for Lloyd monotonicity.

#ifndef CSIFB_KMEANS_HPP
#define CSIFB_KMEANS_HPP

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "csifb/matrix.hpp"

namespace csifb
{

template <typename Scalar>
struct KMeansResult
{
    Matrix<Scalar> centroids;                // d x k
    std::vector<Eigen::Index> assignments;   // per point
    std::vector<double> distortion_history;  // mean distance after each assignment pass
    int iterations = 0;                      // centroid updates performed
    bool converged = false;
};

template <typename Scalar>
struct KMeansOptions
{
    int k = 1;
    int max_iter = 50;
    std::uint64_t seed = 0;
    std::optional<Matrix<Scalar>> initial; // skips k-means++ when set
};

/// Index of the nearest column of `centroids` to x, lowest index on ties.
/// Distances that can search all centroids with partial-sum pruning.
template <typename Distance, typename Scalar>
concept PrunedSearch = requires(const Distance &d, const Matrix<Scalar> &c, const Vector<Scalar> &x, double *b) {
    { d.nearest(c, x, b) } -> std::convertible_to<Eigen::Index>;
};

/// Distances that assign a whole point set in one call.
template <typename Distance, typename Scalar>
concept BatchAssign = requires(const Distance &d, const Matrix<Scalar> &c, const Matrix<Scalar> &p,
                               std::vector<Eigen::Index> &a, RVector &pd) {
    d.assign_all(c, p, a, pd);
};

template <typename Scalar, typename Distance, typename Derived>
Eigen::Index nearest_column(const Matrix<Scalar> &centroids, const Eigen::MatrixBase<Derived> &x,
                            const Distance &dist, RVector &scratch, double *best_out = nullptr)
{
    if constexpr (PrunedSearch<Distance, Scalar>)
    {
        const Vector<Scalar> xv = x;
        double best_d = 0.0;
        const Eigen::Index best = dist.nearest(centroids, xv, &best_d);
        if (best_out)
            *best_out = best_d;
        return best;
    }
    dist.to_all(centroids, x, scratch);
    Eigen::Index best = 0;
    double best_d = scratch[0];
    for (Eigen::Index j = 1; j < scratch.size(); ++j)
        if (scratch[j] < best_d)
        {
            best_d = scratch[j];
            best = j;
        }
    if (best_out)
        *best_out = best_d;
    return best;
}

/// k-means++: first centre uniform, then proportional to the distance to the
/// nearest chosen centre (the distance already plays the role of D^2 for
/// squared metrics).
template <typename Scalar, typename Distance>
Matrix<Scalar> kmeans_plus_plus(const Matrix<Scalar> &points, int k, const Distance &dist,
                                std::mt19937_64 &rng)
{
    const Eigen::Index n = points.cols();
    Matrix<Scalar> c(points.rows(), k);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    Eigen::Index first = pick(rng);
    c.col(0) = points.col(first);
    RVector best(n), tmp(n);
    dist.to_all(points, c.col(0), best);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int j = 1; j < k; ++j)
    {
        const double total = best.sum();
        Eigen::Index chosen = 0;
        if (total > 0.0)
        {
            const double target = unif(rng) * total;
            double acc = 0.0;
            chosen = n - 1;
            for (Eigen::Index i = 0; i < n; ++i)
            {
                acc += best[i];
                if (acc > target && best[i] > 0.0)
                {
                    chosen = i;
                    break;
                }
            }
        }
        else
        {
            chosen = pick(rng);
        }
        c.col(j) = points.col(chosen);
        dist.to_all(points, c.col(j), tmp);
        best = best.cwiseMin(tmp);
    }
    return c;
}

template <typename Scalar, typename Distance, typename CentroidRule>
KMeansResult<Scalar> kmeans(const Matrix<Scalar> &points, const KMeansOptions<Scalar> &opt,
                            const Distance &dist, const CentroidRule &rule)
{
    const Eigen::Index n = points.cols();
    const int k = opt.k;
    if (k < 1)
        throw InvalidInput("kmeans: k must be positive");
    if (opt.max_iter < 1)
        throw InvalidInput("kmeans: max_iter must be positive");
    if (n < k)
        throw InvalidInput("kmeans: " + std::to_string(n) + " points cannot form " + std::to_string(k) +
                           " clusters");

    std::mt19937_64 rng(opt.seed);
    KMeansResult<Scalar> res;
    if (opt.initial)
    {
        if (opt.initial->cols() != k || opt.initial->rows() != points.rows())
            throw InvalidInput("kmeans: initial centroids have the wrong shape");
        res.centroids = *opt.initial;
    }
    else
    {
        res.centroids = kmeans_plus_plus<Scalar>(points, k, dist, rng);
    }

    std::vector<Eigen::Index> assign(n, 0), prev;
    RVector point_dist(n);
    RVector scratch(k);
    std::vector<std::vector<Eigen::Index>> members(k);

    for (int it = 0;; ++it)
    {
        if constexpr (BatchAssign<Distance, Scalar>)
            dist.assign_all(res.centroids, points, assign, point_dist);
        else
            for (Eigen::Index i = 0; i < n; ++i)
                assign[i] =
                    nearest_column<Scalar>(res.centroids, points.col(i), dist, scratch, &point_dist[i]);
        res.distortion_history.push_back(point_dist.mean());

        if (assign == prev)
        {
            res.converged = true;
            break;
        }
        if (it == opt.max_iter)
            break;

        for (auto &m : members)
            m.clear();
        for (Eigen::Index i = 0; i < n; ++i)
            members[assign[i]].push_back(i);

        // empty clusters take the points farthest from their centroids
        for (int j = 0; j < k; ++j)
        {
            if (!members[j].empty())
                continue;
            Eigen::Index far = -1;
            double far_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i)
                if (members[assign[i]].size() > 1 && point_dist[i] > far_d)
                {
                    far_d = point_dist[i];
                    far = i;
                }
            if (far < 0)
                break;
            auto &old = members[assign[far]];
            old.erase(std::find(old.begin(), old.end(), far));
            assign[far] = j;
            point_dist[far] = 0.0;
            members[j].push_back(far);
            res.centroids.col(j) = points.col(far);
        }

        for (int j = 0; j < k; ++j)
        {
            const Vector<Scalar> prev_c = res.centroids.col(j);
            res.centroids.col(j) = rule(points, std::span<const Eigen::Index>(members[j]), prev_c);
        }
        ++res.iterations;
        prev = assign;
    }
    res.assignments = std::move(assign);
    return res;
}

// ---- distance policies ------------------------------------------------------

/// Squared Euclidean distance, real or complex.
struct SedDistance
{
    template <typename A, typename B>
    double operator()(const A &a, const B &b) const
    {
        return (a - b).squaredNorm();
    }
    template <typename M, typename V>
    void to_all(const M &points, const V &x, RVector &out) const
    {
        out = (points.colwise() - x).colwise().squaredNorm().transpose();
    }
    template <typename Scalar>
    Eigen::Index nearest(const Matrix<Scalar> &c, const Vector<Scalar> &x, double *best_out) const
    {
        const Eigen::Index d = c.rows();
        const Scalar *xp = x.data();
        Eigen::Index best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < c.cols(); ++j)
        {
            const Scalar *cp = c.data() + j * d;
            double acc = 0.0;
            for (Eigen::Index r = 0; r < d && acc < best_d; ++r)
                acc += std::norm(cp[r] - xp[r]);
            if (acc < best_d)
            {
                best_d = acc;
                best = j;
            }
        }
        *best_out = best_d;
        return best;
    }
    // |c|^2 - 2 Re(c^H x) + |x|^2 through one GEMM per chunk
    template <typename Scalar>
    void assign_all(const Matrix<Scalar> &c, const Matrix<Scalar> &points, std::vector<Eigen::Index> &assign,
                    RVector &dist) const
    {
        const RVector cn = c.colwise().squaredNorm().transpose();
        const Matrix<Scalar> ch = c.adjoint();
        constexpr Eigen::Index chunk = 512;
        Matrix<Scalar> prod;
        for (Eigen::Index s = 0; s < points.cols(); s += chunk)
        {
            const Eigen::Index m = std::min(chunk, points.cols() - s);
            const auto blk = points.middleCols(s, m);
            prod.noalias() = ch * blk;
            for (Eigen::Index i = 0; i < m; ++i)
            {
                Eigen::Index best = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (Eigen::Index j = 0; j < prod.rows(); ++j)
                {
                    const double d = cn[j] - 2.0 * std::real(prod(j, i));
                    if (d < best_d)
                    {
                        best_d = d;
                        best = j;
                    }
                }
                assign[s + i] = best;
                dist[s + i] = std::max(0.0, best_d + blk.col(i).squaredNorm());
            }
        }
    }
};

/// Cosine distance 1 - |b^H a| / (|a| |b|).
struct CosineDistance
{
    template <typename A, typename B>
    double operator()(const A &a, const B &b) const
    {
        const double na = a.norm(), nb = b.norm();
        if (!(na > 0.0) || !(nb > 0.0))
            throw DegenerateInput("cosine distance of a zero vector");
        return std::max(0.0, 1.0 - std::abs(b.dot(a)) / (na * nb));
    }
    template <typename M, typename V>
    void to_all(const M &points, const V &x, RVector &out) const
    {
        const double nx = x.norm();
        if (!(nx > 0.0))
            throw DegenerateInput("cosine distance of a zero vector");
        const RVector norms = points.colwise().norm().transpose();
        const RVector inner = (points.adjoint() * x).cwiseAbs2().cwiseSqrt();
        out = (1.0 - (inner.array() / (norms.array() * nx))).max(0.0).matrix();
    }
    template <typename Scalar>
    void assign_all(const Matrix<Scalar> &c, const Matrix<Scalar> &points, std::vector<Eigen::Index> &assign,
                    RVector &dist) const
    {
        const RVector cn = c.colwise().norm().transpose();
        if (!(cn.minCoeff() > 0.0))
            throw DegenerateInput("cosine distance of a zero vector");
        const Matrix<Scalar> ch = (c * cn.cwiseInverse().asDiagonal()).adjoint();
        constexpr Eigen::Index chunk = 512;
        RMatrix sim;
        for (Eigen::Index s = 0; s < points.cols(); s += chunk)
        {
            const Eigen::Index m = std::min(chunk, points.cols() - s);
            const auto blk = points.middleCols(s, m);
            const RVector pn = blk.colwise().norm().transpose();
            if (!(pn.minCoeff() > 0.0))
                throw DegenerateInput("cosine distance of a zero vector");
            sim = (ch * blk).cwiseAbs2();
            for (Eigen::Index i = 0; i < m; ++i)
            {
                Eigen::Index best = 0;
                double best_s = sim(0, i);
                for (Eigen::Index j = 1; j < sim.rows(); ++j)
                    if (sim(j, i) > best_s)
                    {
                        best_s = sim(j, i);
                        best = j;
                    }
                assign[s + i] = best;
                dist[s + i] = std::max(0.0, 1.0 - std::sqrt(best_s) / pn[i]);
            }
        }
    }
};

/// Squared distance where the positions flagged in `circular` live on a
/// circle of circumference `period`: their difference d is folded to
/// min(d, period - d) before squaring.
struct EffectiveDistance
{
    RVector circular; // 1 for circular positions, 0 otherwise
    double period = 64.0;

    template <typename A, typename B>
    double operator()(const A &a, const B &b) const
    {
        const RVector d = (a - b).cwiseAbs();
        const RVector folded = d.cwiseMin((period - d.array()).matrix());
        return (circular.array() * folded.array().square() +
                (1.0 - circular.array()) * d.array().square())
            .sum();
    }
    template <typename M, typename V>
    void to_all(const M &points, const V &x, RVector &out) const
    {
        RMatrix d = (points.colwise() - x).cwiseAbs();
        const RMatrix folded = d.cwiseMin((period - d.array()).matrix());
        for (Eigen::Index r = 0; r < d.rows(); ++r)
            if (circular[r] != 0.0)
                d.row(r) = folded.row(r);
        out = d.colwise().squaredNorm().transpose();
    }
    Eigen::Index nearest(const RMatrix &c, const RVector &x, double *best_out) const
    {
        const Eigen::Index d = c.rows();
        Eigen::Index best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < c.cols(); ++j)
        {
            const double *cp = c.data() + j * d;
            double acc = 0.0;
            for (Eigen::Index r = 0; r < d && acc < best_d; ++r)
            {
                double e = std::abs(cp[r] - x[r]);
                if (circular[r] != 0.0)
                    e = std::min(e, period - e);
                acc += e * e;
            }
            if (acc < best_d)
            {
                best_d = acc;
                best = j;
            }
        }
        *best_out = best_d;
        return best;
    }
    // vectorized over centroids: one pass per coordinate
    void assign_all(const RMatrix &c, const RMatrix &points, std::vector<Eigen::Index> &assign,
                    RVector &dist) const
    {
        const RMatrix ct = c.transpose();
        Eigen::ArrayXd acc(ct.rows()), e(ct.rows());
        for (Eigen::Index i = 0; i < points.cols(); ++i)
        {
            acc.setZero();
            for (Eigen::Index r = 0; r < ct.cols(); ++r)
            {
                e = (ct.col(r).array() - points(r, i)).abs();
                if (circular[r] != 0.0)
                    e = e.min(period - e);
                acc += e.square();
            }
            Eigen::Index best = 0;
            for (Eigen::Index j = 1; j < acc.size(); ++j)
                if (acc[j] < acc[best])
                    best = j;
            assign[i] = best;
            dist[i] = acc[best];
        }
    }
};

// ---- centroid rules ---------------------------------------------------------

/// Arithmetic mean (optimal for squared Euclidean distance).
struct MeanRule
{
    template <typename Scalar>
    Vector<Scalar> operator()(const Matrix<Scalar> &points, std::span<const Eigen::Index> members,
                              const Vector<Scalar> &previous) const
    {
        if (members.empty())
            return previous;
        Vector<Scalar> acc = Vector<Scalar>::Zero(points.rows());
        for (Eigen::Index i : members)
            acc += points.col(i);
        return acc / static_cast<double>(members.size());
    }
};

/// Mean rescaled to a fixed norm (unit Frobenius norm for covariance points).
struct NormalizedMeanRule
{
    double norm = 1.0;

    template <typename Scalar>
    Vector<Scalar> operator()(const Matrix<Scalar> &points, std::span<const Eigen::Index> members,
                              const Vector<Scalar> &previous) const
    {
        const Vector<Scalar> m = MeanRule{}(points, members, previous);
        const double n = m.norm();
        if (!(n > 0.0))
            return previous;
        return m * (norm / n);
    }
};

/// Spherical mean for cosine distance: each member is rotated by the global
/// phase that aligns it with the previous centroid, then averaged and scaled
/// to `norm`.
struct AlignedSphericalMeanRule
{
    double norm = 1.0;

    Vector<cplx> operator()(const Matrix<cplx> &points, std::span<const Eigen::Index> members,
                            const Vector<cplx> &previous) const
    {
        if (members.empty())
            return previous;
        Vector<cplx> acc = Vector<cplx>::Zero(points.rows());
        for (Eigen::Index i : members)
        {
            const cplx inner = previous.dot(points.col(i)); // previous^H x
            const double mag = std::abs(inner);
            const cplx align = mag > 0.0 ? std::conj(inner) / mag : cplx(1.0, 0.0);
            acc += align * points.col(i);
        }
        const double n = acc.norm();
        if (!(n > 0.0))
            return previous;
        return acc * (norm / n);
    }
};

/// Intrinsic mean on a circle of circumference `period`: the point that
/// minimizes the sum of squared folded distances.
double circular_frechet_mean(std::span<const double> values, double period, double previous);

/// Circular Frechet mean on flagged positions, arithmetic mean elsewhere.
struct CircularMeanRule
{
    RVector circular;
    double period = 64.0;

    Vector<double> operator()(const Matrix<double> &points, std::span<const Eigen::Index> members,
                              const Vector<double> &previous) const;
};

} // namespace csifb

#endif
