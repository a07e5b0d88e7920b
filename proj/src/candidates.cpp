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

#include "csifb/candidates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <variant>

namespace csifb
{

std::string to_string(Method m)
{
    switch (m)
    {
    case Method::Ifor: return "IFOR";
    case Method::IforPlus: return "IFOR_PLUS";
    case Method::Lqp: return "LQP";
    case Method::Scp: return "SCP";
    case Method::SvSed: return "SV_SED";
    case Method::SvCd: return "SV_CD";
    case Method::Ncm: return "NCM";
    }
    return "?";
}

Method method_from_string(const std::string &name)
{
    for (Method m : {Method::Ifor, Method::IforPlus, Method::Lqp, Method::Scp, Method::SvSed, Method::SvCd,
                     Method::Ncm})
        if (to_string(m) == name)
            return m;
    throw InvalidInput("unknown method '" + name + "'");
}

bool is_angle_method(Method m)
{
    return m == Method::Ifor || m == Method::IforPlus || m == Method::Lqp || m == Method::Scp;
}

bool is_power_of_two(long long x) { return x > 0 && (x & (x - 1)) == 0; }

CMatrix steering_matrix(const CMatrix &h, int n_c)
{
    const Svd d = svd(h);
    if (d.v.cols() < n_c)
        throw InvalidInput("steering_matrix: channel supports fewer than n_c streams");
    return normalize_last_row_phase(d.v.leftCols(n_c));
}

MimoConfig method_config(Method m, const MimoConfig &cfg)
{
    MimoConfig out = cfg;
    if (m == Method::Lqp)
        out.b_psi = 2;
    return out;
}

AngleIndexVector angle_point(const CMatrix &v, const MimoConfig &cfg)
{
    const QuantizedAngles q = quantize(givens_decompose(v, cfg), cfg.b_phi, cfg.b_psi);
    const std::vector<int> rep = to_report_vector(q, cfg);
    AngleIndexVector out{RVector(static_cast<Eigen::Index>(rep.size()))};
    for (std::size_t i = 0; i < rep.size(); ++i)
        out.indices[static_cast<Eigen::Index>(i)] = rep[i];
    return out;
}

SerializedV serialize_v(const CMatrix &v)
{
    const CMatrix n = normalize_last_row_phase(v);
    return SerializedV{CVector(Eigen::Map<const CVector>(n.data(), n.size()))};
}

CMatrix unserialize_v(const CVector &s, int n_r, int n_c)
{
    if (s.size() != static_cast<Eigen::Index>(n_r) * n_c)
        throw InvalidInput("unserialize_v: length mismatch");
    return Eigen::Map<const CMatrix>(s.data(), n_r, n_c);
}

NormCovMatrix norm_cov(const CMatrix &h)
{
    const CMatrix k = h.adjoint() * h;
    const double n = frobenius_norm(k);
    if (!(n > 0.0))
        throw DegenerateInput("norm_cov: zero channel");
    return NormCovMatrix{k / n};
}

FeedbackPoint make_point(Method m, const CMatrix &h, const CMatrix &v, const MimoConfig &cfg)
{
    switch (m)
    {
    case Method::Ifor:
    case Method::IforPlus:
    case Method::Lqp:
    case Method::Scp: return angle_point(v, method_config(m, cfg));
    case Method::SvSed:
    case Method::SvCd: return serialize_v(v);
    case Method::Ncm: return norm_cov(h);
    }
    throw InvalidInput("make_point: unknown method");
}

double dist_sed(const RVector &a, const RVector &b)
{
    if (a.size() != b.size())
        throw InvalidInput("dist_sed: length mismatch");
    return SedDistance{}(a, b);
}

double dist_sed(const CVector &a, const CVector &b)
{
    if (a.size() != b.size())
        throw InvalidInput("dist_sed: length mismatch");
    return SedDistance{}(a, b);
}

double dist_cd(const CVector &a, const CVector &b)
{
    if (a.size() != b.size())
        throw InvalidInput("dist_cd: length mismatch");
    return CosineDistance{}(a, b);
}

double dist_ncm(const CMatrix &a, const CMatrix &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidInput("dist_ncm: dimension mismatch");
    const double na = frobenius_norm(a), nb = frobenius_norm(b);
    if (!(na > 0.0) || !(nb > 0.0))
        throw DegenerateInput("dist_ncm: zero matrix");
    return (a / na - b / nb).cwiseAbs2().sum();
}

EffectiveDistance effective_distance(const MimoConfig &cfg)
{
    const auto order = report_order(cfg);
    EffectiveDistance d;
    d.circular = RVector::Zero(static_cast<Eigen::Index>(order.size()));
    for (std::size_t i = 0; i < order.size(); ++i)
        if (order[i].kind == AngleKind::Phi)
            d.circular[static_cast<Eigen::Index>(i)] = 1.0;
    d.period = static_cast<double>(1 << cfg.b_phi);
    return d;
}

double dist_effective(const RVector &a, const RVector &b, const MimoConfig &cfg)
{
    const auto n = static_cast<Eigen::Index>(angle_counts(cfg).total());
    if (a.size() != n || b.size() != n)
        throw InvalidInput("dist_effective: vectors do not match the angle layout");
    return effective_distance(cfg)(a, b);
}

namespace
{

CircularMeanRule circular_rule(const MimoConfig &cfg)
{
    const EffectiveDistance d = effective_distance(cfg);
    return CircularMeanRule{d.circular, d.period};
}

CVector flatten(const CMatrix &k) { return Eigen::Map<const CVector>(k.data(), k.size()); }

template <typename Scalar>
Matrix<Scalar> stack(const std::vector<Vector<Scalar>> &cols)
{
    Matrix<Scalar> m(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i)
        m.col(static_cast<Eigen::Index>(i)) = cols[i];
    return m;
}

template <typename Scalar, typename Rule>
Vector<Scalar> apply_rule(const std::vector<Vector<Scalar>> &cols, const Vector<Scalar> &prev, const Rule &rule)
{
    if (cols.empty())
        throw InvalidInput("centroid_update: empty cluster");
    const Matrix<Scalar> m = stack(cols);
    std::vector<Eigen::Index> idx(cols.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = static_cast<Eigen::Index>(i);
    return rule(m, std::span<const Eigen::Index>(idx), prev);
}

} // namespace

FeedbackPoint centroid_update(const std::vector<FeedbackPoint> &cluster, Method m, const MimoConfig &cfg,
                              const FeedbackPoint &previous)
{
    if (cluster.empty())
        throw InvalidInput("centroid_update: empty cluster");
    try
    {
        if (is_angle_method(m))
        {
            std::vector<RVector> cols;
            for (const auto &p : cluster)
                cols.push_back(std::get<AngleIndexVector>(p).indices);
            const RVector &prev = std::get<AngleIndexVector>(previous).indices;
            if (m == Method::IforPlus)
                return AngleIndexVector{apply_rule<double>(cols, prev, circular_rule(cfg))};
            return AngleIndexVector{apply_rule<double>(cols, prev, MeanRule{})};
        }
        if (m == Method::Ncm)
        {
            std::vector<CVector> cols;
            for (const auto &p : cluster)
                cols.push_back(flatten(std::get<NormCovMatrix>(p).k));
            const CMatrix &pk = std::get<NormCovMatrix>(previous).k;
            const CVector c = apply_rule<cplx>(cols, flatten(pk), NormalizedMeanRule{1.0});
            CMatrix k = Eigen::Map<const CMatrix>(c.data(), pk.rows(), pk.cols());
            k = 0.5 * (k + k.adjoint()).eval();
            return NormCovMatrix{k / frobenius_norm(k)};
        }
        std::vector<CVector> cols;
        for (const auto &p : cluster)
            cols.push_back(std::get<SerializedV>(p).values);
        const CVector &prev = std::get<SerializedV>(previous).values;
        if (m == Method::SvCd)
            return SerializedV{apply_rule<cplx>(cols, prev, AlignedSphericalMeanRule{std::sqrt(double(cfg.n_c))})};
        return SerializedV{apply_rule<cplx>(cols, prev, MeanRule{})};
    }
    catch (const std::bad_variant_access &)
    {
        throw InvalidInput("centroid_update: point representation does not match method " + to_string(m));
    }
}

FeedbackDataset build_dataset_from_steering(const std::vector<CMatrix> &group_v, const MimoConfig &cfg, Method m)
{
    cfg.validate();
    if (m == Method::Ncm)
        throw InvalidInput("build_dataset: NCM needs channel matrices, not steering matrices");
    FeedbackDataset ds;
    ds.method = m;
    ds.cfg = method_config(m, cfg);
    const auto n = static_cast<Eigen::Index>(group_v.size());
    if (is_angle_method(m))
    {
        ds.angles.resize(angle_counts(cfg).total(), n);
        for (Eigen::Index i = 0; i < n; ++i)
            ds.angles.col(i) = angle_point(group_v[i], ds.cfg).indices;
    }
    else
    {
        ds.complex.resize(static_cast<Eigen::Index>(cfg.n_r) * cfg.n_c, n);
        for (Eigen::Index i = 0; i < n; ++i)
            ds.complex.col(i) = serialize_v(group_v[i]).values;
    }
    return ds;
}

FeedbackDataset build_dataset(const std::vector<CMatrix> &group_h, const MimoConfig &cfg, Method m)
{
    cfg.validate();
    if (m != Method::Ncm)
    {
        std::vector<CMatrix> vs;
        vs.reserve(group_h.size());
        for (const auto &h : group_h)
            vs.push_back(steering_matrix(h, cfg.n_c));
        return build_dataset_from_steering(vs, cfg, m);
    }
    FeedbackDataset ds;
    ds.method = m;
    ds.cfg = cfg;
    ds.complex.resize(static_cast<Eigen::Index>(cfg.n_r) * cfg.n_r, static_cast<Eigen::Index>(group_h.size()));
    for (std::size_t i = 0; i < group_h.size(); ++i)
        ds.complex.col(static_cast<Eigen::Index>(i)) = flatten(norm_cov(group_h[i]).k);
    return ds;
}

FeedbackDataset build_dataset(const std::vector<ChannelRealization> &realizations, const MimoConfig &cfg, Method m)
{
    std::vector<CMatrix> hs;
    for (const auto &r : realizations)
        for (auto &h : group_channels(r))
            hs.push_back(std::move(h));
    return build_dataset(hs, cfg, m);
}

std::pair<std::vector<int>, std::vector<int>> scp_rows(const MimoConfig &cfg)
{
    std::pair<std::vector<int>, std::vector<int>> rows;
    const auto order = report_order(cfg);
    for (std::size_t i = 0; i < order.size(); ++i)
        (order[i].kind == AngleKind::Phi ? rows.first : rows.second).push_back(static_cast<int>(i));
    return rows;
}

namespace
{

RMatrix select_rows(const RMatrix &m, const std::vector<int> &rows)
{
    RMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t r = 0; r < rows.size(); ++r)
        out.row(static_cast<Eigen::Index>(r)) = m.row(rows[r]);
    return out;
}

RVector select_rows(const RVector &v, const std::vector<int> &rows)
{
    RVector out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        out[static_cast<Eigen::Index>(r)] = v[rows[r]];
    return out;
}

long round_index(double x) { return std::lround(x); }

} // namespace

RMatrix round_angle_centroids(const RMatrix &c, const MimoConfig &cfg)
{
    const auto order = report_order(cfg);
    if (c.rows() != static_cast<Eigen::Index>(order.size()))
        throw InvalidInput("round_angle_centroids: row count does not match angle layout");
    const long m_phi = 1L << cfg.b_phi;
    const long m_psi = 1L << cfg.b_psi;
    RMatrix out(c.rows(), c.cols());
    for (Eigen::Index j = 0; j < c.cols(); ++j)
        for (Eigen::Index r = 0; r < c.rows(); ++r)
        {
            long q = round_index(c(r, j));
            if (order[r].kind == AngleKind::Phi)
            {
                q %= m_phi;
                if (q < 0)
                    q += m_phi;
            }
            else
            {
                q = std::clamp(q, 0L, m_psi - 1);
            }
            out(r, j) = static_cast<double>(q);
        }
    return out;
}

namespace
{

CMatrix reconstruct_from_report(const RVector &rep, const MimoConfig &cfg)
{
    std::vector<int> ints(static_cast<std::size_t>(rep.size()));
    for (Eigen::Index i = 0; i < rep.size(); ++i)
        ints[static_cast<std::size_t>(i)] = static_cast<int>(rep[i]);
    return reconstruct_v(from_report_vector(ints, cfg, cfg.b_phi, cfg.b_psi), cfg);
}

RVector combine_scp(const RVector &phi, const RVector &psi, const MimoConfig &cfg)
{
    const auto [phi_rows, psi_rows] = scp_rows(cfg);
    RVector out(static_cast<Eigen::Index>(phi_rows.size() + psi_rows.size()));
    for (std::size_t i = 0; i < phi_rows.size(); ++i)
        out[phi_rows[i]] = phi[static_cast<Eigen::Index>(i)];
    for (std::size_t i = 0; i < psi_rows.size(); ++i)
        out[psi_rows[i]] = psi[static_cast<Eigen::Index>(i)];
    return out;
}

CMatrix finalize_complex(const CVector &c, Method m, const MimoConfig &cfg)
{
    if (m == Method::Ncm)
    {
        CMatrix k = Eigen::Map<const CMatrix>(c.data(), cfg.n_r, cfg.n_r);
        k = 0.5 * (k + k.adjoint()).eval();
        const HermitianEigen e = hermitian_eigen(k);
        return normalize_last_row_phase(gram_schmidt<cplx>(e.vectors.leftCols(cfg.n_c)));
    }
    return gram_schmidt<cplx>(unserialize_v(c, cfg.n_r, cfg.n_c));
}

} // namespace

FeedbackPoint CandidateSet::centroid(int j) const
{
    if (j < 0 || j >= k)
        throw InvalidInput("CandidateSet::centroid: index out of range");
    switch (method)
    {
    case Method::Scp:
        return AngleIndexVector{combine_scp(angle_centroids.col(j / scp.w2), psi_centroids.col(j % scp.w2), cfg)};
    case Method::Ifor:
    case Method::IforPlus:
    case Method::Lqp: return AngleIndexVector{angle_centroids.col(j)};
    case Method::SvSed:
    case Method::SvCd: return SerializedV{complex_centroids.col(j)};
    case Method::Ncm:
        return NormCovMatrix{Eigen::Map<const CMatrix>(complex_centroids.col(j).data(), cfg.n_r, cfg.n_r)};
    }
    throw InvalidInput("CandidateSet::centroid: unknown method");
}

int CandidateSet::bits() const
{
    if (method == Method::Scp)
        return std::countr_zero(static_cast<unsigned>(scp.w1)) + std::countr_zero(static_cast<unsigned>(scp.w2));
    return std::countr_zero(static_cast<unsigned>(k));
}

std::vector<CMatrix> finalize(const CandidateSet &set)
{
    std::vector<CMatrix> out;
    out.reserve(static_cast<std::size_t>(set.k));
    switch (set.method)
    {
    case Method::Ifor:
    case Method::IforPlus:
    case Method::Lqp:
    {
        const RMatrix r = round_angle_centroids(set.angle_centroids, set.cfg);
        for (Eigen::Index j = 0; j < r.cols(); ++j)
            out.push_back(reconstruct_from_report(r.col(j), set.cfg));
        break;
    }
    case Method::Scp:
        for (int j = 0; j < set.k; ++j)
        {
            const RVector rep = std::get<AngleIndexVector>(set.centroid(j)).indices;
            out.push_back(reconstruct_from_report(round_angle_centroids(rep, set.cfg).col(0), set.cfg));
        }
        break;
    case Method::SvSed:
    case Method::SvCd:
    case Method::Ncm:
        for (Eigen::Index j = 0; j < set.complex_centroids.cols(); ++j)
            out.push_back(finalize_complex(set.complex_centroids.col(j), set.method, set.cfg));
        break;
    }
    return out;
}

namespace
{

template <typename Scalar, typename Dist, typename Rule>
KMeansResult<Scalar> run(const Matrix<Scalar> &pts, int k, const TrainOptions &opt, std::uint64_t seed,
                         const Dist &dist, const Rule &rule)
{
    KMeansOptions<Scalar> ko;
    ko.k = k;
    ko.max_iter = opt.max_iter;
    ko.seed = seed;
    return kmeans<Scalar>(pts, ko, dist, rule);
}

// Serialized-V centroids must stay full rank to be orthonormalized. A
// rank-deficient centroid is replaced by the point farthest from its centroid
// and training continues from there.
template <typename Dist, typename Rule>
KMeansResult<cplx> run_sv(const CMatrix &pts, const TrainOptions &opt, const MimoConfig &cfg, const Dist &dist,
                          const Rule &rule)
{
    KMeansResult<cplx> res = run<cplx>(pts, opt.k, opt, opt.seed, dist, rule);
    for (int round = 0; round < 8; ++round)
    {
        std::vector<int> bad;
        for (Eigen::Index j = 0; j < res.centroids.cols(); ++j)
        {
            try
            {
                gram_schmidt<cplx>(unserialize_v(res.centroids.col(j), cfg.n_r, cfg.n_c), 1e-6);
            }
            catch (const DegenerateInput &)
            {
                bad.push_back(static_cast<int>(j));
            }
        }
        if (bad.empty())
            break;
        RVector d(pts.cols());
        for (Eigen::Index i = 0; i < pts.cols(); ++i)
            d[i] = dist(pts.col(i), res.centroids.col(res.assignments[i]));
        KMeansOptions<cplx> ko;
        ko.k = opt.k;
        ko.max_iter = opt.max_iter;
        ko.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(round) + 1);
        CMatrix init = res.centroids;
        for (int j : bad)
        {
            Eigen::Index far = 0;
            d.maxCoeff(&far);
            init.col(j) = pts.col(far);
            d[far] = -1.0;
        }
        ko.initial = init;
        const int done = res.iterations;
        res = kmeans<cplx>(pts, ko, dist, rule);
        res.iterations += done;
    }
    return res;
}

} // namespace

CandidateSet train(const FeedbackDataset &data, const TrainOptions &opt)
{
    const Method m = data.method;
    const MimoConfig &cfg = data.cfg;
    CandidateSet set;
    set.method = m;
    set.cfg = cfg;
    set.k = opt.k;
    set.scp = opt.scp;
    set.info.seed = opt.seed;
    set.info.n_points = data.size();

    if (m == Method::Scp)
    {
        if (opt.scp.w1 * opt.scp.w2 != opt.k)
            throw InvalidInput("SCP requires w1 * w2 == k");
        if (!is_power_of_two(opt.scp.w1) || !is_power_of_two(opt.scp.w2))
            throw InvalidInput("SCP requires power-of-two w1 and w2");
    }
    else if (!is_power_of_two(opt.k))
    {
        throw InvalidInput("candidate count must be a power of two, got " + std::to_string(opt.k));
    }
    if (data.size() < opt.k)
        throw InvalidInput("dataset has " + std::to_string(data.size()) + " points, fewer than k = " +
                           std::to_string(opt.k));

    switch (m)
    {
    case Method::Ifor:
    case Method::Lqp:
    {
        auto r = run<double>(data.angles, opt.k, opt, opt.seed, SedDistance{}, MeanRule{});
        set.angle_centroids = round_angle_centroids(r.centroids, cfg);
        set.info.iterations = r.iterations;
        set.info.distortion = r.distortion_history.back();
        break;
    }
    case Method::IforPlus:
    {
        auto r = run<double>(data.angles, opt.k, opt, opt.seed, effective_distance(cfg), circular_rule(cfg));
        set.angle_centroids = round_angle_centroids(r.centroids, cfg);
        set.info.iterations = r.iterations;
        set.info.distortion = r.distortion_history.back();
        break;
    }
    case Method::Scp:
    {
        const auto [phi_rows, psi_rows] = scp_rows(cfg);
        const RMatrix phi = select_rows(data.angles, phi_rows);
        const RMatrix psi = select_rows(data.angles, psi_rows);
        auto rp = run<double>(phi, opt.scp.w1, opt, opt.seed, SedDistance{}, MeanRule{});
        auto rs = run<double>(psi, opt.scp.w2, opt, derive_seed(opt.seed, 0x5c9), SedDistance{}, MeanRule{});
        // phi rows round circularly, psi rows clamp
        const long m_phi = 1L << cfg.b_phi, m_psi = 1L << cfg.b_psi;
        set.angle_centroids = rp.centroids.unaryExpr([&](double x) {
            long q = round_index(x) % m_phi;
            return static_cast<double>(q < 0 ? q + m_phi : q);
        });
        set.psi_centroids = rs.centroids.unaryExpr(
            [&](double x) { return static_cast<double>(std::clamp(round_index(x), 0L, m_psi - 1)); });
        set.info.iterations = rp.iterations + rs.iterations;
        set.info.distortion = rp.distortion_history.back() + rs.distortion_history.back();
        break;
    }
    case Method::SvSed:
    {
        auto r = run_sv(data.complex, opt, cfg, SedDistance{}, MeanRule{});
        set.complex_centroids = r.centroids;
        set.info.iterations = r.iterations;
        set.info.distortion = r.distortion_history.back();
        break;
    }
    case Method::SvCd:
    {
        auto r = run_sv(data.complex, opt, cfg, CosineDistance{}, AlignedSphericalMeanRule{std::sqrt(double(cfg.n_c))});
        set.complex_centroids = r.centroids;
        set.info.iterations = r.iterations;
        set.info.distortion = r.distortion_history.back();
        break;
    }
    case Method::Ncm:
    {
        auto r = run<cplx>(data.complex, opt.k, opt, opt.seed, SedDistance{}, NormalizedMeanRule{1.0});
        set.complex_centroids = r.centroids;
        set.info.iterations = r.iterations;
        set.info.distortion = r.distortion_history.back();
        break;
    }
    }
    set.finalized = finalize(set);
    return set;
}

int nearest_candidate(const FeedbackPoint &query, const CandidateSet &set)
{
    RVector scratch;
    const bool angle = std::holds_alternative<AngleIndexVector>(query);
    const bool sv = std::holds_alternative<SerializedV>(query);
    const bool ncm = std::holds_alternative<NormCovMatrix>(query);
    if ((is_angle_method(set.method) && !angle) || ((set.method == Method::SvSed || set.method == Method::SvCd) && !sv) ||
        (set.method == Method::Ncm && !ncm))
        throw InvalidInput("nearest_candidate: query representation does not match method " + to_string(set.method));

    switch (set.method)
    {
    case Method::Ifor:
    case Method::Lqp:
    case Method::IforPlus:
    {
        const RVector &q = std::get<AngleIndexVector>(query).indices;
        if (q.size() != set.angle_centroids.rows())
            throw InvalidInput("nearest_candidate: query length mismatch");
        if (set.method == Method::IforPlus)
            return static_cast<int>(nearest_column<double>(set.angle_centroids, q, effective_distance(set.cfg), scratch));
        return static_cast<int>(nearest_column<double>(set.angle_centroids, q, SedDistance{}, scratch));
    }
    case Method::Scp:
    {
        const RVector &q = std::get<AngleIndexVector>(query).indices;
        const auto [phi_rows, psi_rows] = scp_rows(set.cfg);
        if (q.size() != static_cast<Eigen::Index>(phi_rows.size() + psi_rows.size()))
            throw InvalidInput("nearest_candidate: query length mismatch");
        const auto i1 = nearest_column<double>(set.angle_centroids, select_rows(q, phi_rows), SedDistance{}, scratch);
        const auto i2 = nearest_column<double>(set.psi_centroids, select_rows(q, psi_rows), SedDistance{}, scratch);
        return static_cast<int>(i1 * set.scp.w2 + i2);
    }
    case Method::SvSed:
    case Method::SvCd:
    {
        const CVector &q = std::get<SerializedV>(query).values;
        if (q.size() != set.complex_centroids.rows())
            throw InvalidInput("nearest_candidate: query length mismatch");
        if (set.method == Method::SvCd)
            return static_cast<int>(nearest_column<cplx>(set.complex_centroids, q, CosineDistance{}, scratch));
        return static_cast<int>(nearest_column<cplx>(set.complex_centroids, q, SedDistance{}, scratch));
    }
    case Method::Ncm:
    {
        const CMatrix &k = std::get<NormCovMatrix>(query).k;
        if (k.size() != set.complex_centroids.rows())
            throw InvalidInput("nearest_candidate: query dimension mismatch");
        const CVector q = flatten(k / frobenius_norm(k));
        return static_cast<int>(nearest_column<cplx>(set.complex_centroids, q, SedDistance{}, scratch));
    }
    }
    throw InvalidInput("nearest_candidate: unknown method");
}

} // namespace csifb
