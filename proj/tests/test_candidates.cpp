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

#include <catch_amalgamated.hpp>

#include "csifb/candidates.hpp"
#include "test_util.hpp"

using namespace csifb;
using Catch::Matchers::WithinAbs;

namespace
{

MimoConfig cfg_of(int n_r, int n_c, int b_phi = 6)
{
    MimoConfig c;
    c.n_r = n_r;
    c.n_c = n_c;
    c.b_phi = b_phi;
    return c;
}

std::vector<CMatrix> model_d_groups(int realizations, std::uint64_t seed, const MimoConfig &cfg)
{
    std::vector<CMatrix> out;
    for (int r = 0; r < realizations; ++r)
        for (auto &h : group_channels(realize_channel(ChannelModel::D, cfg, derive_seed(seed, r))))
            out.push_back(std::move(h));
    return out;
}

RVector vec(std::initializer_list<double> x)
{
    RVector v(static_cast<Eigen::Index>(x.size()));
    Eigen::Index i = 0;
    for (double d : x)
        v[i++] = d;
    return v;
}

} // namespace

TEST_CASE("method names", "[candidates]")
{
    for (Method m : {Method::Ifor, Method::IforPlus, Method::Lqp, Method::Scp, Method::SvSed, Method::SvCd,
                     Method::Ncm})
        CHECK(method_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(method_from_string("KMEANS"), InvalidInput);
}

TEST_CASE("squared Euclidean distance", "[candidates]")
{
    CHECK(dist_sed(vec({1, 2}), vec({1, 2})) == 0.0);
    CHECK(dist_sed(vec({1, 2}), vec({3, 4})) == 8.0);
    CHECK_THROWS_AS(dist_sed(vec({1, 2}), vec({1})), InvalidInput);

    std::mt19937_64 rng(1);
    const CVector a = testutil::random_complex(rng, 16, 1).col(0), b = testutil::random_complex(rng, 16, 1).col(0);
    double ref = 0.0;
    for (Eigen::Index i = 0; i < 16; ++i)
        ref += std::norm(a[i] - b[i]);
    CHECK_THAT(dist_sed(a, b), WithinAbs(ref, 1e-12));
}

TEST_CASE("cosine distance", "[candidates]")
{
    std::mt19937_64 rng(2);
    const CVector a = testutil::random_complex(rng, 16, 1).col(0);
    CHECK_THAT(dist_cd(a, cplx(-2.0, 3.5) * a), WithinAbs(0.0, 1e-12));

    CVector e0 = CVector::Zero(4), e1 = CVector::Zero(4);
    e0[0] = 1.0;
    e1[1] = 1.0;
    CHECK(dist_cd(e0, e1) == 1.0);
    CHECK_THROWS_AS(dist_cd(e0, CVector::Zero(4)), DegenerateInput);

    for (int t = 0; t < 100; ++t)
    {
        const CVector x = serialize_v(testutil::random_unitary(rng, 8, 2)).values;
        const CVector y = serialize_v(testutil::random_unitary(rng, 8, 2)).values;
        const double d = dist_cd(x, y);
        CHECK((d >= 0.0 && d <= 1.0));
        CHECK_THAT(d, WithinAbs(dist_cd(y, x), 1e-14));
        CHECK_THAT(d, WithinAbs(1.0 - std::abs(y.dot(x)) / (x.norm() * y.norm()), 1e-14));
    }
}

TEST_CASE("normalized covariance distance", "[candidates]")
{
    std::mt19937_64 rng(3);
    const CMatrix h = testutil::random_complex(rng, 2, 8);
    const CMatrix k = norm_cov(h).k;
    CHECK(k.rows() == 8);
    CHECK_THAT(frobenius_norm(k), WithinAbs(1.0, 1e-10));
    CHECK((k - k.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(dist_ncm(k, k) == 0.0);
    CHECK_THROWS_AS(dist_ncm(k, k.topLeftCorner(4, 4)), InvalidInput);

    CMatrix ha = CMatrix::Zero(1, 3), hb = CMatrix::Zero(1, 3);
    ha(0, 0) = 2.0;
    hb(0, 2) = cplx(0.0, 1.0);
    CHECK_THAT(dist_ncm(norm_cov(ha).k, norm_cov(hb).k), WithinAbs(2.0, 1e-15));
}

TEST_CASE("single-stream covariance distance identity", "[candidates]")
{
    std::mt19937_64 rng(4);
    for (int t = 0; t < 2000; ++t)
    {
        const int n = 2 + t % 7;
        const CMatrix ha = testutil::random_complex(rng, 1, n), hb = testutil::random_complex(rng, 1, n);
        const CVector va = ha.row(0).adjoint().normalized(), vb = hb.row(0).adjoint().normalized();
        const double expect = 2.0 * (1.0 - std::norm(va.dot(vb)));
        CHECK_THAT(dist_ncm(norm_cov(ha).k, norm_cov(hb).k), WithinAbs(expect, 1e-9));
    }
}

TEST_CASE("effective distance folding", "[candidates]")
{
    const MimoConfig c = cfg_of(2, 1);
    CHECK(dist_effective(vec({0, 3}), vec({32, 3}), c) == 32.0 * 32.0);
    CHECK(dist_effective(vec({0, 3}), vec({48, 3}), c) == 16.0 * 16.0);
    CHECK_THROWS_AS(dist_effective(vec({0, 3, 1}), vec({48, 3, 1}), c), InvalidInput);

    const MimoConfig c4 = cfg_of(2, 1, 4);
    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b)
            for (int pa : {0, 5, 15})
                for (int pb : {0, 9})
                {
                    const RVector x = vec({double(a), double(pa)}), y = vec({double(b), double(pb)});
                    const int dq = std::abs(a - b);
                    const int folded = std::min(dq, 16 - dq);
                    CHECK(folded <= 8);
                    const double expect = folded * folded + (pa - pb) * (pa - pb);
                    const double d = dist_effective(x, y, c4);
                    CHECK(d == expect);
                    CHECK(d == dist_effective(y, x, c4));
                    CHECK(d <= dist_sed(x, y));
                    CHECK((d == dist_sed(x, y)) == (dq <= 8));
                }
}

TEST_CASE("centroid update rules", "[candidates]")
{
    const MimoConfig c = cfg_of(2, 1);
    const FeedbackPoint p = AngleIndexVector{vec({5, 2})};
    const auto single = std::get<AngleIndexVector>(centroid_update({p}, Method::Ifor, c, p)).indices;
    CHECK(single == vec({5, 2}));

    const FeedbackPoint a = AngleIndexVector{vec({1, 2})}, b = AngleIndexVector{vec({63, 4})};
    const auto circ = std::get<AngleIndexVector>(centroid_update({a, b}, Method::IforPlus, c, a)).indices;
    CHECK_THAT(circ[0], WithinAbs(0.0, 1e-12));
    CHECK_THAT(circ[1], WithinAbs(3.0, 1e-12));
    const auto plain = std::get<AngleIndexVector>(centroid_update({a, b}, Method::Ifor, c, a)).indices;
    CHECK(plain[0] == 32.0);

    std::mt19937_64 rng(5);
    const MimoConfig c8 = cfg_of(8, 2);
    const FeedbackPoint ka = norm_cov(testutil::random_complex(rng, 2, 8));
    const FeedbackPoint kb = norm_cov(testutil::random_complex(rng, 2, 8));
    const CMatrix km = std::get<NormCovMatrix>(centroid_update({ka, kb}, Method::Ncm, c8, ka)).k;
    CHECK_THAT(frobenius_norm(km), WithinAbs(1.0, 1e-10));
    CHECK((km - km.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);

    const FeedbackPoint va = serialize_v(testutil::random_unitary(rng, 8, 2));
    const FeedbackPoint vb = serialize_v(testutil::random_unitary(rng, 8, 2));
    const CVector vm = std::get<SerializedV>(centroid_update({va, vb}, Method::SvCd, c8, va)).values;
    CHECK_THAT(vm.squaredNorm(), WithinAbs(2.0, 1e-10));

    CHECK_THROWS_AS(centroid_update({}, Method::Ifor, c, p), InvalidInput);
    CHECK_THROWS_AS(centroid_update({va}, Method::Ifor, c8, va), InvalidInput);
}

TEST_CASE("dataset representations", "[candidates]")
{
    const MimoConfig cfg = cfg_of(8, 2);
    const auto hs = model_d_groups(2, 10, cfg);
    REQUIRE(hs.size() == 122);

    const auto ifor = build_dataset(hs, cfg, Method::Ifor);
    CHECK(ifor.angles.rows() == 26);
    CHECK(ifor.size() == 122);
    const auto [phi_rows, psi_rows] = scp_rows(cfg);
    CHECK(phi_rows.size() == 13);
    CHECK(psi_rows.size() == 13);

    const auto lqp = build_dataset(hs, cfg, Method::Lqp);
    CHECK(lqp.cfg.b_psi == 2);
    for (int r : psi_rows)
        CHECK(lqp.angles.row(r).maxCoeff() <= 3.0);
    for (int r : phi_rows)
        CHECK(lqp.angles.row(r).maxCoeff() <= 63.0);

    const auto sv = build_dataset(hs, cfg, Method::SvSed);
    CHECK(sv.complex.rows() == 16);
    for (Eigen::Index i = 0; i < sv.complex.cols(); ++i)
        CHECK_THAT(sv.complex.col(i).squaredNorm(), WithinAbs(2.0, 1e-9));

    const auto ncm = build_dataset(hs, cfg, Method::Ncm);
    CHECK(ncm.complex.rows() == 64);
    for (Eigen::Index i = 0; i < ncm.complex.cols(); ++i)
    {
        const CMatrix k = Eigen::Map<const CMatrix>(ncm.complex.col(i).data(), 8, 8);
        CHECK_THAT(frobenius_norm(k), WithinAbs(1.0, 1e-10));
        CHECK((k - k.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("finalize", "[candidates]")
{
    std::mt19937_64 rng(6);
    const MimoConfig cfg = cfg_of(8, 2);

    CandidateSet scp;
    scp.method = Method::Scp;
    scp.cfg = cfg;
    scp.k = 1024;
    scp.angle_centroids = RMatrix(13, 256);
    scp.psi_centroids = RMatrix(13, 4);
    std::uniform_int_distribution<int> u64(0, 63), u16(0, 15);
    for (Eigen::Index i = 0; i < scp.angle_centroids.size(); ++i)
        scp.angle_centroids.data()[i] = u64(rng);
    for (Eigen::Index i = 0; i < scp.psi_centroids.size(); ++i)
        scp.psi_centroids.data()[i] = u16(rng);
    const auto fin = finalize(scp);
    CHECK(fin.size() == 1024);
    CHECK(scp.bits() == 10);
    for (const auto &m : fin)
        CHECK(gram_deviation(m) <= 1e-9);
    // candidate j combines phi centroid j / 4 with psi centroid j % 4
    const auto rep = std::get<AngleIndexVector>(scp.centroid(4 * 7 + 2)).indices;
    const auto [phi_rows, psi_rows] = scp_rows(cfg);
    CHECK(rep[phi_rows[3]] == scp.angle_centroids(3, 7));
    CHECK(rep[psi_rows[5]] == scp.psi_centroids(5, 2));

    const CMatrix v = normalize_last_row_phase(testutil::random_unitary(rng, 8, 2));
    CandidateSet sv;
    sv.method = Method::SvSed;
    sv.cfg = cfg;
    sv.k = 1;
    sv.complex_centroids = CMatrix(serialize_v(v).values);
    CHECK((finalize(sv)[0] - v).cwiseAbs().maxCoeff() < 1e-12);

    const CVector u = testutil::random_unitary(rng, 8, 1).col(0);
    const MimoConfig c1 = cfg_of(8, 1);
    CandidateSet ncm;
    ncm.method = Method::Ncm;
    ncm.cfg = c1;
    ncm.k = 1;
    const CMatrix k = u * u.adjoint();
    ncm.complex_centroids = Eigen::Map<const CVector>(k.data(), k.size());
    const CMatrix f = finalize(ncm)[0];
    CHECK_THAT(gcs(CMatrix(u), f), WithinAbs(1.0, 1e-12));
}

TEST_CASE("training produces orthonormal candidates", "[candidates]")
{
    const MimoConfig cfg = cfg_of(8, 2);
    const auto hs = model_d_groups(8, 20, cfg);
    TrainOptions opt;
    opt.k = 16;
    opt.max_iter = 20;
    opt.scp = ScpConfig{8, 2};
    for (Method m : {Method::Ifor, Method::IforPlus, Method::Lqp, Method::Scp, Method::SvSed, Method::SvCd,
                     Method::Ncm})
    {
        const CandidateSet set = train(build_dataset(hs, cfg, m), opt);
        CHECK(set.finalized.size() == 16);
        CHECK(set.bits() == 4);
        for (const auto &v : set.finalized)
        {
            CHECK(v.rows() == 8);
            CHECK(v.cols() == 2);
            CHECK(gram_deviation(v) <= 1e-9);
        }
        CHECK(set.info.iterations >= 1);
    }

    const auto ds = build_dataset(hs, cfg, Method::Ifor);
    opt.k = 12;
    CHECK_THROWS_AS(train(ds, opt), InvalidInput);
    opt.k = 1024;
    CHECK_THROWS_AS(train(ds, opt), InvalidInput);
    opt.k = 16;
    opt.scp = ScpConfig{8, 4};
    CHECK_THROWS_AS(train(build_dataset(hs, cfg, Method::Scp), opt), InvalidInput);
}

TEST_CASE("nearest candidate matches a linear scan", "[candidates]")
{
    const MimoConfig cfg = cfg_of(8, 2);
    const auto train_h = model_d_groups(8, 30, cfg);
    const auto query_h = model_d_groups(2, 31, cfg);
    TrainOptions opt;
    opt.k = 16;
    opt.max_iter = 10;
    opt.scp = ScpConfig{8, 2};
    for (Method m : {Method::Ifor, Method::IforPlus, Method::Scp, Method::SvSed, Method::SvCd, Method::Ncm})
    {
        const CandidateSet set = train(build_dataset(train_h, cfg, m), opt);
        for (const auto &h : query_h)
        {
            const FeedbackPoint q = make_point(m, h, steering_matrix(h, 2), cfg);
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int j = 0; j < set.k; ++j)
            {
                const FeedbackPoint c = set.centroid(j);
                double d = 0.0;
                switch (m)
                {
                case Method::IforPlus:
                    d = dist_effective(std::get<AngleIndexVector>(q).indices, std::get<AngleIndexVector>(c).indices,
                                       set.cfg);
                    break;
                case Method::SvCd:
                    d = dist_cd(std::get<SerializedV>(q).values, std::get<SerializedV>(c).values);
                    break;
                case Method::SvSed:
                    d = dist_sed(std::get<SerializedV>(q).values, std::get<SerializedV>(c).values);
                    break;
                case Method::Ncm: d = dist_ncm(std::get<NormCovMatrix>(q).k, std::get<NormCovMatrix>(c).k); break;
                default:
                    d = dist_sed(std::get<AngleIndexVector>(q).indices, std::get<AngleIndexVector>(c).indices);
                }
                if (d < best_d - 1e-12)
                {
                    best_d = d;
                    best = j;
                }
            }
            CHECK(nearest_candidate(q, set) == best);
        }
        for (int j : {0, 5, 15})
            CHECK(nearest_candidate(set.centroid(j), set) == j);
    }
}

TEST_CASE("nearest candidate edge cases", "[candidates]")
{
    const MimoConfig cfg = cfg_of(8, 2);
    const auto hs = model_d_groups(1, 40, cfg);
    TrainOptions opt;
    opt.k = 1;
    const CandidateSet set = train(build_dataset(hs, cfg, Method::SvSed), opt);
    for (const auto &h : hs)
        CHECK(nearest_candidate(serialize_v(steering_matrix(h, 2)), set) == 0);
    CHECK_THROWS_AS(nearest_candidate(norm_cov(hs[0]), set), InvalidInput);
}

TEST_CASE("single-stream covariance and inner-product argmin agree", "[candidates]")
{
    std::mt19937_64 rng(7);
    const MimoConfig c1 = cfg_of(8, 1);
    CandidateSet set;
    set.method = Method::Ncm;
    set.cfg = c1;
    set.k = 64;
    set.complex_centroids.resize(64, 64);
    std::vector<CVector> cands;
    for (int j = 0; j < 64; ++j)
    {
        cands.push_back(testutil::random_unitary(rng, 8, 1).col(0));
        const CMatrix k = cands.back() * cands.back().adjoint();
        set.complex_centroids.col(j) = Eigen::Map<const CVector>(k.data(), 64);
    }
    for (int t = 0; t < 200; ++t)
    {
        const CMatrix h = testutil::random_complex(rng, 1, 8);
        const CVector v = steering_matrix(h, 1).col(0);
        int best = 0;
        for (int j = 1; j < 64; ++j)
            if (1.0 - std::norm(cands[j].dot(v)) < 1.0 - std::norm(cands[best].dot(v)))
                best = j;
        CHECK(nearest_candidate(norm_cov(h), set) == best);
    }
}
