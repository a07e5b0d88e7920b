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

// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "csifb/candidates.hpp"
#include "csifb/experiment.hpp"
#include "csifb/kmeans.hpp"
#include "csifb/link.hpp"
#include "csifb/schemes.hpp"

#ifndef CSIFB_SOURCE_DIR
#define CSIFB_SOURCE_DIR "."
#endif

using namespace csifb;
namespace fs = std::filesystem;

namespace
{

constexpr double kPi = std::numbers::pi;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

MimoConfig config(int n_r, int n_c, int b_phi = 6, int b_psi = 4)
{
    MimoConfig c;
    c.n_r = n_r;
    c.n_c = n_c;
    c.b_phi = b_phi;
    c.b_psi = b_psi;
    return c;
}

CMatrix gaussian(std::mt19937_64 &rng, Eigen::Index r, Eigen::Index c)
{
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i)
        m.data()[i] = cplx(n(rng), n(rng));
    return m;
}

CMatrix unitary(std::mt19937_64 &rng, Eigen::Index r, Eigen::Index c)
{
    const CMatrix q = Eigen::HouseholderQR<CMatrix>(gaussian(rng, r, r)).householderQ();
    return q.leftCols(c);
}

template <typename Scalar>
bool monotone(const KMeansResult<Scalar> &r)
{
    for (std::size_t i = 1; i < r.distortion_history.size(); ++i)
        if (r.distortion_history[i] > r.distortion_history[i - 1] * (1 + 1e-12) + 1e-15)
            return false;
    return true;
}

// ---------------------------------------------------------------------------

Outcome covariance_identity()
{
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> ant(2, 8);
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t)
    {
        const int n = ant(rng);
        const CMatrix ha = gaussian(rng, 1, n), hb = gaussian(rng, 1, n);
        const CVector va = steering_matrix(ha, 1).col(0), vb = steering_matrix(hb, 1).col(0);
        const double lhs = dist_ncm(norm_cov(ha).k, norm_cov(hb).k);
        worst = std::max(worst, std::abs(lhs - 2.0 * (1.0 - std::norm(va.dot(vb)))));
    }
    return {worst <= 1e-9, fmt("max deviation %.3g over 1e4 pairs", worst)};
}

Outcome codec_round_trip()
{
    std::mt19937_64 rng(102);
    double min_exact = 1.0, mean_q = 0.0;
    for (auto [n_r, n_c] : {std::pair{2, 1}, {4, 2}, {8, 2}})
    {
        const MimoConfig c = config(n_r, n_c);
        for (int t = 0; t < 10000; ++t)
        {
            const CMatrix v = unitary(rng, n_r, n_c);
            const AngleSet a = givens_decompose(v, c);
            min_exact = std::min(min_exact, gcs(v, reconstruct_v(a, c)));
            if (n_r == 8)
                mean_q += gcs(v, reconstruct_v(quantize(a, 6, 4), c));
        }
    }
    mean_q /= 10000;
    return {min_exact >= 1 - 1e-9 && mean_q >= 0.99,
            fmt("min exact GCS 1-%.2g, quantized 8x2 mean GCS %.5f", 1 - min_exact, mean_q)};
}

Outcome fixed_psi_bound()
{
    std::mt19937_64 rng(103);
    const MimoConfig c = config(2, 1);
    const PsiProfile prof{c, {kPi / 4}};
    double min_rand = 1.0;
    for (int t = 0; t < 10000; ++t)
    {
        const CMatrix v = steering_matrix(gaussian(rng, 1, 2), 1);
        const AngleSet a = givens_decompose(v, c);
        min_rand = std::min(min_rand, gcs(v, reconstruct_partial(a.phis, c, prof)));
    }
    // sweep psi over [0, pi/2] including both endpoints
    double min_sweep = 1.0;
    for (int i = 0; i <= 1000; ++i)
    {
        const double psi = kPi / 2 * i / 1000.0;
        CMatrix v(2, 1);
        v << std::cos(psi) * std::polar(1.0, 1.1), std::sin(psi);
        const AngleSet a = givens_decompose(v, c);
        min_sweep = std::min(min_sweep, gcs(v, reconstruct_partial(a.phis, c, prof)));
    }
    const double bound = 1 / std::sqrt(2.0);
    const double lowest = std::min(min_rand, min_sweep);
    return {lowest >= bound - 1e-9 && min_sweep <= bound + 0.02,
            fmt("min GCS random %.6f, sweep %.6f, bound %.6f", min_rand, min_sweep, bound)};
}

Outcome bit_accounting()
{
    const MimoConfig c;
    const int base = bfr_bits_per_group(SchemeId::Baseline, c);
    const int fixed = bfr_bits_per_group(SchemeId::FixedPsi, c);
    const int idx = bfr_bits_per_group(SchemeId::SvCd, c, 1024);
    const int scp = bfr_bits_per_group(SchemeId::Scp, c, 1024, ScpConfig{256, 4});
    return {base == 130 && fixed == 78 && idx == 10 && scp == 10,
            fmt("baseline %d, fixed-psi %d, k=1024 %d, SCP 256x4 %d", base, fixed, idx, scp)};
}

Outcome kmeans_properties()
{
    const MimoConfig cfg;
    std::vector<CMatrix> hs;
    for (int r = 0; r < 16; ++r)
        for (auto &h : group_channels(realize_channel(ChannelModel::D, cfg, derive_seed(105, r))))
            hs.push_back(std::move(h));

    int runs = 0, ok = 0;
    auto track = [&](bool m) {
        ++runs;
        ok += m ? 1 : 0;
    };
    for (std::uint64_t seed : {1u, 2u})
    {
        KMeansOptions<double> o;
        o.k = 32;
        o.seed = seed;
        KMeansOptions<cplx> oc;
        oc.k = 32;
        oc.seed = seed;

        const auto ifor = build_dataset(hs, cfg, Method::Ifor);
        track(monotone(kmeans<double>(ifor.angles, o, SedDistance{}, MeanRule{})));
        const EffectiveDistance eff = effective_distance(cfg);
        track(monotone(kmeans<double>(ifor.angles, o, eff, CircularMeanRule{eff.circular, eff.period})));
        const auto lqp = build_dataset(hs, cfg, Method::Lqp);
        track(monotone(kmeans<double>(lqp.angles, o, SedDistance{}, MeanRule{})));
        const auto [phi_rows, psi_rows] = scp_rows(cfg);
        for (const auto *rows : {&phi_rows, &psi_rows})
        {
            RMatrix sub(static_cast<Eigen::Index>(rows->size()), ifor.angles.cols());
            for (std::size_t i = 0; i < rows->size(); ++i)
                sub.row(static_cast<Eigen::Index>(i)) = ifor.angles.row((*rows)[i]);
            track(monotone(kmeans<double>(sub, o, SedDistance{}, MeanRule{})));
        }
        const auto sv = build_dataset(hs, cfg, Method::SvSed);
        track(monotone(kmeans<cplx>(sv.complex, oc, SedDistance{}, MeanRule{})));
        track(monotone(kmeans<cplx>(sv.complex, oc, CosineDistance{}, AlignedSphericalMeanRule{std::sqrt(2.0)})));
        const auto ncm = build_dataset(hs, cfg, Method::Ncm);
        track(monotone(kmeans<cplx>(ncm.complex, oc, SedDistance{}, NormalizedMeanRule{1.0})));
    }

    // k equal to the number of distinct points
    RMatrix dup(26, 80);
    for (Eigen::Index i = 0; i < 40; ++i)
        dup.col(i) = dup.col(i + 40) = build_dataset(hs, cfg, Method::Ifor).angles.col(i * 7);
    std::set<std::vector<double>> distinct;
    for (Eigen::Index i = 0; i < dup.cols(); ++i)
        distinct.insert(std::vector<double>(dup.col(i).data(), dup.col(i).data() + dup.rows()));
    KMeansOptions<double> od;
    od.k = static_cast<int>(distinct.size());
    od.seed = 7;
    const double zero = kmeans<double>(dup, od, SedDistance{}, MeanRule{}).distortion_history.back();

    // 1-D example against brute force over all 2-partitions of sorted data
    const std::vector<double> x{0, 1, 10, 11};
    double best_cost = INFINITY, best_lo = 0, best_hi = 0;
    for (int cut = 1; cut < 4; ++cut)
    {
        double a = 0, b = 0;
        for (int i = 0; i < cut; ++i)
            a += x[i];
        for (int i = cut; i < 4; ++i)
            b += x[i];
        a /= cut;
        b /= 4 - cut;
        double cost = 0;
        for (int i = 0; i < 4; ++i)
            cost += std::pow(x[i] - (i < cut ? a : b), 2);
        if (cost < best_cost)
        {
            best_cost = cost;
            best_lo = a;
            best_hi = b;
        }
    }
    RMatrix pts(1, 4);
    pts << 0, 1, 10, 11;
    bool one_d = best_lo == 0.5 && best_hi == 10.5;
    for (std::uint64_t seed = 0; seed < 8; ++seed)
    {
        KMeansOptions<double> o;
        o.k = 2;
        o.seed = seed;
        const auto r = kmeans<double>(pts, o, SedDistance{}, MeanRule{});
        one_d = one_d && std::min(r.centroids(0, 0), r.centroids(0, 1)) == best_lo &&
                std::max(r.centroids(0, 0), r.centroids(0, 1)) == best_hi;
    }
    return {ok == runs && zero == 0.0 && one_d,
            fmt("monotone %d/%d runs, distortion at k=distinct %.3g, 1-D centroids %s", ok, runs, zero,
                one_d ? "{0.5, 10.5}" : "wrong")};
}

Outcome effective_folding()
{
    const MimoConfig c = config(2, 1, 4, 4);
    long pairs = 0, bad = 0;
    for (int a = 0; a < 16; ++a)
        for (int pa = 0; pa < 16; ++pa)
            for (int b = 0; b < 16; ++b)
                for (int pb = 0; pb < 16; ++pb)
                {
                    RVector x(2), y(2);
                    x << a, pa;
                    y << b, pb;
                    const int dq = std::abs(a - b);
                    const double expect = std::pow(std::min(dq, 16 - dq), 2) + std::pow(pa - pb, 2);
                    const double d = dist_effective(x, y, c);
                    ++pairs;
                    if (d != expect || d != dist_effective(y, x, c) || d > dist_sed(x, y))
                        ++bad;
                }
    return {bad == 0, fmt("%ld pairs, %ld violations", pairs, bad)};
}

Outcome goodput_arithmetic()
{
    const TimingParams t;
    const double g = goodput(8000, t, 236.0, 100e6, 0.0) / 1e6;
    long checks = 0, bad = 0;
    for (double ts = 50; ts <= 3000; ts += 25)
        for (double pe = 0.0; pe < 0.9; pe += 0.1)
            for (double r = 5e6; r <= 2e9; r *= 1.7)
            {
                const double base = goodput(8000, t, ts, r, pe);
                checks += 3;
                bad += goodput(8000, t, ts + 25, r, pe) < base ? 0 : 1;
                bad += goodput(8000, t, ts, r, pe + 0.05) < base ? 0 : 1;
                bad += goodput(8000, t, ts, r * 1.7, pe) > base ? 0 : 1;
            }
    const double ts = sounding_duration(8, t, 0.0, 1e6);
    return {std::abs(g - 17.94) <= 0.01 && bad == 0 && std::abs(ts - 236.0) < 1e-9,
            fmt("goodput %.4f Mb/s, %ld/%ld monotonicity checks hold", g, checks - bad, checks)};
}

struct Interval
{
    double mean, lo, hi;
};

std::map<SchemeId, Interval> bootstrap(const std::map<SchemeId, std::vector<double>> &samples, int resamples,
                                       std::uint64_t seed)
{
    const std::size_t n = samples.begin()->second.size();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::map<SchemeId, std::vector<double>> means;
    std::vector<std::size_t> idx(n);
    for (int b = 0; b < resamples; ++b)
    {
        for (auto &i : idx)
            i = pick(rng);
        for (const auto &[s, v] : samples)
        {
            double acc = 0.0;
            for (std::size_t i : idx)
                acc += v[i];
            means[s].push_back(acc / static_cast<double>(n));
        }
    }
    std::map<SchemeId, Interval> out;
    for (auto &[s, m] : means)
    {
        std::sort(m.begin(), m.end());
        double mean = 0.0;
        for (double v : samples.at(s))
            mean += v;
        out[s] = {mean / static_cast<double>(n), m[static_cast<std::size_t>(0.025 * (m.size() - 1))],
                  m[static_cast<std::size_t>(0.975 * (m.size() - 1))]};
    }
    return out;
}

Outcome scheme_ordering()
{
    const fs::path dir = fs::temp_directory_path() / fmt("csifb-acceptance-%d", static_cast<int>(::getpid()));
    fs::create_directories(dir);
    ExperimentSpec spec;
    spec.dataset_path = (dir / "dataset.bin").string();
    spec.candidates_dir = (dir / "candidates").string();
    spec.psi_profile_path = (dir / "psi_profile.json").string();
    spec.report_dir = (dir / "reports").string();
    spec.mcs_table_path = std::string(CSIFB_SOURCE_DIR) + "/config/mcs_eht_20mhz_2ss.json";
    using S = SchemeId;
    const std::vector<S> order{S::Baseline, S::FixedPsi, S::SvCd, S::SvSed, S::IforPlus, S::Ifor, S::Scp};
    const std::vector<bool> strict{true, true, false, true, false, true}; // between order[i] and order[i+1]
    spec.schemes = order;
    spec.eval_model = ChannelModel::D;
    spec.eval_realizations = 500;

    cmd_gen_dataset(spec);
    cmd_psi_profile(spec);
    for (S s : order)
        if (is_index_scheme(s))
            cmd_train(spec, scheme_method(s));
    const EvalResult res = cmd_evaluate(spec);
    fs::remove_all(dir);

    const auto ci = bootstrap(res.gcs_per_realization, 2000, 108);
    std::ostringstream os;
    bool gcs_ok = true;
    for (std::size_t i = 0; i < order.size(); ++i)
    {
        const Interval &a = ci.at(order[i]);
        os << to_string(order[i]) << fmt(" %.4f [%.4f, %.4f]", a.mean, a.lo, a.hi);
        if (i + 1 == order.size())
            break;
        const Interval &b = ci.at(order[i + 1]);
        // strict: intervals separated; weak: no significant reversal
        const bool ok = strict[i] ? a.lo > b.hi : (a.mean >= b.mean || a.hi >= b.lo);
        gcs_ok = gcs_ok && ok;
        os << (strict[i] ? (ok ? " > " : " !> ") : (ok ? " >= " : " !>= "));
    }

    // goodput at the highest SNR point
    const double top = *std::max_element(spec.snr_db.begin(), spec.snr_db.end());
    std::map<S, const LinkReport *> at_top;
    for (const auto &r : res.reports)
        if (r.snr_db == top)
            at_top[scheme_from_string(r.scheme)] = &r;
    const LinkReport &base = *at_top.at(S::Baseline);
    bool gp_ok = base.sel_mcs.has_value();
    double min_gain = INFINITY;
    for (S s : order)
    {
        if (!is_index_scheme(s))
            continue;
        const LinkReport &r = *at_top.at(s);
        gp_ok = gp_ok && r.sel_mcs == base.sel_mcs && r.goodput_bps > base.goodput_bps;
        min_gain = std::min(min_gain, r.goodput_bps / base.goodput_bps - 1.0);
    }
    gp_ok = gp_ok && min_gain >= 0.30;
    os << fmt("; at %.0f dB MCS %d baseline %.2f Mb/s (%lld bits), min index-scheme gain %.1f%%", top,
              base.sel_mcs.value_or(-1), base.goodput_bps / 1e6, base.l_bfr_bits, 100 * min_gain);
    return {gcs_ok && gp_ok, os.str()};
}

Outcome ncm_cd_equivalence()
{
    std::mt19937_64 rng(109);
    const MimoConfig c = config(8, 1);
    CandidateSet set;
    set.method = Method::Ncm;
    set.cfg = c;
    set.k = 64;
    set.complex_centroids.resize(64, 64);
    std::vector<CVector> cand;
    for (int j = 0; j < 64; ++j)
    {
        const auto r = realize_channel(ChannelModel::D, c, derive_seed(109, j));
        cand.push_back(steering_matrix(r.h[static_cast<std::size_t>(j % 242)], 1).col(0));
        const CMatrix k = cand.back() * cand.back().adjoint();
        set.complex_centroids.col(j) = Eigen::Map<const CVector>(k.data(), 64);
    }
    int agree = 0;
    for (int t = 0; t < 1000; ++t)
    {
        const CMatrix h = t % 2 ? gaussian(rng, 1, 8)
                                : realize_channel(ChannelModel::D, c, derive_seed(110, t)).h[static_cast<std::size_t>(t % 242)];
        const CVector v = steering_matrix(h, 1).col(0);
        int best = 0;
        for (int j = 1; j < 64; ++j)
            if (1.0 - std::norm(cand[j].dot(v)) < 1.0 - std::norm(cand[best].dot(v)))
                best = j;
        agree += nearest_candidate(norm_cov(h), set) == best ? 1 : 0;
    }
    return {agree == 1000, fmt("%d/1000 queries agree", agree)};
}

Outcome channel_statistics()
{
    const MimoConfig cfg;
    std::ostringstream os;
    bool ok = true;
    for (ChannelModel m : {ChannelModel::A, ChannelModel::B, ChannelModel::C, ChannelModel::D, ChannelModel::E})
    {
        const auto p = ChannelModelParams::ieee(m);
        std::vector<double> pdp(static_cast<std::size_t>(p.n_taps), 0.0);
        TapSet t;
        for (int s = 0; s < 10000; ++s)
        {
            t = gen_taps(p, cfg, derive_seed(1010, static_cast<std::uint64_t>(s)));
            for (std::size_t k = 0; k < pdp.size(); ++k)
                pdp[k] += t.gains[k].cwiseAbs2().mean();
        }
        const double rms = rms_delay_spread(t.delays_ns, pdp);
        const bool hit = p.t_rms_ns == 0.0 ? rms == 0.0 : std::abs(rms / p.t_rms_ns - 1.0) <= 0.10;
        ok = ok && hit;
        os << to_string(m) << fmt(" %.1f/%.0f ns; ", rms, p.t_rms_ns);
    }
    double spread = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s)
    {
        const auto r = realize_channel(ChannelModel::A, cfg, s);
        for (const auto &h : r.h)
            spread = std::max(spread, (h - r.h[0]).cwiseAbs().maxCoeff());
    }
    ok = ok && spread == 0.0;
    os << fmt("model A max deviation across subcarriers %.3g", spread);
    return {ok, os.str()};
}

struct Criterion
{
    int id;
    const char *name;
    double budget_s;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char **argv)
{
    const std::vector<Criterion> all{
        {1, "covariance distance identity", 10, covariance_identity},
        {2, "codec round trip", 60, codec_round_trip},
        {3, "fixed-psi GCS bound", 5, fixed_psi_bound},
        {4, "bit accounting", 1, bit_accounting},
        {5, "k-means properties", 5, kmeans_properties},
        {6, "effective-distance folding", 1, effective_folding},
        {7, "goodput arithmetic", 1, goodput_arithmetic},
        {8, "scheme ordering and goodput gain", 600, scheme_ordering},
        {9, "single-stream NCM/CD argmin", 30, ncm_cd_equivalence},
        {10, "channel statistics", 30, channel_statistics},
    };
    std::set<int> want;
    for (int i = 1; i < argc; ++i)
        want.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const Criterion &c : all)
    {
        if (!want.empty() && !want.count(c.id))
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("%s [%d] %s: %s (%.2f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
