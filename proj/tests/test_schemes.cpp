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

#include <cmath>
#include <memory>
#include <random>

#include "csifb/schemes.hpp"
#include "test_util.hpp"

using namespace csifb;

namespace
{

std::shared_ptr<const CandidateSet> small_set(Method m, const MimoConfig &cfg, int k, ScpConfig scp = {})
{
    std::vector<CMatrix> hs;
    for (int r = 0; r < 4; ++r)
        for (auto &h : group_channels(realize_channel(ChannelModel::D, cfg, derive_seed(11, r))))
            hs.push_back(std::move(h));
    TrainOptions opt;
    opt.k = k;
    opt.max_iter = 10;
    opt.seed = 3;
    opt.scp = scp;
    return std::make_shared<const CandidateSet>(train(build_dataset(hs, cfg, m), opt));
}

} // namespace

TEST_CASE("scheme names round trip", "[schemes]")
{
    REQUIRE(all_schemes().size() == 9);
    for (SchemeId s : all_schemes())
        CHECK(scheme_from_string(to_string(s)) == s);
    CHECK(to_string(SchemeId::Baseline) == "BASELINE_11BE");
    CHECK_THROWS_AS(scheme_from_string("nope"), InvalidInput);
    CHECK_FALSE(is_index_scheme(SchemeId::Baseline));
    CHECK_FALSE(is_index_scheme(SchemeId::FixedPsi));
    CHECK(scheme_of(scheme_method(SchemeId::SvCd)) == SchemeId::SvCd);
    CHECK_THROWS_AS(scheme_method(SchemeId::Baseline), InvalidInput);
}

TEST_CASE("bits per group", "[schemes]")
{
    const MimoConfig cfg;
    CHECK(bfr_bits_per_group(SchemeId::Baseline, cfg) == 130);
    CHECK(bfr_bits_per_group(SchemeId::FixedPsi, cfg) == 78);
    for (SchemeId s : {SchemeId::Ifor, SchemeId::IforPlus, SchemeId::Lqp, SchemeId::SvSed, SchemeId::SvCd,
                       SchemeId::Ncm})
        CHECK(bfr_bits_per_group(s, cfg, 1024) == 10);
    CHECK(bfr_bits_per_group(SchemeId::Scp, cfg, 1024, ScpConfig{256, 4}) == 10);
    CHECK(bfr_bits_per_group(SchemeId::Scp, cfg, 1024, ScpConfig{32, 32}) == 10);
    CHECK_THROWS_AS(bfr_bits_per_group(SchemeId::Ifor, cfg, 1000), InvalidInput);
    CHECK_THROWS_AS(bfr_bits_per_group(SchemeId::Scp, cfg, 1024, ScpConfig{256, 2}), InvalidInput);

    MimoConfig c21;
    c21.n_r = 2;
    c21.n_c = 1;
    CHECK(bfr_bits_per_group(SchemeId::Baseline, c21) == 6 + 4);
    CHECK(bfr_bits_per_group(SchemeId::FixedPsi, c21) == 6);
}

TEST_CASE("baseline message size and round trip", "[schemes]")
{
    const MimoConfig cfg;
    const ChannelRealization r = realize_channel(ChannelModel::D, cfg, 5);
    const BfrMessage msg = encode(r, SchemeId::Baseline, {});
    CHECK(msg.n_groups() == 61);
    CHECK(msg.total_bits() == 7930);
    CHECK(pack_bits(msg).size() == (7930 + 7) / 8);

    const auto groups = group_channels(r);
    const auto v_hat = decode(msg, {});
    REQUIRE(v_hat.size() == groups.size());
    double mean = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g)
    {
        CHECK(gram_deviation(v_hat[g]) < 1e-9);
        mean += gcs(steering_matrix(groups[g], cfg.n_c), v_hat[g]);
    }
    CHECK(mean / groups.size() > 0.97);

    BfrMessage back;
    back.scheme = msg.scheme;
    back.cfg = msg.cfg;
    back.bits_per_group = msg.bits_per_group;
    unpack_bits(pack_bits(msg), back, msg.n_groups());
    CHECK(back.groups == msg.groups);
}

TEST_CASE("fixed-psi needs a matching profile", "[schemes]")
{
    const MimoConfig cfg;
    const ChannelRealization r = realize_channel(ChannelModel::B, cfg, 2);
    CHECK_THROWS_AS(encode(r, SchemeId::FixedPsi, {}), ConfigError);

    auto bad = std::make_shared<PsiProfile>();
    bad->cfg = cfg;
    bad->values.assign(5, 0.5);
    CHECK_THROWS_AS(encode(r, SchemeId::FixedPsi, SchemeAssets{nullptr, bad}), ConfigError);

    auto prof = std::make_shared<PsiProfile>();
    prof->cfg = cfg;
    prof->values.assign(13, std::acos(-1.0) / 4.0);
    const SchemeAssets a{nullptr, prof};
    const BfrMessage msg = encode(r, SchemeId::FixedPsi, a);
    CHECK(msg.total_bits() == 61 * 78);
    const auto v_hat = decode(msg, a);
    for (const auto &v : v_hat)
        CHECK(gram_deviation(v) < 1e-9);
}

TEST_CASE("index schemes decode to finalized candidates", "[schemes]")
{
    const MimoConfig cfg;
    const ChannelRealization r = realize_channel(ChannelModel::D, cfg, 77);
    for (Method m : {Method::Ifor, Method::SvSed, Method::SvCd, Method::Ncm})
    {
        const SchemeId s = scheme_of(m);
        const SchemeAssets a{small_set(m, cfg, 16), nullptr};
        const BfrMessage msg = encode(r, s, a);
        CHECK(msg.bits_per_group == 4);
        CHECK(msg.total_bits() == 61 * 4);
        const auto v_hat = decode(msg, a);
        for (std::size_t g = 0; g < v_hat.size(); ++g)
            CHECK(v_hat[g].isApprox(a.candidates->finalized[static_cast<std::size_t>(msg.groups[g][0])]));
    }
    const SchemeAssets scp{small_set(Method::Scp, cfg, 16, ScpConfig{4, 4}), nullptr};
    CHECK(encode(r, SchemeId::Scp, scp).bits_per_group == 4);
}

TEST_CASE("single candidate always yields index zero", "[schemes]")
{
    const MimoConfig cfg;
    const SchemeAssets a{small_set(Method::SvSed, cfg, 1), nullptr};
    for (std::uint64_t seed : {1u, 2u, 3u})
    {
        const BfrMessage msg = encode(realize_channel(ChannelModel::C, cfg, seed), SchemeId::SvSed, a);
        CHECK(msg.bits_per_group == 0);
        for (const auto &g : msg.groups)
            CHECK(g == std::vector<int>{0});
    }
}

TEST_CASE("asset mismatches and corrupt messages", "[schemes]")
{
    const MimoConfig cfg;
    const ChannelRealization r = realize_channel(ChannelModel::D, cfg, 9);
    CHECK_THROWS_AS(encode(r, SchemeId::SvCd, {}), ConfigError);
    const SchemeAssets sed{small_set(Method::SvSed, cfg, 16), nullptr};
    CHECK_THROWS_AS(encode(r, SchemeId::SvCd, sed), ConfigError);

    BfrMessage msg = encode(r, SchemeId::SvSed, sed);
    msg.groups[3][0] = 16;
    CHECK_THROWS_AS(decode(msg, sed), CorruptData);
    msg.groups[3] = {1, 2};
    CHECK_THROWS_AS(decode(msg, sed), CorruptData);

    BfrMessage base = encode(r, SchemeId::Baseline, {});
    base.groups[0][0] = 64;
    CHECK_THROWS_AS(decode(base, {}), CorruptData);
    base.groups[0][0] = -1;
    CHECK_THROWS_AS(decode(base, {}), CorruptData);

    BfrMessage empty;
    empty.bits_per_group = 130;
    CHECK_THROWS_AS(unpack_bits(std::vector<std::uint8_t>(3), empty, 61), CorruptData);
}

TEST_CASE("bit packing is big-endian and reversible", "[schemes]")
{
    BfrMessage msg;
    msg.scheme = SchemeId::SvSed;
    msg.bits_per_group = 10;
    msg.groups = {{0x3FF}, {0x001}, {0x200}};
    const auto bytes = pack_bits(msg);
    REQUIRE(bytes.size() == 4);
    CHECK(bytes[0] == 0xFF);
    CHECK(bytes[1] == 0xC0);
    CHECK(bytes[2] == 0x18);
    CHECK(bytes[3] == 0x00);

    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> d(0, 1023);
    msg.groups.clear();
    for (int g = 0; g < 61; ++g)
        msg.groups.push_back({d(rng)});
    BfrMessage back = msg;
    back.groups.clear();
    unpack_bits(pack_bits(msg), back, 61);
    CHECK(back.groups == msg.groups);
}

TEST_CASE("expansion to subcarriers", "[schemes]")
{
    std::vector<CMatrix> g;
    for (int i = 0; i < 61; ++i)
        g.push_back(CMatrix::Constant(1, 1, cplx(i, 0)));
    const auto full = expand_to_subcarriers(g, 242, 4);
    REQUIRE(full.size() == 242);
    CHECK(full[0](0, 0).real() == 0.0);
    CHECK(full[7](0, 0).real() == 1.0);
    CHECK(full[241](0, 0).real() == 60.0);
    CHECK_THROWS_AS(expand_to_subcarriers(g, 240, 4), InvalidInput);
}
