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

#include "csifb/schemes.hpp"

#include <bit>

namespace csifb
{

namespace
{

const std::vector<std::pair<SchemeId, const char *>> kNames = {
    {SchemeId::Baseline, "BASELINE_11BE"}, {SchemeId::FixedPsi, "FIXED_PSI"}, {SchemeId::Ifor, "IFOR"},
    {SchemeId::IforPlus, "IFOR_PLUS"},     {SchemeId::Lqp, "LQP"},            {SchemeId::Scp, "SCP"},
    {SchemeId::SvSed, "SV_SED"},           {SchemeId::SvCd, "SV_CD"},         {SchemeId::Ncm, "NCM"}};

int log2_exact(long long x, const char *what)
{
    if (!is_power_of_two(x))
        throw InvalidInput(std::string(what) + " must be a power of two, got " + std::to_string(x));
    return std::countr_zero(static_cast<unsigned long long>(x));
}

const CandidateSet &require_candidates(SchemeId s, const MimoConfig &cfg, const SchemeAssets &a)
{
    if (!a.candidates)
        throw ConfigError(to_string(s) + " needs a candidate set");
    const CandidateSet &c = *a.candidates;
    if (c.method != scheme_method(s))
        throw ConfigError("candidate set was trained for " + to_string(c.method) + ", not " + to_string(s));
    if (c.cfg.n_r != cfg.n_r || c.cfg.n_c != cfg.n_c)
        throw ConfigError("candidate set dimensions do not match the MIMO configuration");
    if (static_cast<int>(c.finalized.size()) != c.k)
        throw ConfigError("candidate set is not finalized");
    return c;
}

const PsiProfile &require_profile(const MimoConfig &cfg, const SchemeAssets &a)
{
    if (!a.psi)
        throw ConfigError("FIXED_PSI needs a psi profile");
    if (a.psi->values.size() != static_cast<std::size_t>(angle_counts(cfg).n_psi))
        throw ConfigError("psi profile length does not match the MIMO configuration");
    return *a.psi;
}

} // namespace

std::string to_string(SchemeId s)
{
    for (const auto &[id, name] : kNames)
        if (id == s)
            return name;
    return "?";
}

SchemeId scheme_from_string(const std::string &name)
{
    for (const auto &[id, n] : kNames)
        if (name == n)
            return id;
    throw InvalidInput("unknown scheme '" + name + "'");
}

const std::vector<SchemeId> &all_schemes()
{
    static const std::vector<SchemeId> all = [] {
        std::vector<SchemeId> v;
        for (const auto &p : kNames)
            v.push_back(p.first);
        return v;
    }();
    return all;
}

bool is_index_scheme(SchemeId s) { return s != SchemeId::Baseline && s != SchemeId::FixedPsi; }

Method scheme_method(SchemeId s)
{
    switch (s)
    {
    case SchemeId::Ifor: return Method::Ifor;
    case SchemeId::IforPlus: return Method::IforPlus;
    case SchemeId::Lqp: return Method::Lqp;
    case SchemeId::Scp: return Method::Scp;
    case SchemeId::SvSed: return Method::SvSed;
    case SchemeId::SvCd: return Method::SvCd;
    case SchemeId::Ncm: return Method::Ncm;
    default: throw InvalidInput(to_string(s) + " is not an index scheme");
    }
}

SchemeId scheme_of(Method m)
{
    switch (m)
    {
    case Method::Ifor: return SchemeId::Ifor;
    case Method::IforPlus: return SchemeId::IforPlus;
    case Method::Lqp: return SchemeId::Lqp;
    case Method::Scp: return SchemeId::Scp;
    case Method::SvSed: return SchemeId::SvSed;
    case Method::SvCd: return SchemeId::SvCd;
    case Method::Ncm: return SchemeId::Ncm;
    }
    throw InvalidInput("unknown method");
}

int bfr_bits_per_group(SchemeId s, const MimoConfig &cfg, int k, ScpConfig scp)
{
    cfg.validate();
    const AngleCounts n = angle_counts(cfg);
    switch (s)
    {
    case SchemeId::Baseline: return n.n_phi * cfg.b_phi + n.n_psi * cfg.b_psi;
    case SchemeId::FixedPsi: return n.n_phi * cfg.b_phi;
    case SchemeId::Scp:
        if (scp.w1 * scp.w2 != k)
            throw InvalidInput("SCP requires w1 * w2 == k");
        return log2_exact(scp.w1, "w1") + log2_exact(scp.w2, "w2");
    default: return log2_exact(k, "candidate count");
    }
}

int bfr_bits_per_group(SchemeId s, const MimoConfig &cfg, const SchemeAssets &assets)
{
    if (!is_index_scheme(s))
        return bfr_bits_per_group(s, cfg);
    const CandidateSet &c = require_candidates(s, cfg, assets);
    return bfr_bits_per_group(s, cfg, c.k, c.scp);
}

std::vector<int> field_widths(SchemeId s, const MimoConfig &cfg, int bits_per_group)
{
    std::vector<int> w;
    if (s == SchemeId::Baseline)
    {
        for (const auto &slot : report_order(cfg))
            w.push_back(slot.kind == AngleKind::Phi ? cfg.b_phi : cfg.b_psi);
    }
    else if (s == SchemeId::FixedPsi)
    {
        w.assign(static_cast<std::size_t>(angle_counts(cfg).n_phi), cfg.b_phi);
    }
    else
    {
        w.push_back(bits_per_group);
    }
    return w;
}

BfrMessage encode(const std::vector<CMatrix> &group_h, SchemeId s, const MimoConfig &cfg,
                  const SchemeAssets &assets)
{
    cfg.validate();
    BfrMessage msg;
    msg.scheme = s;
    msg.cfg = cfg;
    msg.bits_per_group = bfr_bits_per_group(s, cfg, assets);
    msg.groups.reserve(group_h.size());

    const CandidateSet *set = is_index_scheme(s) ? &require_candidates(s, cfg, assets) : nullptr;
    const PsiProfile *profile = s == SchemeId::FixedPsi ? &require_profile(cfg, assets) : nullptr;

    for (const CMatrix &h : group_h)
    {
        if (s == SchemeId::Ncm)
        {
            msg.groups.push_back({nearest_candidate(norm_cov(h), *set)});
            continue;
        }
        const CMatrix v = steering_matrix(h, cfg.n_c);
        if (s == SchemeId::Baseline)
            msg.groups.push_back(to_report_vector(quantize(givens_decompose(v, cfg), cfg.b_phi, cfg.b_psi), cfg));
        else if (s == SchemeId::FixedPsi)
            msg.groups.push_back(encode_partial(v, cfg, *profile).phi_indices);
        else
            msg.groups.push_back({nearest_candidate(make_point(set->method, h, v, cfg), *set)});
    }
    return msg;
}

BfrMessage encode(const ChannelRealization &r, SchemeId s, const SchemeAssets &assets)
{
    return encode(group_channels(r), s, r.cfg, assets);
}

std::vector<CMatrix> decode(const BfrMessage &msg, const SchemeAssets &assets)
{
    const MimoConfig &cfg = msg.cfg;
    cfg.validate();
    const std::vector<int> widths = field_widths(msg.scheme, cfg, msg.bits_per_group);
    const CandidateSet *set = is_index_scheme(msg.scheme) ? &require_candidates(msg.scheme, cfg, assets) : nullptr;
    const PsiProfile *profile = msg.scheme == SchemeId::FixedPsi ? &require_profile(cfg, assets) : nullptr;
    if (msg.bits_per_group != bfr_bits_per_group(msg.scheme, cfg, assets))
        throw CorruptData("BFR bits per group do not match the scheme assets");

    std::vector<CMatrix> out;
    out.reserve(msg.groups.size());
    for (std::size_t g = 0; g < msg.groups.size(); ++g)
    {
        const auto &p = msg.groups[g];
        if (p.size() != widths.size())
            throw CorruptData("BFR group " + std::to_string(g) + " has " + std::to_string(p.size()) +
                              " fields, expected " + std::to_string(widths.size()));
        for (std::size_t f = 0; f < p.size(); ++f)
            if (p[f] < 0 || (widths[f] < 31 && p[f] >= (1 << widths[f])))
                throw CorruptData("BFR group " + std::to_string(g) + " field " + std::to_string(f) + " out of range");

        switch (msg.scheme)
        {
        case SchemeId::Baseline:
            out.push_back(reconstruct_v(from_report_vector(p, cfg, cfg.b_phi, cfg.b_psi), cfg));
            break;
        case SchemeId::FixedPsi: out.push_back(decode_partial(p, cfg, *profile)); break;
        default:
            if (p[0] >= set->k)
                throw CorruptData("candidate index " + std::to_string(p[0]) + " >= k = " + std::to_string(set->k));
            out.push_back(set->finalized[static_cast<std::size_t>(p[0])]);
        }
    }
    return out;
}

std::vector<CMatrix> expand_to_subcarriers(const std::vector<CMatrix> &groups, int n_sc, int n_g)
{
    if (n_g < 1 || n_sc < 1)
        throw InvalidInput("expand_to_subcarriers: n_sc and n_g must be positive");
    if (static_cast<int>(groups.size()) != (n_sc + n_g - 1) / n_g)
        throw InvalidInput("expand_to_subcarriers: group count does not match n_sc / n_g");
    std::vector<CMatrix> out;
    out.reserve(static_cast<std::size_t>(n_sc));
    for (int s = 0; s < n_sc; ++s)
        out.push_back(groups[static_cast<std::size_t>(s / n_g)]);
    return out;
}

std::vector<std::uint8_t> pack_bits(const BfrMessage &msg)
{
    const std::vector<int> widths = field_widths(msg.scheme, msg.cfg, msg.bits_per_group);
    std::vector<std::uint8_t> out(static_cast<std::size_t>((msg.total_bits() + 7) / 8), 0);
    std::int64_t pos = 0;
    for (const auto &g : msg.groups)
    {
        if (g.size() != widths.size())
            throw InvalidInput("pack_bits: group payload does not match field layout");
        for (std::size_t f = 0; f < g.size(); ++f)
            for (int b = widths[f] - 1; b >= 0; --b, ++pos)
                if ((static_cast<unsigned>(g[f]) >> b) & 1u)
                    out[static_cast<std::size_t>(pos / 8)] |= static_cast<std::uint8_t>(0x80u >> (pos % 8));
    }
    return out;
}

void unpack_bits(const std::vector<std::uint8_t> &bytes, BfrMessage &msg, int n_groups)
{
    const std::vector<int> widths = field_widths(msg.scheme, msg.cfg, msg.bits_per_group);
    const std::int64_t need = static_cast<std::int64_t>(n_groups) * msg.bits_per_group;
    if (static_cast<std::int64_t>(bytes.size()) != (need + 7) / 8)
        throw CorruptData("BFR payload has " + std::to_string(bytes.size()) + " bytes, expected " +
                          std::to_string((need + 7) / 8));
    msg.groups.assign(static_cast<std::size_t>(n_groups), {});
    std::int64_t pos = 0;
    for (auto &g : msg.groups)
        for (int w : widths)
        {
            int v = 0;
            for (int b = 0; b < w; ++b, ++pos)
                v = (v << 1) | ((bytes[static_cast<std::size_t>(pos / 8)] >> (7 - pos % 8)) & 1);
            g.push_back(v);
        }
}

} // namespace csifb
