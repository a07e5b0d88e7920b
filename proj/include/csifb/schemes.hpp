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

// Beamformee encode / beamformer decode for every feedback scheme, plus the
// per-group bit accounting used for the sounding overhead.

#ifndef CSIFB_SCHEMES_HPP
#define CSIFB_SCHEMES_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "csifb/candidates.hpp"
#include "csifb/channel.hpp"
#include "csifb/codec.hpp"

namespace csifb
{

enum class SchemeId
{
    Baseline, // full compressed beamforming report
    FixedPsi, // phi only, psi from a shared profile
    Ifor,
    IforPlus,
    Lqp,
    Scp,
    SvSed,
    SvCd,
    Ncm
};

std::string to_string(SchemeId s);
SchemeId scheme_from_string(const std::string &name);
const std::vector<SchemeId> &all_schemes();

bool is_index_scheme(SchemeId s);
/// Candidate-learning method behind an index scheme.
Method scheme_method(SchemeId s);
SchemeId scheme_of(Method m);

struct SchemeAssets
{
    std::shared_ptr<const CandidateSet> candidates; // index schemes
    std::shared_ptr<const PsiProfile> psi;          // FIXED_PSI
};

int bfr_bits_per_group(SchemeId s, const MimoConfig &cfg, int k = 1, ScpConfig scp = {});
int bfr_bits_per_group(SchemeId s, const MimoConfig &cfg, const SchemeAssets &assets);

/// Bit width of each field in one group's payload.
std::vector<int> field_widths(SchemeId s, const MimoConfig &cfg, int bits_per_group);

struct BfrMessage
{
    SchemeId scheme = SchemeId::Baseline;
    MimoConfig cfg;
    int bits_per_group = 0;
    std::vector<std::vector<int>> groups; // one payload per subcarrier group

    int n_groups() const { return static_cast<int>(groups.size()); }
    std::int64_t total_bits() const { return static_cast<std::int64_t>(n_groups()) * bits_per_group; }
};

BfrMessage encode(const std::vector<CMatrix> &group_h, SchemeId s, const MimoConfig &cfg,
                  const SchemeAssets &assets);
BfrMessage encode(const ChannelRealization &r, SchemeId s, const SchemeAssets &assets);

/// Per-group steering matrices. Throws CorruptData on out-of-range fields.
std::vector<CMatrix> decode(const BfrMessage &msg, const SchemeAssets &assets);

/// Zero-order hold of group matrices over n_sc subcarriers.
std::vector<CMatrix> expand_to_subcarriers(const std::vector<CMatrix> &groups, int n_sc, int n_g);

/// Packed big-endian bit string of every field, zero-padded to whole bytes.
std::vector<std::uint8_t> pack_bits(const BfrMessage &msg);
/// Inverse of pack_bits for a message whose scheme, cfg, bits_per_group and
/// group count are already known.
void unpack_bits(const std::vector<std::uint8_t> &bytes, BfrMessage &msg, int n_groups);

} // namespace csifb

#endif
