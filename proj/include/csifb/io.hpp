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

// File formats. Binary artifacts share one container layout: a UTF-8 JSON
// header line, an 8-byte little-endian body length, then the body. Complex
// values are stored as little-endian f64 (real, imag) pairs.

#ifndef CSIFB_IO_HPP
#define CSIFB_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csifb/candidates.hpp"
#include "csifb/channel.hpp"
#include "csifb/codec.hpp"
#include "csifb/link.hpp"
#include "csifb/schemes.hpp"

namespace csifb
{

using json = nlohmann::json;
namespace fs = std::filesystem;

json to_json(const MimoConfig &cfg);
MimoConfig mimo_config_from_json(const json &j, MimoConfig base = {});

struct Container
{
    json header;
    std::vector<std::uint8_t> body;
};

void write_container(const fs::path &path, const Container &c);
Container read_container(const fs::path &path);
/// Container header without reading the body.
json read_container_header(const fs::path &path);

// -- datasets ---------------------------------------------------------------

struct DatasetHeader
{
    MimoConfig cfg;
    std::vector<ChannelModel> models{ChannelModel::A, ChannelModel::B, ChannelModel::C, ChannelModel::D,
                                     ChannelModel::E};
    std::vector<double> shares{0.2, 0.2, 0.2, 0.2, 0.2};
    std::uint64_t seed = 1;
    std::int64_t count = 0; // realizations
    double bw_hz = 20e6;

    void validate() const;
};

struct DatasetRecord
{
    ChannelModel model = ChannelModel::D;
    std::uint64_t seed = 0;
    std::vector<CMatrix> v;                // per group, phase-normalized steering matrix
    std::vector<std::vector<int>> angles;  // per group, report-order indices at (b_phi, b_psi)
};

struct Dataset
{
    DatasetHeader header;
    std::vector<DatasetRecord> records;
};

/// Per-model realization counts for `count` draws, largest-remainder rounding.
std::vector<std::int64_t> allocate_counts(const std::vector<double> &shares, std::int64_t count);

DatasetRecord make_record(ChannelModel m, std::uint64_t seed, const MimoConfig &cfg, double bw_hz);
Dataset generate_dataset(const DatasetHeader &h);
void write_dataset(const fs::path &path, const Dataset &d);
Dataset read_dataset(const fs::path &path);

/// Flattens every group of every record into the method's representation.
/// NCM regenerates the channel from each record's (model, seed).
FeedbackDataset feedback_dataset(const Dataset &d, Method m);

/// Per-position median of the raw psi angles over all records and groups.
PsiProfile psi_profile_from_dataset(const Dataset &d);

// -- assets -----------------------------------------------------------------

json to_json(const PsiProfile &p);
PsiProfile psi_profile_from_json(const json &j);
void save_psi_profile(const fs::path &path, const PsiProfile &p);
PsiProfile load_psi_profile(const fs::path &path);

void save_candidates(const fs::path &path, const CandidateSet &set);
CandidateSet load_candidates(const fs::path &path);

McsTable mcs_table_from_json(const json &j);
McsTable load_mcs_table(const fs::path &path);

void write_bfr(const fs::path &path, const BfrMessage &msg);
BfrMessage read_bfr(const fs::path &path);

// -- reports ----------------------------------------------------------------

std::string reports_csv(const std::vector<LinkReport> &rows);
json reports_json(const std::vector<LinkReport> &rows);

/// Reads a whole JSON file, naming the path in any error.
json read_json_file(const fs::path &path);
void write_text_file(const fs::path &path, const std::string &text);

} // namespace csifb

#endif
