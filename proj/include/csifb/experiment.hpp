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

// Experiment description and the end-to-end commands behind the CLI.

#ifndef CSIFB_EXPERIMENT_HPP
#define CSIFB_EXPERIMENT_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csifb/io.hpp"
#include "csifb/link.hpp"
#include "csifb/schemes.hpp"

namespace csifb
{

struct ExperimentSpec
{
    MimoConfig cfg;
    double bw_hz = 20e6;

    // training data
    std::vector<ChannelModel> models{ChannelModel::A, ChannelModel::B, ChannelModel::C, ChannelModel::D,
                                     ChannelModel::E};
    std::vector<double> shares{0.2, 0.2, 0.2, 0.2, 0.2};
    std::int64_t dataset_count = 1640; // realizations; x61 groups ~ 1e5 points
    std::uint64_t dataset_seed = 1;

    // candidate learning
    int k = 1024;
    ScpConfig scp;
    int max_iter = 50;
    std::uint64_t train_seed = 1;

    // evaluation
    std::vector<SchemeId> schemes = all_schemes();
    std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    ChannelModel eval_model = ChannelModel::D;
    int eval_realizations = 500;
    std::uint64_t eval_seed = 2;
    int payload_bytes = 1000;
    TimingParams timing;
    std::optional<double> r_bfr_bps; // default: MCS 0 rate

    // paths
    std::string dataset_path = "data/dataset.bin";
    std::string candidates_dir = "data/candidates";
    std::string psi_profile_path = "data/psi_profile.json";
    std::string mcs_table_path = "config/mcs_eht_20mhz_2ss.json";
    std::string report_dir = "reports";

    void validate() const;
    DatasetHeader dataset_header() const;
    fs::path candidates_path(Method m) const;
};

json to_json(const ExperimentSpec &s);
/// Fields present in `j` override `base`.
ExperimentSpec spec_from_json(const json &j, ExperimentSpec base = {});

struct EvalResult
{
    std::vector<LinkReport> reports;                             // scheme-major, then SNR
    std::map<SchemeId, std::vector<double>> gcs_per_realization; // mean GCS of each channel draw
};

using Progress = std::function<void(const std::string &)>;

EvalResult evaluate(const ExperimentSpec &spec, const std::map<SchemeId, SchemeAssets> &assets,
                    const McsTable &mcs, const Progress &progress = {});

/// Loads the assets each listed scheme needs; ConfigError names the scheme
/// whose asset is missing.
std::map<SchemeId, SchemeAssets> load_assets(const ExperimentSpec &spec);

Dataset cmd_gen_dataset(const ExperimentSpec &spec);
CandidateSet cmd_train(const ExperimentSpec &spec, Method m);
PsiProfile cmd_psi_profile(const ExperimentSpec &spec);
EvalResult cmd_evaluate(const ExperimentSpec &spec, const Progress &progress = {});
/// Human-readable summary of any artifact file.
std::string inspect(const fs::path &path);

} // namespace csifb

#endif
