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

// Command-line front end: gen-dataset, train, psi-profile, evaluate, inspect.

#include <cstdlib>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>

#include "csifb/experiment.hpp"

using namespace csifb;

namespace
{

constexpr const char *kSpecEnv = "CSIFB_SPEC";

void note(const std::string &msg) { std::cerr << msg << std::endl; }

struct Overrides
{
    std::optional<int> n_r, n_c, b_phi, b_psi, n_g, n_sc;
    std::optional<double> bw_hz;
    std::vector<std::string> models;
    std::vector<double> shares;
    std::optional<std::int64_t> count;
    std::optional<std::uint64_t> dataset_seed, train_seed, eval_seed;
    std::optional<int> k, w1, w2, max_iter, realizations, payload_bytes;
    std::vector<std::string> schemes;
    std::vector<double> snr_db;
    std::optional<std::string> eval_model;
    std::optional<double> p0, r_bfr;
    std::optional<std::string> dataset, candidates_dir, psi_profile, mcs_table, report_dir;

    void add_to(CLI::App &app)
    {
        auto *g = "Experiment";
        app.add_option("--n-r", n_r, "beamformer antennas")->group(g);
        app.add_option("--n-c", n_c, "spatial streams")->group(g);
        app.add_option("--b-phi", b_phi, "phi quantization bits")->group(g);
        app.add_option("--b-psi", b_psi, "psi quantization bits")->group(g);
        app.add_option("--n-g", n_g, "subcarrier grouping")->group(g);
        app.add_option("--n-sc", n_sc, "active subcarriers")->group(g);
        app.add_option("--bw", bw_hz, "bandwidth in Hz")->group(g);
        app.add_option("--models", models, "training channel models (A-E)")->group(g);
        app.add_option("--shares", shares, "share of each training model")->group(g);
        app.add_option("--count", count, "training realizations")->group(g);
        app.add_option("--dataset-seed", dataset_seed)->group(g);
        app.add_option("--k", k, "candidate count")->group(g);
        app.add_option("--w1", w1, "SCP phi candidates")->group(g);
        app.add_option("--w2", w2, "SCP psi candidates")->group(g);
        app.add_option("--max-iter", max_iter, "k-means iteration cap")->group(g);
        app.add_option("--train-seed", train_seed)->group(g);
        app.add_option("--schemes", schemes, "schemes to evaluate")->group(g);
        app.add_option("--snr", snr_db, "SNR grid in dB")->group(g);
        app.add_option("--eval-model", eval_model, "evaluation channel model")->group(g);
        app.add_option("--realizations", realizations, "evaluation channel draws")->group(g);
        app.add_option("--eval-seed", eval_seed)->group(g);
        app.add_option("--payload-bytes", payload_bytes)->group(g);
        app.add_option("--p0", p0, "PER threshold")->group(g);
        app.add_option("--r-bfr", r_bfr, "BFR rate in bit/s (default: MCS 0 rate)")->group(g);
        app.add_option("--dataset", dataset, "dataset file")->group(g);
        app.add_option("--candidates-dir", candidates_dir)->group(g);
        app.add_option("--psi-profile", psi_profile, "psi profile file")->group(g);
        app.add_option("--mcs-table", mcs_table, "MCS table JSON")->group(g);
        app.add_option("--report-dir", report_dir)->group(g);
    }

    void apply(ExperimentSpec &s) const
    {
        auto set = [](auto &dst, const auto &src) {
            if (src)
                dst = *src;
        };
        set(s.cfg.n_r, n_r);
        set(s.cfg.n_c, n_c);
        set(s.cfg.b_phi, b_phi);
        set(s.cfg.b_psi, b_psi);
        set(s.cfg.n_g, n_g);
        set(s.cfg.n_sc, n_sc);
        set(s.bw_hz, bw_hz);
        if (!models.empty())
        {
            s.models.clear();
            for (const auto &m : models)
                s.models.push_back(channel_model_from_string(m));
            if (shares.empty())
                s.shares.assign(s.models.size(), 1.0 / static_cast<double>(s.models.size()));
        }
        if (!shares.empty())
            s.shares = shares;
        set(s.dataset_count, count);
        set(s.dataset_seed, dataset_seed);
        set(s.k, k);
        set(s.scp.w1, w1);
        set(s.scp.w2, w2);
        set(s.max_iter, max_iter);
        set(s.train_seed, train_seed);
        if (!schemes.empty())
        {
            s.schemes.clear();
            for (const auto &x : schemes)
                s.schemes.push_back(scheme_from_string(x));
        }
        if (!snr_db.empty())
            s.snr_db = snr_db;
        if (eval_model)
            s.eval_model = channel_model_from_string(*eval_model);
        set(s.eval_realizations, realizations);
        set(s.eval_seed, eval_seed);
        set(s.payload_bytes, payload_bytes);
        set(s.timing.p0, p0);
        if (r_bfr)
            s.r_bfr_bps = *r_bfr;
        set(s.dataset_path, dataset);
        set(s.candidates_dir, candidates_dir);
        set(s.psi_profile_path, psi_profile);
        set(s.mcs_table_path, mcs_table);
        set(s.report_dir, report_dir);
    }
};

ExperimentSpec resolve_spec(const std::string &spec_flag, const Overrides &o)
{
    ExperimentSpec s;
    std::string path = spec_flag;
    if (path.empty())
        if (const char *env = std::getenv(kSpecEnv))
            path = env;
    if (!path.empty())
        s = spec_from_json(read_json_file(path));
    o.apply(s);
    s.validate();
    return s;
}

int run_inspect_encode(const ExperimentSpec &spec, const std::string &scheme_name, std::uint64_t seed,
                       const std::string &out_path)
{
    const SchemeId s = scheme_from_string(scheme_name);
    ExperimentSpec one = spec;
    one.schemes = {s};
    const auto assets = load_assets(one).at(s);
    const ChannelRealization ch = realize_channel(spec.eval_model, spec.cfg, seed, spec.bw_hz);
    const BfrMessage msg = encode(ch, s, assets);
    if (!out_path.empty())
    {
        write_bfr(out_path, msg);
        note("wrote " + out_path);
    }
    const auto v_hat = decode(msg, assets);
    const auto group_h = group_channels(ch);
    std::cout << "scheme " << to_string(s) << ", model " << to_string(spec.eval_model) << ", seed " << seed << '\n'
              << "groups " << msg.n_groups() << ", bits/group " << msg.bits_per_group << ", total "
              << msg.total_bits() << " bits\n";
    double acc = 0.0;
    for (std::size_t g = 0; g < group_h.size(); ++g)
        acc += gcs(steering_matrix(group_h[g], spec.cfg.n_c), v_hat[g]);
    std::cout << "mean group GCS " << acc / static_cast<double>(group_h.size()) << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Channel-state feedback compression toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string spec_path;
    app.add_option("--spec", spec_path, std::string("experiment spec JSON (default: $") + kSpecEnv + ")");
    Overrides o;
    o.add_to(app);

    auto *gen = app.add_subcommand("gen-dataset", "generate the training dataset");
    auto *trn = app.add_subcommand("train", "train a candidate set");
    std::vector<std::string> methods;
    trn->add_option("--method", methods, "IFOR, IFOR_PLUS, LQP, SCP, SV_SED, SV_CD, NCM or all")->required();
    auto *psi = app.add_subcommand("psi-profile", "median psi profile from the dataset");
    auto *ev = app.add_subcommand("evaluate", "sweep schemes over the SNR grid");
    auto *ins = app.add_subcommand("inspect", "pretty-print an artifact, or encode one channel");
    std::string file, enc_scheme, enc_out;
    std::uint64_t enc_seed = 1;
    ins->add_option("file", file, "dataset, candidate, BFR, profile or report file");
    ins->add_option("--encode", enc_scheme, "encode one evaluation channel with this scheme");
    ins->add_option("--channel-seed", enc_seed, "channel seed for --encode");
    ins->add_option("--out", enc_out, "write the encoded BFR here");
    auto *dump = app.add_subcommand("dump-spec", "print the resolved experiment spec");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try
    {
        const ExperimentSpec spec = resolve_spec(spec_path, o);
        if (*dump)
        {
            std::cout << to_json(spec).dump(2) << '\n';
        }
        else if (*gen)
        {
            const Dataset d = cmd_gen_dataset(spec);
            std::cout << "wrote " << spec.dataset_path << ": " << d.records.size() << " realizations, "
                      << d.records.size() * static_cast<std::size_t>(spec.cfg.n_groups()) << " group points\n";
        }
        else if (*trn)
        {
            std::vector<Method> todo;
            for (const auto &m : methods)
            {
                if (m == "all")
                    todo = {Method::Ifor, Method::IforPlus, Method::Lqp, Method::Scp,
                            Method::SvSed, Method::SvCd, Method::Ncm};
                else
                    todo.push_back(method_from_string(m));
            }
            for (Method m : todo)
            {
                note("training " + to_string(m) + " ...");
                const CandidateSet set = cmd_train(spec, m);
                std::cout << to_string(m) << ": k=" << set.k << " bits=" << set.bits()
                          << " iterations=" << set.info.iterations << " distortion=" << set.info.distortion
                          << " -> " << spec.candidates_path(m).string() << '\n';
            }
        }
        else if (*psi)
        {
            const PsiProfile p = cmd_psi_profile(spec);
            std::cout << "wrote " << spec.psi_profile_path << ":";
            for (double x : p.values)
                std::cout << ' ' << x / std::numbers::pi << "pi";
            std::cout << '\n';
        }
        else if (*ev)
        {
            const EvalResult r = cmd_evaluate(spec, note);
            std::cout << reports_csv(r.reports);
            note("wrote " + spec.report_dir + "/report.csv and report.json");
        }
        else if (*ins)
        {
            if (!enc_scheme.empty())
                return run_inspect_encode(spec, enc_scheme, enc_seed, enc_out);
            if (file.empty())
                throw InvalidInput("inspect needs a file or --encode SCHEME");
            std::cout << inspect(file);
        }
        return 0;
    }
    catch (const InvalidInput &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
