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

#include "csifb/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <fstream>
#include <sstream>

namespace csifb
{

void ExperimentSpec::validate() const
{
    cfg.validate();
    dataset_header().validate();
    if (snr_db.empty() || !std::is_sorted(snr_db.begin(), snr_db.end()))
        throw InvalidInput("spec: SNR grid must be nonempty and sorted");
    if (schemes.empty())
        throw InvalidInput("spec: no schemes selected");
    if (k < 1 || max_iter < 1)
        throw InvalidInput("spec: k and max_iter must be positive");
    if (eval_realizations < 1)
        throw InvalidInput("spec: eval_realizations must be positive");
    if (payload_bytes < 1)
        throw InvalidInput("spec: payload_bytes must be positive");
    if (r_bfr_bps && !(*r_bfr_bps > 0.0))
        throw InvalidInput("spec: r_bfr_bps must be positive");
    timing.validate();
}

DatasetHeader ExperimentSpec::dataset_header() const
{
    DatasetHeader h;
    h.cfg = cfg;
    h.models = models;
    h.shares = shares;
    h.seed = dataset_seed;
    h.count = dataset_count;
    h.bw_hz = bw_hz;
    return h;
}

fs::path ExperimentSpec::candidates_path(Method m) const
{
    return fs::path(candidates_dir) / (to_string(m) + ".cand");
}

json to_json(const ExperimentSpec &s)
{
    json models = json::array(), schemes = json::array();
    for (auto m : s.models)
        models.push_back(to_string(m));
    for (auto x : s.schemes)
        schemes.push_back(to_string(x));
    json j = {{"cfg", to_json(s.cfg)},
              {"bw_hz", s.bw_hz},
              {"models", models},
              {"shares", s.shares},
              {"dataset_count", s.dataset_count},
              {"dataset_seed", s.dataset_seed},
              {"k", s.k},
              {"scp", {{"w1", s.scp.w1}, {"w2", s.scp.w2}}},
              {"max_iter", s.max_iter},
              {"train_seed", s.train_seed},
              {"schemes", schemes},
              {"snr_db", s.snr_db},
              {"eval_model", to_string(s.eval_model)},
              {"eval_realizations", s.eval_realizations},
              {"eval_seed", s.eval_seed},
              {"payload_bytes", s.payload_bytes},
              {"timing",
               {{"t_ndpa_us", s.timing.t_ndpa_us},
                {"t_sifs_us", s.timing.t_sifs_us},
                {"t_preamble_us", s.timing.t_preamble_us},
                {"t_ack_us", s.timing.t_ack_us},
                {"p0", s.timing.p0}}},
              {"r_bfr_bps", s.r_bfr_bps ? json(*s.r_bfr_bps) : json(nullptr)},
              {"dataset_path", s.dataset_path},
              {"candidates_dir", s.candidates_dir},
              {"psi_profile_path", s.psi_profile_path},
              {"mcs_table_path", s.mcs_table_path},
              {"report_dir", s.report_dir}};
    return j;
}

ExperimentSpec spec_from_json(const json &j, ExperimentSpec s)
{
    if (!j.is_object())
        throw ConfigError("spec must be a JSON object");
    static const std::set<std::string> known = {
        "cfg",        "bw_hz",         "models",      "shares",         "dataset_count",     "dataset_seed",
        "k",          "scp",           "max_iter",    "train_seed",     "schemes",           "snr_db",
        "eval_model", "eval_realizations", "eval_seed", "payload_bytes", "timing",           "r_bfr_bps",
        "dataset_path", "candidates_dir", "psi_profile_path", "mcs_table_path", "report_dir"};
    for (const auto &[key, _] : j.items())
        if (!known.count(key))
            throw ConfigError("spec: unknown field '" + key + "'");
    try
    {
        if (j.contains("cfg"))
            s.cfg = mimo_config_from_json(j.at("cfg"), s.cfg);
        s.bw_hz = j.value("bw_hz", s.bw_hz);
        if (j.contains("models"))
        {
            s.models.clear();
            for (const auto &m : j.at("models"))
                s.models.push_back(channel_model_from_string(m.get<std::string>()));
        }
        s.shares = j.value("shares", s.shares);
        s.dataset_count = j.value("dataset_count", s.dataset_count);
        s.dataset_seed = j.value("dataset_seed", s.dataset_seed);
        s.k = j.value("k", s.k);
        if (j.contains("scp"))
        {
            s.scp.w1 = j.at("scp").value("w1", s.scp.w1);
            s.scp.w2 = j.at("scp").value("w2", s.scp.w2);
        }
        s.max_iter = j.value("max_iter", s.max_iter);
        s.train_seed = j.value("train_seed", s.train_seed);
        if (j.contains("schemes"))
        {
            s.schemes.clear();
            for (const auto &x : j.at("schemes"))
                s.schemes.push_back(scheme_from_string(x.get<std::string>()));
        }
        s.snr_db = j.value("snr_db", s.snr_db);
        if (j.contains("eval_model"))
            s.eval_model = channel_model_from_string(j.at("eval_model").get<std::string>());
        s.eval_realizations = j.value("eval_realizations", s.eval_realizations);
        s.eval_seed = j.value("eval_seed", s.eval_seed);
        s.payload_bytes = j.value("payload_bytes", s.payload_bytes);
        if (j.contains("timing"))
        {
            const json &t = j.at("timing");
            s.timing.t_ndpa_us = t.value("t_ndpa_us", s.timing.t_ndpa_us);
            s.timing.t_sifs_us = t.value("t_sifs_us", s.timing.t_sifs_us);
            s.timing.t_preamble_us = t.value("t_preamble_us", s.timing.t_preamble_us);
            s.timing.t_ack_us = t.value("t_ack_us", s.timing.t_ack_us);
            s.timing.p0 = t.value("p0", s.timing.p0);
        }
        if (j.contains("r_bfr_bps"))
            s.r_bfr_bps = j.at("r_bfr_bps").is_null() ? std::nullopt
                                                      : std::optional<double>(j.at("r_bfr_bps").get<double>());
        s.dataset_path = j.value("dataset_path", s.dataset_path);
        s.candidates_dir = j.value("candidates_dir", s.candidates_dir);
        s.psi_profile_path = j.value("psi_profile_path", s.psi_profile_path);
        s.mcs_table_path = j.value("mcs_table_path", s.mcs_table_path);
        s.report_dir = j.value("report_dir", s.report_dir);
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("spec: ") + e.what());
    }
    catch (const InvalidInput &e)
    {
        throw ConfigError(std::string("spec: ") + e.what());
    }
    return s;
}

EvalResult evaluate(const ExperimentSpec &spec, const std::map<SchemeId, SchemeAssets> &assets, const McsTable &mcs,
                    const Progress &progress)
{
    spec.validate();
    mcs.validate();
    const MimoConfig &cfg = spec.cfg;
    const std::size_t n_snr = spec.snr_db.size(), n_mcs = mcs.entries.size(), n_s = spec.schemes.size();
    const double payload_bits = 8.0 * spec.payload_bytes;

    std::vector<SchemeAssets> sa;
    std::vector<int> bits;
    for (SchemeId s : spec.schemes)
    {
        const auto it = assets.find(s);
        sa.push_back(it == assets.end() ? SchemeAssets{} : it->second);
        bits.push_back(bfr_bits_per_group(s, cfg, sa.back()));
    }
    std::vector<double> snr_lin;
    for (double d : spec.snr_db)
        snr_lin.push_back(std::pow(10.0, d / 10.0));

    std::vector<double> per_sum(n_s * n_snr * n_mcs, 0.0), gcs_sum(n_s, 0.0), nmse_sum(n_s, 0.0);
    EvalResult res;
    std::vector<double> sinrs(static_cast<std::size_t>(cfg.n_sc * cfg.n_c));

    for (int r = 0; r < spec.eval_realizations; ++r)
    {
        const ChannelRealization ch = realize_channel(spec.eval_model, cfg, derive_seed(spec.eval_seed, r), spec.bw_hz);
        std::vector<CMatrix> v_true;
        v_true.reserve(ch.h.size());
        for (const auto &h : ch.h)
            v_true.push_back(steering_matrix(h, cfg.n_c));
        const auto group_h = group_channels(ch);

        for (std::size_t si = 0; si < n_s; ++si)
        {
            const auto v_hat = expand_to_subcarriers(decode(encode(group_h, spec.schemes[si], cfg, sa[si]), sa[si]),
                                                     cfg.n_sc, cfg.n_g);
            double g_acc = 0.0, n_acc = 0.0;
            std::vector<CMatrix> grams;
            grams.reserve(v_hat.size());
            for (std::size_t k = 0; k < v_hat.size(); ++k)
            {
                g_acc += gcs(v_true[k], v_hat[k]);
                n_acc += nmse(v_true[k], v_hat[k]);
                const CMatrix g = ch.h[k] * v_hat[k];
                grams.push_back(g.adjoint() * g);
            }
            const double g_mean = g_acc / static_cast<double>(v_hat.size());
            gcs_sum[si] += g_mean;
            nmse_sum[si] += n_acc / static_cast<double>(v_hat.size());
            res.gcs_per_realization[spec.schemes[si]].push_back(g_mean);

            for (std::size_t i = 0; i < n_snr; ++i)
            {
                std::size_t pos = 0;
                for (const auto &gm : grams)
                {
                    const RVector s = post_bf_sinr_gram(gm, snr_lin[i]);
                    for (Eigen::Index c = 0; c < s.size(); ++c)
                        sinrs[pos++] = s[c];
                }
                for (std::size_t m = 0; m < n_mcs; ++m)
                    per_sum[(si * n_snr + i) * n_mcs + m] += per_estimate(sinrs, mcs.entries[m], payload_bits);
            }
        }
        if (progress && ((r + 1) % 50 == 0 || r + 1 == spec.eval_realizations))
            progress("evaluated " + std::to_string(r + 1) + "/" + std::to_string(spec.eval_realizations) +
                     " channel realizations");
    }

    const double n = spec.eval_realizations;
    const double r_bfr = spec.r_bfr_bps ? *spec.r_bfr_bps : mcs.at(0).rate_bps;
    for (std::size_t si = 0; si < n_s; ++si)
    {
        const long long l_bfr = static_cast<long long>(cfg.n_groups()) * bits[si];
        const double t_sound = sounding_duration(cfg.n_r, spec.timing, static_cast<double>(l_bfr), r_bfr);
        for (std::size_t i = 0; i < n_snr; ++i)
        {
            LinkReport rep;
            rep.scheme = to_string(spec.schemes[si]);
            rep.snr_db = spec.snr_db[i];
            rep.mean_gcs = gcs_sum[si] / n;
            rep.nmse = nmse_sum[si] / n;
            rep.l_bfr_bits = l_bfr;
            for (std::size_t m = 0; m < n_mcs; ++m)
                rep.per_by_mcs.push_back(per_sum[(si * n_snr + i) * n_mcs + m] / n);
            rep.sel_mcs = select_mcs(rep.per_by_mcs, spec.timing.p0);
            if (rep.sel_mcs)
            {
                rep.per = rep.per_by_mcs[static_cast<std::size_t>(*rep.sel_mcs)];
                rep.goodput_bps = goodput(payload_bits, spec.timing, t_sound, mcs.at(*rep.sel_mcs).rate_bps, rep.per);
            }
            else
            {
                rep.per = rep.per_by_mcs[0];
                rep.goodput_bps = 0.0;
            }
            res.reports.push_back(std::move(rep));
        }
    }
    return res;
}

std::map<SchemeId, SchemeAssets> load_assets(const ExperimentSpec &spec)
{
    std::map<SchemeId, SchemeAssets> out;
    for (SchemeId s : spec.schemes)
    {
        SchemeAssets a;
        if (s == SchemeId::FixedPsi)
        {
            if (!fs::exists(spec.psi_profile_path))
                throw ConfigError(to_string(s) + ": psi profile not found at " + spec.psi_profile_path +
                                  " (run psi-profile first)");
            auto p = std::make_shared<PsiProfile>(load_psi_profile(spec.psi_profile_path));
            if (p->cfg.n_r != spec.cfg.n_r || p->cfg.n_c != spec.cfg.n_c)
                throw ConfigError(to_string(s) + ": psi profile was built for a different MIMO configuration");
            a.psi = std::move(p);
        }
        else if (is_index_scheme(s))
        {
            const fs::path p = spec.candidates_path(scheme_method(s));
            if (!fs::exists(p))
                throw ConfigError(to_string(s) + ": candidate set not found at " + p.string() +
                                  " (run train --method " + to_string(scheme_method(s)) + ")");
            a.candidates = std::make_shared<CandidateSet>(load_candidates(p));
        }
        out[s] = std::move(a);
    }
    return out;
}

namespace
{

void ensure_parent(const fs::path &p)
{
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
}

Dataset load_matching_dataset(const ExperimentSpec &spec)
{
    if (!fs::exists(spec.dataset_path))
        throw IoError("dataset not found at " + spec.dataset_path + " (run gen-dataset first)");
    Dataset d = read_dataset(spec.dataset_path);
    if (!(d.header.cfg == spec.cfg))
        throw InvalidInput("dataset " + spec.dataset_path + " was generated for a different MIMO configuration");
    return d;
}

} // namespace

Dataset cmd_gen_dataset(const ExperimentSpec &spec)
{
    spec.validate();
    Dataset d = generate_dataset(spec.dataset_header());
    ensure_parent(spec.dataset_path);
    write_dataset(spec.dataset_path, d);
    return d;
}

CandidateSet cmd_train(const ExperimentSpec &spec, Method m)
{
    spec.validate();
    const Dataset d = load_matching_dataset(spec);
    TrainOptions opt;
    opt.k = spec.k;
    opt.max_iter = spec.max_iter;
    opt.seed = spec.train_seed;
    opt.scp = spec.scp;
    CandidateSet set = train(feedback_dataset(d, m), opt);
    const fs::path p = spec.candidates_path(m);
    ensure_parent(p);
    save_candidates(p, set);
    return set;
}

PsiProfile cmd_psi_profile(const ExperimentSpec &spec)
{
    spec.validate();
    const PsiProfile p = psi_profile_from_dataset(load_matching_dataset(spec));
    ensure_parent(spec.psi_profile_path);
    save_psi_profile(spec.psi_profile_path, p);
    return p;
}

EvalResult cmd_evaluate(const ExperimentSpec &spec, const Progress &progress)
{
    spec.validate();
    const McsTable mcs = load_mcs_table(spec.mcs_table_path);
    const auto assets = load_assets(spec);
    EvalResult res = evaluate(spec, assets, mcs, progress);
    fs::create_directories(spec.report_dir);
    write_text_file(fs::path(spec.report_dir) / "report.csv", reports_csv(res.reports));
    write_text_file(fs::path(spec.report_dir) / "report.json", reports_json(res.reports).dump(2) + "\n");
    return res;
}

std::string inspect(const fs::path &path)
{
    if (!fs::exists(path))
        throw IoError("no such file: " + path.string());
    std::ifstream probe(path, std::ios::binary);
    const int first = probe.peek();
    std::ostringstream out;
    if (first == '{')
    {
        json h;
        try
        {
            h = read_container_header(path);
        }
        catch (const CorruptData &)
        {
            // plain JSON document spread over several lines
            out << read_json_file(path).dump(2) << '\n';
            return out.str();
        }
        const std::string format = h.value("format", std::string());
        if (format == "csifb-dataset")
        {
            const Dataset d = read_dataset(path);
            std::map<std::string, int> per_model;
            for (const auto &r : d.records)
                ++per_model[to_string(r.model)];
            out << "dataset  " << path.string() << '\n' << h.dump(2) << "\nrecords per model:";
            for (const auto &[m, c] : per_model)
                out << ' ' << m << '=' << c;
            out << "\ngroup points: " << d.records.size() * static_cast<std::size_t>(d.header.cfg.n_groups()) << '\n';
        }
        else if (format == "csifb-candidates")
        {
            const CandidateSet set = load_candidates(path);
            double worst = 0.0;
            for (const auto &m : set.finalized)
                worst = std::max(worst, gram_deviation(m));
            out << "candidate set  " << path.string() << '\n'
                << h.dump(2) << "\nfeedback bits per group: " << set.bits()
                << "\nmax Gram deviation: " << worst << '\n';
        }
        else if (format == "csifb-bfr")
        {
            const BfrMessage msg = read_bfr(path);
            out << "beamforming report  " << path.string() << '\n' << h.dump(2) << '\n';
            const int show = std::min(msg.n_groups(), 4);
            for (int g = 0; g < show; ++g)
            {
                out << "group " << g << ':';
                for (int x : msg.groups[static_cast<std::size_t>(g)])
                    out << ' ' << x;
                out << '\n';
            }
            if (msg.n_groups() > show)
                out << "... " << msg.n_groups() - show << " more groups\n";
        }
        else
        {
            out << read_json_file(path).dump(2) << '\n';
        }
        return out.str();
    }
    if (first == '[')
    {
        out << read_json_file(path).dump(2) << '\n';
        return out.str();
    }
    std::string line;
    std::getline(probe, line);
    if (line.rfind("scheme,", 0) == 0)
    {
        out << line << '\n';
        while (std::getline(probe, line))
            out << line << '\n';
        return out.str();
    }
    throw CorruptData(path.string() + ": unrecognized file format");
}

} // namespace csifb
