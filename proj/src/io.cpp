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

#include "csifb/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

namespace csifb
{

namespace
{

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

class Writer
{
public:
    std::vector<std::uint8_t> buf;

    template <typename T>
    void put(T x)
    {
        const auto *p = reinterpret_cast<const std::uint8_t *>(&x);
        buf.insert(buf.end(), p, p + sizeof(T));
    }
    void put(cplx z)
    {
        put(z.real());
        put(z.imag());
    }
};

class Reader
{
public:
    Reader(const std::vector<std::uint8_t> &b, std::string ctx) : buf_(b), ctx_(std::move(ctx)) {}

    template <typename T>
    T get()
    {
        need(sizeof(T));
        T x;
        std::memcpy(&x, buf_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return x;
    }
    cplx get_cplx()
    {
        const double re = get<double>();
        const double im = get<double>();
        return {re, im};
    }
    void need(std::size_t n) const
    {
        if (pos_ + n > buf_.size())
            throw CorruptData(ctx_ + ": truncated body");
    }
    bool done() const { return pos_ == buf_.size(); }

private:
    const std::vector<std::uint8_t> &buf_;
    std::size_t pos_ = 0;
    std::string ctx_;
};

void put_matrix_row_major(Writer &w, const CMatrix &m)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            w.put(m(r, c));
}

CMatrix get_matrix_row_major(Reader &rd, Eigen::Index rows, Eigen::Index cols)
{
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = rd.get_cplx();
    return m;
}

template <typename T>
T field(const json &j, const char *key, const std::string &ctx)
{
    if (!j.contains(key))
        throw CorruptData(ctx + ": missing field '" + key + "'");
    try
    {
        return j.at(key).get<T>();
    }
    catch (const json::exception &e)
    {
        throw CorruptData(ctx + ": field '" + key + "': " + e.what());
    }
}

void expect_format(const json &h, const char *format, const fs::path &path)
{
    if (!h.is_object() || h.value("format", std::string()) != format)
        throw CorruptData(path.string() + ": not a " + std::string(format) + " file");
}

double parse_code_rate(const json &j)
{
    if (j.is_number())
        return j.get<double>();
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos)
        return std::stod(s);
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

std::string fmt(double x)
{
    char b[64];
    std::snprintf(b, sizeof b, "%.10g", x);
    return b;
}

} // namespace

json to_json(const MimoConfig &cfg)
{
    return json{{"n_r", cfg.n_r}, {"n_c", cfg.n_c},   {"b_phi", cfg.b_phi},
                {"b_psi", cfg.b_psi}, {"n_g", cfg.n_g}, {"n_sc", cfg.n_sc}};
}

MimoConfig mimo_config_from_json(const json &j, MimoConfig c)
{
    if (!j.is_object())
        throw ConfigError("MIMO configuration must be a JSON object");
    try
    {
        c.n_r = j.value("n_r", c.n_r);
        c.n_c = j.value("n_c", c.n_c);
        c.b_phi = j.value("b_phi", c.b_phi);
        c.b_psi = j.value("b_psi", c.b_psi);
        c.n_g = j.value("n_g", c.n_g);
        c.n_sc = j.value("n_sc", c.n_sc);
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("MIMO configuration: ") + e.what());
    }
    c.validate();
    return c;
}

void write_container(const fs::path &path, const Container &c)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    const std::string head = c.header.dump();
    out.write(head.data(), static_cast<std::streamsize>(head.size()));
    out.put('\n');
    const std::uint64_t n = c.body.size();
    out.write(reinterpret_cast<const char *>(&n), sizeof n);
    out.write(reinterpret_cast<const char *>(c.body.data()), static_cast<std::streamsize>(c.body.size()));
    if (!out)
        throw IoError("write failed: " + path.string());
}

namespace
{

json read_header_line(std::istream &in, const fs::path &path)
{
    std::string line;
    if (!std::getline(in, line))
        throw CorruptData(path.string() + ": missing header");
    try
    {
        return json::parse(line);
    }
    catch (const json::exception &e)
    {
        throw CorruptData(path.string() + ": bad header: " + e.what());
    }
}

} // namespace

json read_container_header(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    return read_header_line(in, path);
}

Container read_container(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    Container c;
    c.header = read_header_line(in, path);
    std::uint64_t n = 0;
    if (!in.read(reinterpret_cast<char *>(&n), sizeof n))
        throw CorruptData(path.string() + ": missing body length");
    const auto here = in.tellg();
    in.seekg(0, std::ios::end);
    const auto remaining = static_cast<std::uint64_t>(in.tellg() - here);
    if (remaining != n)
        throw CorruptData(path.string() + ": body length " + std::to_string(n) + " but " +
                          std::to_string(remaining) + " bytes follow");
    in.seekg(here);
    c.body.resize(n);
    if (n > 0 && !in.read(reinterpret_cast<char *>(c.body.data()), static_cast<std::streamsize>(n)))
        throw IoError("read failed: " + path.string());
    return c;
}

void DatasetHeader::validate() const
{
    cfg.validate();
    if (models.empty() || models.size() != shares.size())
        throw InvalidInput("dataset: need one share per channel model");
    double total = 0.0;
    for (double s : shares)
    {
        if (!(s >= 0.0))
            throw InvalidInput("dataset: shares must be nonnegative");
        total += s;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw InvalidInput("dataset: shares must sum to 1");
    if (count < 0)
        throw InvalidInput("dataset: count must be nonnegative");
    if (!(bw_hz > 0.0))
        throw InvalidInput("dataset: bandwidth must be positive");
}

std::vector<std::int64_t> allocate_counts(const std::vector<double> &shares, std::int64_t count)
{
    std::vector<std::int64_t> n(shares.size());
    std::vector<std::pair<double, std::size_t>> rem;
    std::int64_t used = 0;
    for (std::size_t i = 0; i < shares.size(); ++i)
    {
        const double exact = shares[i] * static_cast<double>(count);
        n[i] = static_cast<std::int64_t>(std::floor(exact));
        used += n[i];
        rem.emplace_back(exact - std::floor(exact), i);
    }
    // largest remainders first, lower model index on ties
    std::stable_sort(rem.begin(), rem.end(), [](const auto &a, const auto &b) { return a.first > b.first; });
    for (std::size_t k = 0; used < count; ++k, ++used)
        ++n[rem[k % rem.size()].second];
    return n;
}

DatasetRecord make_record(ChannelModel m, std::uint64_t seed, const MimoConfig &cfg, double bw_hz)
{
    DatasetRecord r;
    r.model = m;
    r.seed = seed;
    for (const CMatrix &h : group_channels(realize_channel(m, cfg, seed, bw_hz)))
    {
        CMatrix v = steering_matrix(h, cfg.n_c);
        r.angles.push_back(to_report_vector(quantize(givens_decompose(v, cfg), cfg.b_phi, cfg.b_psi), cfg));
        r.v.push_back(std::move(v));
    }
    return r;
}

Dataset generate_dataset(const DatasetHeader &h)
{
    h.validate();
    Dataset d;
    d.header = h;
    const auto counts = allocate_counts(h.shares, h.count);
    std::uint64_t idx = 0;
    for (std::size_t m = 0; m < h.models.size(); ++m)
        for (std::int64_t i = 0; i < counts[m]; ++i, ++idx)
            d.records.push_back(make_record(h.models[m], derive_seed(h.seed, idx), h.cfg, h.bw_hz));
    return d;
}

void write_dataset(const fs::path &path, const Dataset &d)
{
    const DatasetHeader &h = d.header;
    json models = json::array();
    for (ChannelModel m : h.models)
        models.push_back(to_string(m));
    Container c;
    c.header = {{"format", "csifb-dataset"},
                {"version", 1},
                {"cfg", to_json(h.cfg)},
                {"models", models},
                {"shares", h.shares},
                {"seed", h.seed},
                {"count", static_cast<std::int64_t>(d.records.size())},
                {"bw_hz", h.bw_hz},
                {"n_groups", h.cfg.n_groups()},
                {"n_angles", angle_counts(h.cfg).total()}};
    Writer w;
    for (const auto &r : d.records)
    {
        w.put(static_cast<std::uint8_t>(r.model));
        w.put(r.seed);
        for (const auto &v : r.v)
            put_matrix_row_major(w, v);
        for (const auto &a : r.angles)
            for (int q : a)
                w.put(static_cast<std::uint16_t>(q));
    }
    c.body = std::move(w.buf);
    write_container(path, c);
}

Dataset read_dataset(const fs::path &path)
{
    const Container c = read_container(path);
    expect_format(c.header, "csifb-dataset", path);
    const std::string ctx = path.string();
    Dataset d;
    DatasetHeader &h = d.header;
    h.cfg = mimo_config_from_json(field<json>(c.header, "cfg", ctx));
    h.models.clear();
    for (const auto &m : field<std::vector<std::string>>(c.header, "models", ctx))
        h.models.push_back(channel_model_from_string(m));
    h.shares = field<std::vector<double>>(c.header, "shares", ctx);
    h.seed = field<std::uint64_t>(c.header, "seed", ctx);
    h.count = field<std::int64_t>(c.header, "count", ctx);
    h.bw_hz = field<double>(c.header, "bw_hz", ctx);
    const int n_groups = field<int>(c.header, "n_groups", ctx);
    const int n_angles = field<int>(c.header, "n_angles", ctx);
    if (n_groups != h.cfg.n_groups() || n_angles != angle_counts(h.cfg).total())
        throw CorruptData(ctx + ": header layout does not match its configuration");

    Reader rd(c.body, ctx);
    for (std::int64_t i = 0; i < h.count; ++i)
    {
        DatasetRecord r;
        const auto m = rd.get<std::uint8_t>();
        if (m > static_cast<std::uint8_t>(ChannelModel::E))
            throw CorruptData(ctx + ": bad channel model id in record " + std::to_string(i));
        r.model = static_cast<ChannelModel>(m);
        r.seed = rd.get<std::uint64_t>();
        for (int g = 0; g < n_groups; ++g)
            r.v.push_back(get_matrix_row_major(rd, h.cfg.n_r, h.cfg.n_c));
        for (int g = 0; g < n_groups; ++g)
        {
            std::vector<int> a(static_cast<std::size_t>(n_angles));
            for (int &q : a)
                q = rd.get<std::uint16_t>();
            r.angles.push_back(std::move(a));
        }
        d.records.push_back(std::move(r));
    }
    if (!rd.done())
        throw CorruptData(ctx + ": trailing bytes after " + std::to_string(h.count) + " records");
    return d;
}

FeedbackDataset feedback_dataset(const Dataset &d, Method m)
{
    const MimoConfig &cfg = d.header.cfg;
    if (m == Method::Ncm)
    {
        std::vector<CMatrix> hs;
        for (const auto &r : d.records)
            for (auto &h : group_channels(realize_channel(r.model, cfg, r.seed, d.header.bw_hz)))
                hs.push_back(std::move(h));
        return build_dataset(hs, cfg, m);
    }
    std::vector<CMatrix> vs;
    for (const auto &r : d.records)
        vs.insert(vs.end(), r.v.begin(), r.v.end());
    return build_dataset_from_steering(vs, cfg, m);
}

PsiProfile psi_profile_from_dataset(const Dataset &d)
{
    const MimoConfig &cfg = d.header.cfg;
    std::vector<std::vector<double>> samples(static_cast<std::size_t>(angle_counts(cfg).n_psi));
    for (const auto &r : d.records)
        for (const auto &v : r.v)
        {
            const AngleSet a = givens_decompose(v, cfg);
            for (std::size_t i = 0; i < a.psis.size(); ++i)
                samples[i].push_back(a.psis[i]);
        }
    return fixed_psi_profile(samples, cfg);
}

json to_json(const PsiProfile &p) { return json{{"config", to_json(p.cfg)}, {"values", p.values}}; }

PsiProfile psi_profile_from_json(const json &j)
{
    const std::string ctx = "psi profile";
    PsiProfile p;
    p.cfg = mimo_config_from_json(field<json>(j, "config", ctx));
    p.values = field<std::vector<double>>(j, "values", ctx);
    if (p.values.size() != static_cast<std::size_t>(angle_counts(p.cfg).n_psi))
        throw CorruptData("psi profile: length does not match its configuration");
    for (double x : p.values)
        if (!(x > 0.0 && x < std::numbers::pi / 2))
            throw CorruptData("psi profile: values must lie in (0, pi/2)");
    return p;
}

void save_psi_profile(const fs::path &path, const PsiProfile &p)
{
    write_text_file(path, to_json(p).dump(2) + "\n");
}

PsiProfile load_psi_profile(const fs::path &path) { return psi_profile_from_json(read_json_file(path)); }

void save_candidates(const fs::path &path, const CandidateSet &set)
{
    if (static_cast<int>(set.finalized.size()) != set.k)
        throw InvalidInput("save_candidates: set is not finalized");
    Writer w;
    auto block = [&](auto &&fill) {
        Writer b;
        fill(b);
        w.put(static_cast<std::uint64_t>(b.buf.size()));
        w.buf.insert(w.buf.end(), b.buf.begin(), b.buf.end());
    };
    for (const auto &m : set.finalized)
        block([&](Writer &b) { put_matrix_row_major(b, m); });
    auto real_block = [&](const RMatrix &m) {
        block([&](Writer &b) {
            for (Eigen::Index i = 0; i < m.size(); ++i)
                b.put(m.data()[i]);
        });
    };
    real_block(set.angle_centroids);
    real_block(set.psi_centroids);
    block([&](Writer &b) {
        for (Eigen::Index i = 0; i < set.complex_centroids.size(); ++i)
            b.put(set.complex_centroids.data()[i]);
    });

    Container c;
    c.header = {{"format", "csifb-candidates"},
                {"version", 1},
                {"method", to_string(set.method)},
                {"k", set.k},
                {"cfg", to_json(set.cfg)},
                {"seed", set.info.seed},
                {"distortion", set.info.distortion},
                {"iterations", set.info.iterations},
                {"n_points", static_cast<std::int64_t>(set.info.n_points)},
                {"scp", {{"w1", set.scp.w1}, {"w2", set.scp.w2}}},
                {"centroids",
                 {{"angle", {set.angle_centroids.rows(), set.angle_centroids.cols()}},
                  {"psi", {set.psi_centroids.rows(), set.psi_centroids.cols()}},
                  {"complex", {set.complex_centroids.rows(), set.complex_centroids.cols()}}}}};
    c.body = std::move(w.buf);
    write_container(path, c);
}

CandidateSet load_candidates(const fs::path &path)
{
    const Container c = read_container(path);
    expect_format(c.header, "csifb-candidates", path);
    const std::string ctx = path.string();
    CandidateSet set;
    try
    {
        set.method = method_from_string(field<std::string>(c.header, "method", ctx));
        set.cfg = mimo_config_from_json(field<json>(c.header, "cfg", ctx));
    }
    catch (const std::exception &e)
    {
        throw CorruptData(ctx + ": " + e.what());
    }
    set.k = field<int>(c.header, "k", ctx);
    set.info.seed = field<std::uint64_t>(c.header, "seed", ctx);
    set.info.distortion = field<double>(c.header, "distortion", ctx);
    set.info.iterations = field<int>(c.header, "iterations", ctx);
    set.info.n_points = field<std::int64_t>(c.header, "n_points", ctx);
    const json scp = field<json>(c.header, "scp", ctx);
    set.scp = ScpConfig{field<int>(scp, "w1", ctx), field<int>(scp, "w2", ctx)};
    if (set.k < 1)
        throw CorruptData(ctx + ": candidate count must be positive");
    const json dims = field<json>(c.header, "centroids", ctx);
    auto shape = [&](const char *key) {
        const auto v = field<std::vector<Eigen::Index>>(dims, key, ctx);
        if (v.size() != 2 || v[0] < 0 || v[1] < 0)
            throw CorruptData(ctx + ": bad centroid shape");
        return std::pair{v[0], v[1]};
    };

    Reader rd(c.body, ctx);
    auto open_block = [&](std::uint64_t expect) {
        const auto n = rd.get<std::uint64_t>();
        if (n != expect)
            throw CorruptData(ctx + ": block of " + std::to_string(n) + " bytes, expected " + std::to_string(expect));
    };
    const std::uint64_t mat_bytes = static_cast<std::uint64_t>(set.cfg.n_r) * set.cfg.n_c * 16;
    for (int j = 0; j < set.k; ++j)
    {
        open_block(mat_bytes);
        CMatrix m = get_matrix_row_major(rd, set.cfg.n_r, set.cfg.n_c);
        if (gram_deviation(m) > 1e-9)
            throw CorruptData(ctx + ": candidate " + std::to_string(j) + " is not orthonormal");
        set.finalized.push_back(std::move(m));
    }
    auto real_block = [&](const char *key) {
        const auto [r, cl] = shape(key);
        open_block(static_cast<std::uint64_t>(r * cl) * 8);
        RMatrix m(r, cl);
        for (Eigen::Index i = 0; i < m.size(); ++i)
            m.data()[i] = rd.get<double>();
        return m;
    };
    set.angle_centroids = real_block("angle");
    set.psi_centroids = real_block("psi");
    const auto [cr, cc] = shape("complex");
    open_block(static_cast<std::uint64_t>(cr * cc) * 16);
    set.complex_centroids.resize(cr, cc);
    for (Eigen::Index i = 0; i < set.complex_centroids.size(); ++i)
        set.complex_centroids.data()[i] = rd.get_cplx();
    if (!rd.done())
        throw CorruptData(ctx + ": trailing bytes");
    return set;
}

McsTable mcs_table_from_json(const json &j)
{
    const json &arr = j.is_array() ? j : j.contains("entries") ? j.at("entries") : json();
    if (!arr.is_array())
        throw ConfigError("MCS table: expected a list of entries");
    McsTable t;
    try
    {
        for (const auto &e : arr)
        {
            McsEntry m;
            m.index = e.at("index").get<int>();
            m.modulation = e.at("modulation").get<std::string>();
            m.code_rate = parse_code_rate(e.at("code_rate"));
            m.rate_bps = e.at("rate_bps").get<double>();
            m.eesm_beta = e.value("eesm_beta", 1.0);
            m.coding_gain_db = e.value("coding_gain_db", 0.0);
            t.entries.push_back(m);
        }
    }
    catch (const std::exception &e)
    {
        throw ConfigError(std::string("MCS table: ") + e.what());
    }
    t.validate();
    return t;
}

McsTable load_mcs_table(const fs::path &path)
{
    try
    {
        return mcs_table_from_json(read_json_file(path));
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_bfr(const fs::path &path, const BfrMessage &msg)
{
    Container c;
    c.header = {{"format", "csifb-bfr"},
                {"version", 1},
                {"scheme", to_string(msg.scheme)},
                {"cfg", to_json(msg.cfg)},
                {"n_groups", msg.n_groups()},
                {"bits_per_group", msg.bits_per_group},
                {"total_bits", msg.total_bits()}};
    c.body = pack_bits(msg);
    write_container(path, c);
}

BfrMessage read_bfr(const fs::path &path)
{
    const Container c = read_container(path);
    expect_format(c.header, "csifb-bfr", path);
    const std::string ctx = path.string();
    BfrMessage msg;
    try
    {
        msg.scheme = scheme_from_string(field<std::string>(c.header, "scheme", ctx));
        msg.cfg = mimo_config_from_json(field<json>(c.header, "cfg", ctx));
    }
    catch (const std::exception &e)
    {
        throw CorruptData(ctx + ": " + e.what());
    }
    msg.bits_per_group = field<int>(c.header, "bits_per_group", ctx);
    const int n_groups = field<int>(c.header, "n_groups", ctx);
    if (msg.bits_per_group < 0 || n_groups < 0)
        throw CorruptData(ctx + ": negative sizes");
    unpack_bits(c.body, msg, n_groups);
    if (msg.total_bits() != field<std::int64_t>(c.header, "total_bits", ctx))
        throw CorruptData(ctx + ": total_bits does not match the layout");
    return msg;
}

std::string reports_csv(const std::vector<LinkReport> &rows)
{
    std::ostringstream out;
    out << "scheme,snr_db,mean_gcs,nmse,sel_mcs,l_bfr_bits,per,goodput_bps\n";
    for (const auto &r : rows)
        out << r.scheme << ',' << fmt(r.snr_db) << ',' << fmt(r.mean_gcs) << ',' << fmt(r.nmse) << ','
            << (r.sel_mcs ? std::to_string(*r.sel_mcs) : std::string("none")) << ',' << r.l_bfr_bits << ','
            << fmt(r.per) << ',' << fmt(r.goodput_bps) << '\n';
    return out.str();
}

json reports_json(const std::vector<LinkReport> &rows)
{
    json arr = json::array();
    for (const auto &r : rows)
        arr.push_back({{"scheme", r.scheme},
                       {"snr_db", r.snr_db},
                       {"mean_gcs", r.mean_gcs},
                       {"nmse", r.nmse},
                       {"sel_mcs", r.sel_mcs ? json(*r.sel_mcs) : json(nullptr)},
                       {"l_bfr_bits", r.l_bfr_bits},
                       {"per", r.per},
                       {"goodput_bps", r.goodput_bps},
                       {"per_by_mcs", r.per_by_mcs}});
    return arr;
}

json read_json_file(const fs::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    try
    {
        return json::parse(in);
    }
    catch (const json::exception &e)
    {
        throw ConfigError(path.string() + ": invalid JSON: " + e.what());
    }
}

void write_text_file(const fs::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out)
        throw IoError("write failed: " + path.string());
}

} // namespace csifb
