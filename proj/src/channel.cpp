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

#include "csifb/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace csifb
{

std::string to_string(ChannelModel m)
{
    static const char *names[] = {"A", "B", "C", "D", "E"};
    return names[static_cast<int>(m)];
}

ChannelModel channel_model_from_string(const std::string &name)
{
    if (name.size() == 1 && name[0] >= 'A' && name[0] <= 'E')
        return static_cast<ChannelModel>(name[0] - 'A');
    throw InvalidInput("unknown channel model '" + name + "' (expected A-E)");
}

void ChannelModelParams::validate() const
{
    if (n_taps < 1 || t_rms_ns < 0.0 || t_max_ns < t_rms_ns)
        throw InvalidInput("ChannelModelParams: require n_taps >= 1 and 0 <= t_rms <= t_max");
    if (n_taps == 1 && (t_rms_ns != 0.0 || t_max_ns != 0.0))
        throw InvalidInput("ChannelModelParams: a single tap implies zero delay spread");
}

ChannelModelParams ChannelModelParams::ieee(ChannelModel m)
{
    switch (m)
    {
    case ChannelModel::A: return {0.0, 0.0, 1};
    case ChannelModel::B: return {15.0, 80.0, 9};
    case ChannelModel::C: return {30.0, 200.0, 14};
    case ChannelModel::D: return {50.0, 390.0, 18};
    case ChannelModel::E: return {100.0, 730.0, 18};
    }
    throw InvalidInput("unknown channel model");
}

std::vector<double> tap_delays_ns(const ChannelModelParams &p)
{
    p.validate();
    std::vector<double> d(p.n_taps, 0.0);
    for (int i = 1; i < p.n_taps; ++i)
        d[i] = p.t_max_ns * i / (p.n_taps - 1);
    return d;
}

double rms_delay_spread(const std::vector<double> &delays_ns, const std::vector<double> &powers)
{
    double p0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < delays_ns.size(); ++i)
    {
        p0 += powers[i];
        m1 += powers[i] * delays_ns[i];
        m2 += powers[i] * delays_ns[i] * delays_ns[i];
    }
    if (p0 <= 0.0)
        return 0.0;
    m1 /= p0;
    m2 /= p0;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

namespace
{

std::vector<double> exponential_profile(const std::vector<double> &delays, double decay_ns)
{
    std::vector<double> p(delays.size());
    double total = 0.0;
    for (std::size_t i = 0; i < delays.size(); ++i)
    {
        p[i] = std::exp(-delays[i] / decay_ns);
        total += p[i];
    }
    for (double &x : p)
        x /= total;
    return p;
}

} // namespace

std::vector<double> tap_powers(const ChannelModelParams &p)
{
    const auto delays = tap_delays_ns(p);
    if (p.n_taps == 1)
        return {1.0};
    const double uniform_rms = rms_delay_spread(delays, std::vector<double>(delays.size(), 1.0));
    if (p.t_rms_ns >= uniform_rms)
        throw InvalidInput("tap_powers: RMS delay spread not reachable with a decaying profile");
    if (p.t_rms_ns == 0.0)
    {
        std::vector<double> out(delays.size(), 0.0);
        out[0] = 1.0;
        return out;
    }
    // RMS spread grows monotonically with the decay constant
    double lo = 1e-6, hi = 1e6;
    for (int it = 0; it < 200; ++it)
    {
        const double mid = std::sqrt(lo * hi);
        if (rms_delay_spread(delays, exponential_profile(delays, mid)) < p.t_rms_ns)
            lo = mid;
        else
            hi = mid;
    }
    return exponential_profile(delays, std::sqrt(lo * hi));
}

TapSet gen_taps(const ChannelModelParams &model, const MimoConfig &cfg, std::uint64_t seed)
{
    cfg.validate();
    TapSet taps;
    taps.delays_ns = tap_delays_ns(model);
    const auto powers = tap_powers(model);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    taps.gains.reserve(powers.size());
    for (double p : powers)
    {
        const double sigma = std::sqrt(p / 2.0);
        CMatrix g(cfg.n_c, cfg.n_r);
        for (Eigen::Index c = 0; c < g.cols(); ++c)
            for (Eigen::Index r = 0; r < g.rows(); ++r)
            {
                const double re = normal(rng);
                const double im = normal(rng);
                g(r, c) = cplx(sigma * re, sigma * im);
            }
        taps.gains.push_back(std::move(g));
    }
    return taps;
}

SubcarrierGrid SubcarrierGrid::wifi(int n_sc, double bw_hz)
{
    if (n_sc < 1 || !(bw_hz > 0.0))
        throw InvalidInput("SubcarrierGrid: n_sc and bandwidth must be positive");
    int fft = 1;
    while (fft < n_sc + 1)
        fft *= 2;
    const double spacing = bw_hz / fft;
    SubcarrierGrid g;
    g.freqs_hz.reserve(n_sc);
    if (n_sc % 2 == 0)
    {
        const int half = n_sc / 2;
        for (int k = -half; k <= half; ++k)
            if (k != 0)
                g.freqs_hz.push_back(k * spacing);
    }
    else
    {
        const int half = (n_sc - 1) / 2;
        for (int k = -half; k <= half; ++k)
            g.freqs_hz.push_back(k * spacing);
    }
    return g;
}

SubcarrierGrid SubcarrierGrid::full_period(int n, double bw_hz)
{
    if (n < 1 || !(bw_hz > 0.0))
        throw InvalidInput("SubcarrierGrid: n and bandwidth must be positive");
    SubcarrierGrid g;
    for (int k = 0; k < n; ++k)
        g.freqs_hz.push_back((k - n / 2) * bw_hz / n);
    return g;
}

std::vector<CMatrix> freq_response(const TapSet &taps, const SubcarrierGrid &grid)
{
    if (taps.gains.empty())
        throw InvalidInput("freq_response: no taps");
    std::vector<CMatrix> h;
    h.reserve(grid.freqs_hz.size());
    for (double f : grid.freqs_hz)
    {
        CMatrix acc = CMatrix::Zero(taps.gains[0].rows(), taps.gains[0].cols());
        for (std::size_t t = 0; t < taps.gains.size(); ++t)
        {
            const double phase = -2.0 * std::numbers::pi * f * taps.delays_ns[t] * 1e-9;
            acc += std::polar(1.0, phase) * taps.gains[t];
        }
        h.push_back(std::move(acc));
    }
    return h;
}

std::vector<CMatrix> freq_response(const TapSet &taps, int n_sc, double bw_hz)
{
    return freq_response(taps, SubcarrierGrid::wifi(n_sc, bw_hz));
}

ChannelRealization realize_channel(ChannelModel model, const MimoConfig &cfg, std::uint64_t seed,
                                   double bw_hz)
{
    const TapSet taps = gen_taps(ChannelModelParams::ieee(model), cfg, seed);
    return ChannelRealization{cfg, model, seed, freq_response(taps, cfg.n_sc, bw_hz)};
}

std::vector<CMatrix> group_channels(const ChannelRealization &r)
{
    std::vector<CMatrix> out;
    out.reserve(r.cfg.n_groups());
    for (int g = 0; g < r.cfg.n_groups(); ++g)
        out.push_back(r.h[static_cast<std::size_t>(g * r.cfg.n_g)]);
    return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index)
{
    // splitmix64 finalizer over the combined value
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace csifb
