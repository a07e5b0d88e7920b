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

// Random multipath MIMO channels with uniform tap spacing and an
// exponential power-delay profile fitted to the RMS delay spread of the
// IEEE 802.11 indoor models A-E.

#ifndef CSIFB_CHANNEL_HPP
#define CSIFB_CHANNEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "csifb/codec.hpp"
#include "csifb/matrix.hpp"

namespace csifb
{

enum class ChannelModel : std::uint8_t
{
    A = 0,
    B,
    C,
    D,
    E
};

std::string to_string(ChannelModel m);
ChannelModel channel_model_from_string(const std::string &name);

struct ChannelModelParams
{
    double t_rms_ns = 0.0;
    double t_max_ns = 0.0;
    int n_taps = 1;

    void validate() const;
    static ChannelModelParams ieee(ChannelModel m);
};

/// Tap delays uniformly spaced on [0, t_max].
std::vector<double> tap_delays_ns(const ChannelModelParams &p);

/// Exponential power-delay profile normalized to unit total power, with the
/// decay constant chosen so the RMS delay spread equals t_rms.
std::vector<double> tap_powers(const ChannelModelParams &p);

double rms_delay_spread(const std::vector<double> &delays_ns, const std::vector<double> &powers);

/// One complex gain matrix (n_t x n_r, n_t = n_c) per tap.
struct TapSet
{
    std::vector<double> delays_ns;
    std::vector<CMatrix> gains;
};

/// i.i.d. circularly-symmetric Gaussian taps, deterministic in `seed`.
TapSet gen_taps(const ChannelModelParams &model, const MimoConfig &cfg, std::uint64_t seed);

struct SubcarrierGrid
{
    std::vector<double> freqs_hz;

    /// Wi-Fi style grid: spacing bw / fft with fft the next power of two
    /// above n_sc; even n_sc skips DC (242 tones at 20 MHz -> +-1..+-121).
    static SubcarrierGrid wifi(int n_sc, double bw_hz);
    /// n tones spanning exactly one period: f_k = (k - n/2) * bw / n.
    static SubcarrierGrid full_period(int n, double bw_hz);
};

std::vector<CMatrix> freq_response(const TapSet &taps, const SubcarrierGrid &grid);
std::vector<CMatrix> freq_response(const TapSet &taps, int n_sc, double bw_hz);

struct ChannelRealization
{
    MimoConfig cfg;
    ChannelModel model = ChannelModel::D;
    std::uint64_t seed = 0;
    std::vector<CMatrix> h; // per subcarrier, n_c x n_r
};

ChannelRealization realize_channel(ChannelModel model, const MimoConfig &cfg, std::uint64_t seed,
                                   double bw_hz = 20e6);

/// Channel matrix of the fed-back tone of each subcarrier group.
std::vector<CMatrix> group_channels(const ChannelRealization &r);

/// Mixes a base seed and a stream index into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

} // namespace csifb

#endif
