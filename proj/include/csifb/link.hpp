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

// Link abstraction: post-beamforming SINR, EESM-based PER, MCS selection
// and the sounding-aware goodput model.

#ifndef CSIFB_LINK_HPP
#define CSIFB_LINK_HPP

#include <optional>
#include <string>
#include <vector>

#include "csifb/matrix.hpp"

namespace csifb
{

struct McsEntry
{
    int index = 0;
    std::string modulation; // BPSK, QPSK, 16QAM, 64QAM, 256QAM, 1024QAM
    double code_rate = 0.5;
    double rate_bps = 0.0;
    double eesm_beta = 1.0;
    double coding_gain_db = 0.0;

    int bits_per_symbol() const;
};

struct McsTable
{
    std::vector<McsEntry> entries;

    /// 12 entries, indices 0..11 in order, strictly increasing rates.
    void validate() const;
    const McsEntry &at(int index) const;
};

struct TimingParams
{
    double t_ndpa_us = 28.0;
    double t_sifs_us = 16.0;
    double t_preamble_us = 64.0;
    double t_ack_us = 50.0;
    double p0 = 1e-2;

    double t_ndp_us(int n_r) const { return 48.0 + 8.0 * n_r; }
    void validate() const;
};

/// Per-stream SINR of a linear MMSE receiver on G = h * v_hat with total
/// transmit power snr split evenly over the v_hat.cols() streams.
RVector post_bf_sinr(const CMatrix &h, const CMatrix &v_hat, double snr);
/// Same, from the stream Gram matrix G^H G.
RVector post_bf_sinr_gram(const CMatrix &gram, double snr);

/// Exponential effective SNR mapping (linear in, linear out).
double eesm(const std::vector<double> &sinrs, double beta);

/// Uncoded symbol error probability of the entry's constellation.
double symbol_error_rate(const McsEntry &mcs, double snr);

double per_estimate(const std::vector<double> &sinrs, const McsEntry &mcs, double payload_bits);

std::optional<int> select_mcs(const std::vector<double> &per_by_mcs, double p0);

/// Sounding exchange in microseconds; r_bfr in bit/s.
double sounding_duration(int n_r, const TimingParams &t, double l_bfr_bits, double r_bfr_bps);

/// Goodput in bit/s; t_sounding in microseconds.
double goodput(double l_data_bits, const TimingParams &t, double t_sounding_us, double r_data_bps, double p_e);

/// ||V - V_hat||_F^2 / ||V||_F^2 after aligning each column's phase.
double nmse(const CMatrix &v, const CMatrix &v_hat);

struct LinkReport
{
    std::string scheme;
    double snr_db = 0.0;
    double mean_gcs = 0.0;
    double nmse = 0.0;
    std::vector<double> per_by_mcs;
    std::optional<int> sel_mcs;
    long long l_bfr_bits = 0;
    double per = 1.0;
    double goodput_bps = 0.0;
};

} // namespace csifb

#endif
