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

#include "csifb/link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csifb
{

namespace
{

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

} // namespace

int McsEntry::bits_per_symbol() const
{
    if (modulation == "BPSK")
        return 1;
    if (modulation == "QPSK")
        return 2;
    for (int b : {4, 6, 8, 10, 12})
        if (modulation == std::to_string(1 << b) + "QAM")
            return b;
    throw ConfigError("unknown modulation '" + modulation + "'");
}

void McsTable::validate() const
{
    if (entries.size() != 12)
        throw ConfigError("MCS table must have 12 entries, found " + std::to_string(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i)
    {
        const McsEntry &e = entries[i];
        if (e.index != static_cast<int>(i))
            throw ConfigError("MCS table entries must be ordered by index 0..11");
        if (!(e.rate_bps > 0.0) || !(e.code_rate > 0.0 && e.code_rate <= 1.0) || !(e.eesm_beta > 0.0))
            throw ConfigError("MCS " + std::to_string(i) + ": rate, code rate and beta must be positive");
        e.bits_per_symbol();
        if (i > 0 && !(e.rate_bps > entries[i - 1].rate_bps))
            throw ConfigError("MCS data rates must increase strictly with index");
    }
}

const McsEntry &McsTable::at(int index) const
{
    if (index < 0 || index >= static_cast<int>(entries.size()))
        throw InvalidInput("MCS index " + std::to_string(index) + " out of range");
    return entries[static_cast<std::size_t>(index)];
}

void TimingParams::validate() const
{
    if (!(t_ndpa_us > 0 && t_sifs_us > 0 && t_preamble_us > 0 && t_ack_us > 0))
        throw ConfigError("timing durations must be positive");
    if (!(p0 > 0.0 && p0 < 1.0))
        throw ConfigError("PER threshold must lie in (0, 1)");
}

RVector post_bf_sinr_gram(const CMatrix &gram, double snr)
{
    const Eigen::Index n = gram.rows();
    const CMatrix a = CMatrix::Identity(n, n) + (snr / static_cast<double>(n)) * gram;
    const CMatrix inv = a.inverse();
    RVector out(n);
    for (Eigen::Index i = 0; i < n; ++i)
        out[i] = std::max(0.0, 1.0 / inv(i, i).real() - 1.0);
    return out;
}

RVector post_bf_sinr(const CMatrix &h, const CMatrix &v_hat, double snr)
{
    if (h.cols() != v_hat.rows())
        throw InvalidInput("post_bf_sinr: channel has " + std::to_string(h.cols()) + " transmit antennas, precoder " +
                           std::to_string(v_hat.rows()));
    if (!(snr >= 0.0))
        throw InvalidInput("post_bf_sinr: negative SNR");
    const CMatrix g = h * v_hat;
    return post_bf_sinr_gram(g.adjoint() * g, snr);
}

double eesm(const std::vector<double> &sinrs, double beta)
{
    if (sinrs.empty())
        throw InvalidInput("eesm: no SINR values");
    // log-mean-exp of -sinr/beta, shifted by the max for stability
    double m = -std::numeric_limits<double>::infinity();
    for (double s : sinrs)
        m = std::max(m, -s / beta);
    if (m == -std::numeric_limits<double>::infinity())
        return std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (double s : sinrs)
        acc += std::exp(-s / beta - m);
    return -beta * (m + std::log(acc / static_cast<double>(sinrs.size())));
}

double symbol_error_rate(const McsEntry &mcs, double snr)
{
    if (std::isinf(snr))
        return 0.0;
    const int b = mcs.bits_per_symbol();
    if (b == 1)
        return qfunc(std::sqrt(2.0 * snr));
    const double m = std::ldexp(1.0, b);
    const double p = 2.0 * (1.0 - 1.0 / std::sqrt(m)) * qfunc(std::sqrt(3.0 * snr / (m - 1.0)));
    return 1.0 - (1.0 - p) * (1.0 - p);
}

double per_estimate(const std::vector<double> &sinrs, const McsEntry &mcs, double payload_bits)
{
    if (!(payload_bits > 0.0))
        throw InvalidInput("per_estimate: payload must be positive");
    const double eff = eesm(sinrs, mcs.eesm_beta);
    const double gain = std::pow(10.0, mcs.coding_gain_db / 10.0);
    const double symbols = payload_bits / (mcs.bits_per_symbol() * mcs.code_rate);
    return std::min(1.0, symbols * symbol_error_rate(mcs, eff * gain));
}

std::optional<int> select_mcs(const std::vector<double> &per_by_mcs, double p0)
{
    for (int i = static_cast<int>(per_by_mcs.size()) - 1; i >= 0; --i)
        if (per_by_mcs[static_cast<std::size_t>(i)] <= p0)
            return i;
    return std::nullopt;
}

double sounding_duration(int n_r, const TimingParams &t, double l_bfr_bits, double r_bfr_bps)
{
    if (!(r_bfr_bps > 0.0))
        throw InvalidInput("sounding_duration: BFR rate must be positive");
    return t.t_ndpa_us + t.t_sifs_us + t.t_ndp_us(n_r) + t.t_sifs_us + t.t_preamble_us + l_bfr_bits / r_bfr_bps * 1e6;
}

double goodput(double l_data_bits, const TimingParams &t, double t_sounding_us, double r_data_bps, double p_e)
{
    if (!(p_e >= 0.0 && p_e < 1.0))
        throw InvalidInput("goodput: packet error rate must lie in [0, 1)");
    if (!(r_data_bps > 0.0))
        throw InvalidInput("goodput: data rate must be positive");
    const double t_data = t.t_preamble_us + l_data_bits / r_data_bps * 1e6;
    const double total = t_sounding_us + t_data / (1.0 - p_e) + t.t_sifs_us + t.t_ack_us;
    return l_data_bits / (total * 1e-6);
}

double nmse(const CMatrix &v, const CMatrix &v_hat)
{
    if (v.rows() != v_hat.rows() || v.cols() != v_hat.cols())
        throw InvalidInput("nmse: dimension mismatch");
    const double den = v.squaredNorm();
    if (!(den > 0.0))
        throw InvalidInput("nmse: reference matrix is zero");
    double num = 0.0;
    for (Eigen::Index j = 0; j < v.cols(); ++j)
    {
        const cplx inner = v_hat.col(j).dot(v.col(j));
        const double mag = std::abs(inner);
        const cplx rot = mag > 0.0 ? inner / mag : cplx(1.0, 0.0);
        num += (v.col(j) - rot * v_hat.col(j)).squaredNorm();
    }
    return num / den;
}

} // namespace csifb
