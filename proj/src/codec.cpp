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

#include "csifb/codec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace csifb
{

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr double kPsiClamp = 1e-12;

int stages(const MimoConfig &cfg) { return std::min(cfg.n_c, cfg.n_r - 1); }

void check_counts(const MimoConfig &cfg, std::size_t n_phi, std::size_t n_psi)
{
    const AngleCounts c = angle_counts(cfg);
    if (n_phi != static_cast<std::size_t>(c.n_phi) || n_psi != static_cast<std::size_t>(c.n_psi))
        throw InvalidInput("angle count mismatch: expected " + std::to_string(c.n_phi) + "/" +
                           std::to_string(c.n_psi) + " phi/psi, got " + std::to_string(n_phi) + "/" +
                           std::to_string(n_psi));
}

} // namespace

void MimoConfig::validate() const
{
    if (n_c < 1 || n_r < n_c || n_r > 8)
        throw InvalidInput("MimoConfig: require 1 <= n_c <= n_r <= 8");
    if (b_phi < 2 || b_phi > 9)
        throw InvalidInput("MimoConfig: b_phi must be in 2..9");
    if (b_psi < 1 || b_psi > 7)
        throw InvalidInput("MimoConfig: b_psi must be in 1..7");
    if (n_g < 1 || n_sc < 1)
        throw InvalidInput("MimoConfig: n_g and n_sc must be positive");
}

AngleCounts angle_counts(const MimoConfig &cfg)
{
    AngleCounts c;
    for (int i = 1; i <= stages(cfg); ++i)
    {
        c.n_phi += cfg.n_r - i;
        c.n_psi += cfg.n_r - i;
    }
    return c;
}

std::vector<AngleSlot> report_order(const MimoConfig &cfg)
{
    std::vector<AngleSlot> out;
    for (int i = 1; i <= stages(cfg); ++i)
    {
        for (int l = i; l <= cfg.n_r - 1; ++l)
            out.push_back({AngleKind::Phi, l, i});
        for (int l = i + 1; l <= cfg.n_r; ++l)
            out.push_back({AngleKind::Psi, l, i});
    }
    return out;
}

int quantize_phi(double phi, int b_phi)
{
    if (!std::isfinite(phi))
        throw InvalidInput("quantize_phi: non-finite angle");
    const int levels = 1 << b_phi;
    const double step = 2.0 * kPi / levels;
    const double x = (phi - step / 2.0) / step;
    long q = std::lround(std::floor(x + 0.5));
    q %= levels;
    if (q < 0)
        q += levels;
    return static_cast<int>(q);
}

double dequantize_phi(int q, int b_phi)
{
    const int levels = 1 << b_phi;
    if (q < 0 || q >= levels)
        throw InvalidInput("dequantize_phi: index " + std::to_string(q) + " out of range");
    return kPi * (1.0 / levels + static_cast<double>(q) / (levels / 2));
}

int quantize_psi(double psi, int b_psi)
{
    if (!std::isfinite(psi))
        throw InvalidInput("quantize_psi: non-finite angle");
    if (psi < -1e-9 || psi > kPi / 2.0 + 1e-9)
        throw InvalidInput("quantize_psi: angle outside [0, pi/2]");
    const int levels = 1 << b_psi;
    const double step = kPi / (2.0 * levels);
    const double x = (psi - step / 2.0) / step;
    // ties (x exactly half-integer up to rounding noise) resolve downward
    double q = std::ceil(x - 0.5);
    if (std::abs((x - std::floor(x)) - 0.5) < 1e-9)
        q = std::floor(x);
    return static_cast<int>(std::clamp(q, 0.0, static_cast<double>(levels - 1)));
}

double dequantize_psi(int q, int b_psi)
{
    const int levels = 1 << b_psi;
    if (q < 0 || q >= levels)
        throw InvalidInput("dequantize_psi: index " + std::to_string(q) + " out of range");
    return kPi * (1.0 / (4.0 * levels) + static_cast<double>(q) / (2.0 * levels));
}

QuantizedAngles quantize(const AngleSet &angles, int b_phi, int b_psi)
{
    QuantizedAngles q;
    q.b_phi = b_phi;
    q.b_psi = b_psi;
    q.phi_indices.reserve(angles.phis.size());
    q.psi_indices.reserve(angles.psis.size());
    for (double p : angles.phis)
        q.phi_indices.push_back(quantize_phi(p, b_phi));
    for (double p : angles.psis)
        q.psi_indices.push_back(quantize_psi(p, b_psi));
    return q;
}

AngleSet dequantize(const QuantizedAngles &q)
{
    AngleSet a;
    a.phis.reserve(q.phi_indices.size());
    a.psis.reserve(q.psi_indices.size());
    for (int i : q.phi_indices)
        a.phis.push_back(dequantize_phi(i, q.b_phi));
    for (int i : q.psi_indices)
        a.psis.push_back(dequantize_psi(i, q.b_psi));
    return a;
}

AngleSet givens_decompose(const CMatrix &v, const MimoConfig &cfg)
{
    cfg.validate();
    if (v.rows() != cfg.n_r || v.cols() != cfg.n_c)
        throw InvalidInput("givens_decompose: expected " + std::to_string(cfg.n_r) + "x" +
                           std::to_string(cfg.n_c) + " matrix");
    if (!v.allFinite())
        throw InvalidInput("givens_decompose: non-finite entries");
    if (gram_deviation(v) > 1e-6)
        throw InvalidInput("givens_decompose: columns are not orthonormal");

    CMatrix w = normalize_last_row_phase(v);
    AngleSet out;
    const int n_r = cfg.n_r;
    for (int i = 0; i < stages(cfg); ++i)
    {
        for (int l = i; l <= n_r - 2; ++l)
        {
            double phi = std::arg(w(l, i));
            if (phi < 0.0)
                phi += 2.0 * kPi;
            if (phi >= 2.0 * kPi)
                phi = 0.0;
            out.phis.push_back(phi);
            w.row(l) *= std::polar(1.0, -phi);
        }
        for (int l = i + 1; l <= n_r - 1; ++l)
        {
            const double a = w(i, i).real();
            const double b = w(l, i).real();
            const double psi = std::atan2(b, a);
            out.psis.push_back(std::clamp(psi, kPsiClamp, kPi / 2.0 - kPsiClamp));
            const double c = std::cos(psi);
            const double s = std::sin(psi);
            const CVector ri = w.row(i).transpose();
            const CVector rl = w.row(l).transpose();
            w.row(i) = (c * ri + s * rl).transpose();
            w.row(l) = (-s * ri + c * rl).transpose();
        }
    }
    return out;
}

CMatrix reconstruct_v(const AngleSet &angles, const MimoConfig &cfg)
{
    cfg.validate();
    check_counts(cfg, angles.phis.size(), angles.psis.size());
    const int n_r = cfg.n_r;
    CMatrix x = CMatrix::Identity(n_r, cfg.n_c);

    // offsets of each stage's angles in the generation-ordered lists
    std::vector<int> offset(stages(cfg) + 1, 0);
    for (int i = 0; i < stages(cfg); ++i)
        offset[i + 1] = offset[i] + (n_r - 1 - i);

    for (int i = stages(cfg) - 1; i >= 0; --i)
    {
        for (int l = n_r - 1; l >= i + 1; --l)
        {
            const double psi = angles.psis[offset[i] + (l - i - 1)];
            const double c = std::cos(psi);
            const double s = std::sin(psi);
            const CVector ri = x.row(i).transpose();
            const CVector rl = x.row(l).transpose();
            x.row(i) = (c * ri - s * rl).transpose();
            x.row(l) = (s * ri + c * rl).transpose();
        }
        for (int l = i; l <= n_r - 2; ++l)
            x.row(l) *= std::polar(1.0, angles.phis[offset[i] + (l - i)]);
    }
    return x;
}

CMatrix reconstruct_v(const QuantizedAngles &q, const MimoConfig &cfg)
{
    return reconstruct_v(dequantize(q), cfg);
}

std::vector<int> to_report_vector(const QuantizedAngles &q, const MimoConfig &cfg)
{
    check_counts(cfg, q.phi_indices.size(), q.psi_indices.size());
    std::vector<int> out;
    out.reserve(q.phi_indices.size() + q.psi_indices.size());
    std::size_t ip = 0, is = 0;
    for (const AngleSlot &slot : report_order(cfg))
        out.push_back(slot.kind == AngleKind::Phi ? q.phi_indices[ip++] : q.psi_indices[is++]);
    return out;
}

QuantizedAngles from_report_vector(const std::vector<int> &report, const MimoConfig &cfg, int b_phi,
                                   int b_psi)
{
    const auto order = report_order(cfg);
    if (report.size() != order.size())
        throw InvalidInput("from_report_vector: length mismatch");
    QuantizedAngles q;
    q.b_phi = b_phi;
    q.b_psi = b_psi;
    for (std::size_t j = 0; j < order.size(); ++j)
        (order[j].kind == AngleKind::Phi ? q.phi_indices : q.psi_indices).push_back(report[j]);
    return q;
}

PsiProfile fixed_psi_profile(const std::vector<std::vector<double>> &psi_samples, const MimoConfig &cfg)
{
    if (psi_samples.size() != static_cast<std::size_t>(angle_counts(cfg).n_psi))
        throw InvalidInput("fixed_psi_profile: expected one sample list per psi position");
    PsiProfile p;
    p.cfg = cfg;
    p.values.reserve(psi_samples.size());
    for (std::size_t pos = 0; pos < psi_samples.size(); ++pos)
    {
        if (psi_samples[pos].empty())
            throw InvalidInput("fixed_psi_profile: no samples at position " + std::to_string(pos));
        std::vector<double> s = psi_samples[pos];
        const auto mid = s.begin() + static_cast<std::ptrdiff_t>((s.size() - 1) / 2);
        std::nth_element(s.begin(), mid, s.end());
        p.values.push_back(*mid);
    }
    return p;
}

namespace
{

void check_profile(const MimoConfig &cfg, const PsiProfile &profile)
{
    if (profile.values.size() != static_cast<std::size_t>(angle_counts(cfg).n_psi))
        throw InvalidInput("psi profile length " + std::to_string(profile.values.size()) +
                           " does not match configuration");
}

} // namespace

QuantizedAngles encode_partial(const CMatrix &v, const MimoConfig &cfg, const PsiProfile &profile)
{
    check_profile(cfg, profile);
    const AngleSet a = givens_decompose(v, cfg);
    QuantizedAngles q;
    q.b_phi = cfg.b_phi;
    q.b_psi = cfg.b_psi;
    for (double phi : a.phis)
        q.phi_indices.push_back(quantize_phi(phi, cfg.b_phi));
    return q;
}

CMatrix reconstruct_partial(const std::vector<double> &phis, const MimoConfig &cfg,
                            const PsiProfile &profile)
{
    check_profile(cfg, profile);
    return reconstruct_v(AngleSet{phis, profile.values}, cfg);
}

CMatrix decode_partial(const std::vector<int> &phi_indices, const MimoConfig &cfg,
                       const PsiProfile &profile)
{
    std::vector<double> phis;
    phis.reserve(phi_indices.size());
    for (int q : phi_indices)
        phis.push_back(dequantize_phi(q, cfg.b_phi));
    return reconstruct_partial(phis, cfg, profile);
}

} // namespace csifb
