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

// Compressed beamforming codec: Givens decomposition of a steering matrix
// into ordered phi/psi angles, angle quantization, reconstruction, and the
// fixed-psi partial feedback variant.

#ifndef CSIFB_CODEC_HPP
#define CSIFB_CODEC_HPP

#include <vector>

#include "csifb/matrix.hpp"

namespace csifb
{

struct MimoConfig
{
    int n_r = 8;   // beamformer antennas
    int n_c = 2;   // spatial streams (= beamformee antennas)
    int b_phi = 6;
    int b_psi = 4;
    int n_g = 4;   // subcarrier grouping
    int n_sc = 242;

    /// Throws InvalidInput when any field is outside its legal range.
    void validate() const;

    /// Number of fed-back subcarrier groups, ceil(n_sc / n_g).
    int n_groups() const { return (n_sc + n_g - 1) / n_g; }

    bool operator==(const MimoConfig &) const = default;
};

struct AngleCounts
{
    int n_phi = 0;
    int n_psi = 0;
    int total() const { return n_phi + n_psi; }
};

AngleCounts angle_counts(const MimoConfig &cfg);

enum class AngleKind
{
    Phi,
    Psi
};

/// One entry of the beamforming report vector: phi_{l,i} or psi_{l,i},
/// 1-based indices as in the angle tables of the standard.
struct AngleSlot
{
    AngleKind kind;
    int l;
    int i;
};

/// Report order: for each column i, phi_{i..n_r-1, i} then psi_{i+1..n_r, i}.
std::vector<AngleSlot> report_order(const MimoConfig &cfg);

/// Raw angles in radians. Both lists are in generation order (column by
/// column), which is also their relative order in the report vector.
struct AngleSet
{
    std::vector<double> phis;
    std::vector<double> psis;
};

struct QuantizedAngles
{
    std::vector<int> phi_indices;
    std::vector<int> psi_indices;
    int b_phi = 6;
    int b_psi = 4;
};

// phi grid: pi * (1/2^b + q/2^(b-1)), circular nearest neighbour.
int quantize_phi(double phi, int b_phi);
double dequantize_phi(int q, int b_phi);

// psi grid: pi * (1/2^(b+2) + q/2^(b+1)), linear nearest, ties round down.
int quantize_psi(double psi, int b_psi);
double dequantize_psi(int q, int b_psi);

QuantizedAngles quantize(const AngleSet &angles, int b_phi, int b_psi);
AngleSet dequantize(const QuantizedAngles &q);

/// Givens decomposition of an n_r x n_c matrix with orthonormal columns.
/// Columns are first phase-normalized so the last row is real and
/// nonnegative. Throws InvalidInput if the Gram deviation exceeds 1e-6.
AngleSet givens_decompose(const CMatrix &v, const MimoConfig &cfg);

/// Product of diagonal phase and Givens factors applied to the padded
/// identity. Always has orthonormal columns.
CMatrix reconstruct_v(const AngleSet &angles, const MimoConfig &cfg);
CMatrix reconstruct_v(const QuantizedAngles &q, const MimoConfig &cfg);

/// Interleave phi/psi indices into report order, and back.
std::vector<int> to_report_vector(const QuantizedAngles &q, const MimoConfig &cfg);
QuantizedAngles from_report_vector(const std::vector<int> &report, const MimoConfig &cfg,
                                   int b_phi, int b_psi);

/// Fixed psi values shared by both ends of the link.
struct PsiProfile
{
    MimoConfig cfg;
    std::vector<double> values;
};

/// Per-position median (lower median for even counts).
PsiProfile fixed_psi_profile(const std::vector<std::vector<double>> &psi_samples,
                             const MimoConfig &cfg);

/// Only phi indices are produced; psi_indices stays empty.
QuantizedAngles encode_partial(const CMatrix &v, const MimoConfig &cfg, const PsiProfile &profile);
CMatrix decode_partial(const std::vector<int> &phi_indices, const MimoConfig &cfg,
                       const PsiProfile &profile);
/// Unquantized variant: raw phis combined with the profile psis.
CMatrix reconstruct_partial(const std::vector<double> &phis, const MimoConfig &cfg,
                            const PsiProfile &profile);

} // namespace csifb

#endif
