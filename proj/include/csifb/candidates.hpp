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

// Candidate-set learning: per-method feedback representations, distances,
// k-means training, and finalization of centroids into steering matrices.

#ifndef CSIFB_CANDIDATES_HPP
#define CSIFB_CANDIDATES_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "csifb/channel.hpp"
#include "csifb/codec.hpp"
#include "csifb/kmeans.hpp"
#include "csifb/matrix.hpp"

namespace csifb
{

enum class Method
{
    Ifor,     // angle-index vectors, SED
    IforPlus, // angle-index vectors, circular phi differences
    Lqp,      // angle-index vectors with 2-bit psi, SED
    Scp,      // phi and psi clustered separately, SED
    SvSed,    // serialized V, SED
    SvCd,     // serialized V, cosine distance
    Ncm       // normalized covariance H^H H, SED
};

std::string to_string(Method m);
Method method_from_string(const std::string &name);
bool is_angle_method(Method m);

struct ScpConfig
{
    int w1 = 256; // phi candidates
    int w2 = 4;   // psi candidates
};

// Feedback representations.
struct AngleIndexVector
{
    RVector indices; // report order
};
struct SerializedV
{
    CVector values; // column-major: column 0 first
};
struct NormCovMatrix
{
    CMatrix k; // n_r x n_r Hermitian, unit Frobenius norm
};
using FeedbackPoint = std::variant<AngleIndexVector, SerializedV, NormCovMatrix>;

/// Dominant n_c right singular vectors of a group channel (n_c x n_r),
/// phase-normalized on the last row.
CMatrix steering_matrix(const CMatrix &h, int n_c);

/// Configuration the method actually quantizes with (LQP uses b_psi = 2).
MimoConfig method_config(Method m, const MimoConfig &cfg);

AngleIndexVector angle_point(const CMatrix &v, const MimoConfig &cfg);
SerializedV serialize_v(const CMatrix &v);
CMatrix unserialize_v(const CVector &s, int n_r, int n_c);
NormCovMatrix norm_cov(const CMatrix &h);

/// Representation used by `m` for one group: channel h and its steering v.
FeedbackPoint make_point(Method m, const CMatrix &h, const CMatrix &v, const MimoConfig &cfg);

double dist_sed(const RVector &a, const RVector &b);
double dist_sed(const CVector &a, const CVector &b);
double dist_cd(const CVector &a, const CVector &b);
double dist_ncm(const CMatrix &a, const CMatrix &b);
double dist_effective(const RVector &a, const RVector &b, const MimoConfig &cfg);

EffectiveDistance effective_distance(const MimoConfig &cfg);

/// Centroid of a cluster under the method's rule. `previous` is the current
/// centroid (used by the circular and spherical rules).
FeedbackPoint centroid_update(const std::vector<FeedbackPoint> &cluster, Method m, const MimoConfig &cfg,
                              const FeedbackPoint &previous);

/// Training points, one column per fed-back subcarrier group.
struct FeedbackDataset
{
    Method method = Method::Ifor;
    MimoConfig cfg;   // method configuration
    RMatrix angles;   // angle methods: report-order indices
    CMatrix complex;  // SV: serialized V; NCM: column-major unit-norm K
    Eigen::Index size() const { return is_angle_method(method) ? angles.cols() : complex.cols(); }
};

/// Builds the dataset from realizations (every group of every realization).
FeedbackDataset build_dataset(const std::vector<ChannelRealization> &realizations, const MimoConfig &cfg,
                              Method m);
/// Same, from per-group channels.
FeedbackDataset build_dataset(const std::vector<CMatrix> &group_h, const MimoConfig &cfg, Method m);
/// Angle and serialized-V methods can be fed steering matrices directly.
FeedbackDataset build_dataset_from_steering(const std::vector<CMatrix> &group_v, const MimoConfig &cfg,
                                            Method m);

/// Rows of the report vector that carry phi (first) and psi (second).
std::pair<std::vector<int>, std::vector<int>> scp_rows(const MimoConfig &cfg);

struct TrainingInfo
{
    std::uint64_t seed = 0;
    int iterations = 0;
    double distortion = 0.0;
    Eigen::Index n_points = 0;
};

struct CandidateSet
{
    Method method = Method::Ifor;
    MimoConfig cfg;  // method configuration
    int k = 1;
    ScpConfig scp;
    RMatrix angle_centroids;   // angle methods, integer-valued; SCP: phi part (n_phi x w1)
    RMatrix psi_centroids;     // SCP: psi part (n_psi x w2)
    CMatrix complex_centroids; // SV / NCM
    std::vector<CMatrix> finalized;
    TrainingInfo info;

    /// Centroid j in the method representation; for SCP the combined vector
    /// of phi candidate j / w2 and psi candidate j % w2.
    FeedbackPoint centroid(int j) const;
    /// Feedback bits per subcarrier group.
    int bits() const;
};

struct TrainOptions
{
    int k = 1024;
    int max_iter = 50;
    std::uint64_t seed = 1;
    ScpConfig scp;
};

/// k-means training followed by finalization.
CandidateSet train(const FeedbackDataset &data, const TrainOptions &opt);

/// Rounds angle centroids to valid indices (phi circularly, psi clamped).
RMatrix round_angle_centroids(const RMatrix &c, const MimoConfig &cfg);

/// Steering matrices (orthonormal columns) for every candidate of the set.
std::vector<CMatrix> finalize(const CandidateSet &set);

/// argmin of the method distance over candidates, lowest index on ties.
int nearest_candidate(const FeedbackPoint &query, const CandidateSet &set);

bool is_power_of_two(long long x);

} // namespace csifb

#endif
