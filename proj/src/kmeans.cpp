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

#include "csifb/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csifb
{

namespace
{

double wrap(double x, double period)
{
    double r = std::fmod(x, period);
    if (r < 0.0)
        r += period;
    if (r >= period)
        r = 0.0;
    return r;
}

double circular_cost(std::span<const double> values, double period, double m)
{
    double acc = 0.0;
    for (double v : values)
    {
        const double d = wrap(v - m, period);
        const double f = std::min(d, period - d);
        acc += f * f;
    }
    return acc;
}

} // namespace

double circular_frechet_mean(std::span<const double> values, double period, double previous)
{
    if (values.empty())
        return previous;
    std::vector<double> s(values.begin(), values.end());
    for (double &v : s)
        v = wrap(v, period);
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double sum = 0.0;
    for (double v : s)
        sum += v;

    // The cost is piecewise quadratic with kinks at the antipodes of the
    // samples; each piece's minimizer is the mean of one unwrapping where the
    // j smallest samples are lifted by a full period. An unwrapping's own
    // variance bounds the circular cost at its mean from above and is tight
    // for the optimal one, so the smallest variance identifies the optimum.
    double sumsq = 0.0;
    for (double v : s)
        sumsq += v * v;
    double lo = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    double su = sum, sq = sumsq;
    for (std::size_t j = 0; j < s.size(); ++j)
    {
        const double c = sq - su * su / n;
        if (j == 0 || c < lo - 1e-9 * std::max(1.0, lo))
        {
            lo = c;
            arg = j;
        }
        su += period;
        sq += 2.0 * period * s[j] + period * period;
    }
    const double prev = wrap(previous, period);
    if (circular_cost(s, period, prev) <= lo + 1e-9 * std::max(1.0, lo))
        return prev;
    return wrap((sum + period * static_cast<double>(arg)) / n, period);
}

Vector<double> CircularMeanRule::operator()(const Matrix<double> &points, std::span<const Eigen::Index> members,
                                            const Vector<double> &previous) const
{
    if (members.empty())
        return previous;
    Vector<double> out(points.rows());
    std::vector<double> buf(members.size());
    for (Eigen::Index r = 0; r < points.rows(); ++r)
    {
        if (circular[r] != 0.0)
        {
            for (std::size_t i = 0; i < members.size(); ++i)
                buf[i] = points(r, members[i]);
            out[r] = circular_frechet_mean(buf, period, previous[r]);
        }
        else
        {
            double acc = 0.0;
            for (Eigen::Index i : members)
                acc += points(r, i);
            out[r] = acc / static_cast<double>(members.size());
        }
    }
    return out;
}

} // namespace csifb
