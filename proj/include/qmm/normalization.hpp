// Copyright 2026 the qmm-calibrate authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <utility>

#include "qmm/dataset.hpp"
#include "qmm/types.hpp"

// Exceedance-percentage scaling. CDF prediction models extrapolate from an
// attenuation anchor at 0.01% of the average year; measurement campaigns
// often cover percentage ranges that exclude that anchor. Scaling every
// percentage by s = 0.01 / p_min maps the smallest observed percentage onto
// 0.01%, and the attenuation measured there becomes the "equivalent" anchor
// the scaled model extrapolates from.

namespace qmm {

/// Record of one applied scaling: p_n = scale * p.
struct NormalizationDescriptor {
  double scale = 1.0;
  /// Attenuation (dB) measured at the smallest original percentage; the
  /// anchor the normalized model extrapolates from.
  double a001_equivalent = 0.0;
  std::array<double, 2> original_range{0.0, 0.0};    ///< {p_min, p_max} in %
  std::array<double, 2> normalized_range{0.0, 0.0};  ///< {scale*p_min, scale*p_max}
};

/// s = 0.01 / min(p). Quotients within 32 ulps of an integer >= 1 snap to
/// that integer, so decimal inputs like 1e-5 yield exactly 1000 despite
/// binary rounding. Throws DataError on empty input or any p <= 0.
double normalization_scale(const VectorXd& p_values);

/// Scales every abscissa by normalization_scale and records the descriptor.
/// Ordinates are copied bit-identically. The input needs kind
/// ExceedancePercent; unsorted series are sorted first. Ties at the
/// minimum percentage take the largest attenuation as the anchor.
std::pair<MeasurementSeries, NormalizationDescriptor> apply_normalization(
    const MeasurementSeries& series);

/// Maps a normalized percentage back: p = p_n / scale. Throws DomainError
/// for p_n <= 0.
double denormalize_percentage(double p_n, const NormalizationDescriptor& descriptor);

}  // namespace qmm
