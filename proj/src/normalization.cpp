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

#include "qmm/normalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace qmm {

double normalization_scale(const VectorXd& p_values) {
  if (p_values.size() == 0) throw DataError("normalization needs at least one percentage");
  double p_min = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < p_values.size(); ++i) {
    if (!std::isfinite(p_values(i)) || !(p_values(i) > 0.0))
      throw DataError("percentages must be finite and positive");
    p_min = std::min(p_min, p_values(i));
  }
  const double quotient = 0.01 / p_min;
  // Decimal p_min values are not exactly representable in binary, so the
  // quotient can miss an integer ratio by a few ulps (0.01/1e-5 evaluates
  // to 999.9999999999999). Snap within 32 ulps; anything farther is a
  // genuinely non-integer ratio and is kept as-is.
  const double rounded = std::round(quotient);
  if (rounded >= 1.0 &&
      std::abs(quotient - rounded) <= 32.0 * std::numeric_limits<double>::epsilon() * quotient)
    return rounded;
  return quotient;
}

std::pair<MeasurementSeries, NormalizationDescriptor> apply_normalization(
    const MeasurementSeries& series) {
  if (series.kind != SeriesKind::ExceedancePercent)
    throw DataError("normalization applies to exceedance-percentage series only");
  if (series.abscissa.size() == 0 || series.abscissa.size() != series.ordinate.size())
    throw DataError("normalization needs a non-empty, consistent series");

  // Canonical ascending order, keeping each ordinate with its abscissa.
  std::vector<Index> order(static_cast<std::size_t>(series.abscissa.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&series](Index a, Index b) {
    return series.abscissa(a) < series.abscissa(b);
  });

  const double scale = normalization_scale(series.abscissa);

  MeasurementSeries normalized;
  normalized.kind = series.kind;
  normalized.label = series.label;
  normalized.abscissa.resize(series.abscissa.size());
  normalized.ordinate.resize(series.ordinate.size());
  for (Index i = 0; i < series.abscissa.size(); ++i) {
    normalized.abscissa(i) = scale * series.abscissa(order[static_cast<std::size_t>(i)]);
    normalized.ordinate(i) = series.ordinate(order[static_cast<std::size_t>(i)]);
  }

  const double p_min = series.abscissa(order.front());
  const double p_max = series.abscissa(order.back());
  double anchor = normalized.ordinate(0);
  for (Index i = 1; i < normalized.abscissa.size(); ++i) {
    if (series.abscissa(order[static_cast<std::size_t>(i)]) != p_min) break;
    anchor = std::max(anchor, normalized.ordinate(i));
  }

  NormalizationDescriptor descriptor;
  descriptor.scale = scale;
  descriptor.a001_equivalent = anchor;
  descriptor.original_range = {p_min, p_max};
  descriptor.normalized_range = {scale * p_min, scale * p_max};
  return {std::move(normalized), descriptor};
}

double denormalize_percentage(double p_n, const NormalizationDescriptor& descriptor) {
  if (!(p_n > 0.0)) throw DomainError("normalized percentage must be positive");
  return p_n / descriptor.scale;
}

}  // namespace qmm
