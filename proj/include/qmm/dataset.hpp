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

#include <string>
#include <string_view>
#include <vector>

#include "qmm/errors.hpp"
#include "qmm/types.hpp"

namespace qmm {

/// What the abscissa of a measurement series means.
enum class SeriesKind {
  RainRate,           ///< rain rate in mm/h vs specific attenuation in dB/km
  ExceedancePercent,  ///< exceedance percentage vs attenuation in dB
};

/// Ordered (abscissa, attenuation) measurement pairs. Canonical form is
/// sorted by strictly increasing abscissa with strictly positive entries
/// on both axes.
struct MeasurementSeries {
  SeriesKind kind = SeriesKind::ExceedancePercent;
  VectorXd abscissa;
  VectorXd ordinate;
  std::string label;  ///< free text (site/frequency), not stored in the CSV
};

/// One validation outcome; errors block a fit, warnings do not.
struct Finding {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
};

/// CSV columns: {exceedance_percent, attenuation_db} or
/// {rain_rate_mm_per_h, specific_attenuation_db_per_km}, either order,
/// extra columns ignored with a warning. Rows are sorted by abscissa and
/// exact duplicate abscissas collapse to the largest attenuation.
/// Throws DataError on unknown headers, non-numeric cells (with the row
/// number), non-positive values, or fewer than two usable rows.
MeasurementSeries parse_measurement_csv(std::string_view text,
                                        std::vector<Finding>* findings = nullptr);

/// Inverse of parse_measurement_csv; numbers are written in shortest
/// round-trip decimal form, so parse(serialize(s)) == s exactly.
std::string serialize_measurement_csv(const MeasurementSeries& series);

/// Invariant check. Violations (length, positivity, ordering, finiteness)
/// are errors; a CDF series whose attenuation is not non-increasing in p
/// only gets a warning, since digitized data commonly jitters.
std::vector<Finding> validate_series(const MeasurementSeries& series);

}  // namespace qmm
