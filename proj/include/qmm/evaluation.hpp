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

#include <optional>

#include "qmm/dataset.hpp"
#include "qmm/linalg.hpp"
#include "qmm/models.hpp"
#include "qmm/normalization.hpp"

namespace qmm {

/// Everything a fit produces besides the model itself. dB-space RMSEs are
/// the headline metrics; the transformed-space pair is included because
/// only it carries an optimality guarantee (the solver minimizes the
/// weighted error in transformed space, so rmse_transformed_qmm can never
/// exceed rmse_transformed_base).
struct FitReport {
  CalibratedModel model;
  double rmse_base_db = 0.0;
  double rmse_qmm_db = 0.0;
  double rmse_transformed_base = 0.0;
  double rmse_transformed_qmm = 0.0;
  /// dB-space improvement of the calibrated model over the base model,
  /// (1 - qmm/base)*100; 0 when the base error is already zero. Negative
  /// values are reported honestly.
  double improvement_percent = 0.0;
  SolveDiagnostics diagnostics;
  std::optional<NormalizationDescriptor> normalization;
};

/// sqrt(mean((predicted - measured)^2)). Throws std::invalid_argument on a
/// length mismatch or empty input.
double rmse(const VectorXd& predicted, const VectorXd& measured);

/// (1 - rmse_new/rmse_ref)*100. Throws std::invalid_argument when
/// rmse_ref <= 0.
double improvement_percent(double rmse_new, double rmse_ref);

/// dB-space error summary of a calibrated model against a series; the same
/// computation feeds build_report and the evaluate command.
struct DbErrorSummary {
  double rmse_base_db = 0.0;
  double rmse_qmm_db = 0.0;
  double improvement_percent = 0.0;
};
DbErrorSummary evaluate_on_series(const CalibratedModel& model, const MeasurementSeries& series);

/// Assembles the full report for a model fitted on the given series.
/// Transformed-space RMSEs honor the fit weights (root of the weighted
/// mean square), which reduces to the plain RMSE for default weights.
FitReport build_report(const CalibratedModel& model, const MeasurementSeries& series,
                       const SolveDiagnostics& diagnostics,
                       const std::optional<NormalizationDescriptor>& normalization = std::nullopt,
                       const FitOptions& options = {});

}  // namespace qmm
