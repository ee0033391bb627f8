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

#include "qmm/evaluation.hpp"

// End-to-end calibration: validate -> (optionally) normalize percentages ->
// transform ordinates -> assemble the Gram system -> solve -> report.

namespace qmm {

enum class NormalizeMode {
  Auto,  ///< normalize iff the series is percentages with min(p) < 0.01
  On,
  Off,
};

struct FitRequest {
  ModelSpec spec;
  MeasurementSeries series;
  FitOptions options;
  NormalizeMode normalize = NormalizeMode::Auto;
};

struct FitOutcome {
  CalibratedModel model;
  FitReport report;
};

/// Runs one calibration. The input series is never mutated; identical
/// requests produce bit-identical outcomes. When normalization is applied,
/// the model's anchor parameter (A001 or its equivalent) is replaced by the
/// attenuation measured at the smallest percentage before basis evaluation.
/// Throws DataError on validation failures or family/kind mismatches,
/// DomainError/SolveError from the inner stages.
FitOutcome fit(const FitRequest& request);

/// Element-wise predict; raw abscissas are scaled by the model's
/// normalization descriptor (when present) before basis evaluation.
VectorXd predict_series(const CalibratedModel& model, const VectorXd& abscissas);

}  // namespace qmm
