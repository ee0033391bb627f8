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
#include <string>

#include <json.hpp>

#include "qmm/evaluation.hpp"
#include "qmm/pipeline.hpp"

// JSON schemas for models, reports, and the CLI run configuration. Numbers
// are emitted in shortest round-trip decimal form, so a saved model reloads
// to bit-identical predictions. A non-finite condition number serializes
// as null.

namespace qmm {

nlohmann::json to_json(const ModelSpec& spec);
nlohmann::json to_json(const NormalizationDescriptor& descriptor);
nlohmann::json to_json(const SolveDiagnostics& diagnostics);
nlohmann::json to_json(const CalibratedModel& model);
nlohmann::json to_json(const FitReport& report);

ModelSpec model_spec_from_json(const nlohmann::json& j);
NormalizationDescriptor descriptor_from_json(const nlohmann::json& j);

/// Accepts either a bare CalibratedModel document or a FitReport document
/// (in which case the embedded "model" object is used).
CalibratedModel calibrated_model_from_json(const nlohmann::json& j);

/// CLI run configuration for the fit command.
struct RunConfig {
  ModelSpec spec;
  std::string data_path;
  NormalizeMode normalize = NormalizeMode::Auto;
  std::string output_report;
  std::optional<std::string> output_curve;
  struct CurveGrid {
    double min = 0.0;
    double max = 0.0;
    int points_per_decade = 0;  ///< total point count for rain-rate grids
  };
  std::optional<CurveGrid> curve_grid;
};

/// Throws ConfigError on schema violations (missing keys, unknown family
/// or normalize strings, grid constraints).
RunConfig run_config_from_json(const nlohmann::json& j);

}  // namespace qmm
