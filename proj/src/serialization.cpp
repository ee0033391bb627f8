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

#include "qmm/serialization.hpp"

#include <cmath>
#include <limits>

namespace qmm {
namespace {

using nlohmann::json;

const json& require_key(const json& j, const char* key, const char* context) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string(context) + ": missing key '" + key + "'");
  return j.at(key);
}

double require_number(const json& j, const char* key, const char* context) {
  const json& value = require_key(j, key, context);
  if (!value.is_number())
    throw ConfigError(std::string(context) + ": key '" + key + "' must be a number");
  return value.get<double>();
}

std::string require_string(const json& j, const char* key, const char* context) {
  const json& value = require_key(j, key, context);
  if (!value.is_string())
    throw ConfigError(std::string(context) + ": key '" + key + "' must be a string");
  return value.get<std::string>();
}

}  // namespace

nlohmann::json to_json(const ModelSpec& spec) {
  json params;
  std::visit(
      [&params](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PowerLawParams>) {
          params = {{"k", p.k}, {"alpha", p.alpha}};
        } else if constexpr (std::is_same_v<T, LogLinearParams>) {
          params = {{"a", p.a}, {"b", p.b}};
        } else if constexpr (std::is_same_v<T, ItuCdfParams>) {
          params = {{"a001", p.a001}, {"b1", p.b1}, {"b2", p.b2}, {"b3", p.b3}};
        } else if constexpr (std::is_same_v<T, ChineseCdfParams>) {
          params = {{"a001_eq", p.a001_eq}, {"frequency_ghz", p.frequency_ghz}};
        } else {
          params = {{"a001", p.a001}, {"beta_sin_theta", p.beta_sin_theta}};
        }
      },
      spec.params);
  return json{{"family", family_name(spec.family())}, {"params", params}};
}

ModelSpec model_spec_from_json(const nlohmann::json& j) {
  const std::string family = require_string(j, "family", "model spec");
  const json& params = require_key(j, "params", "model spec");
  try {
    if (family == "power_law")
      return ModelSpec::power_law(require_number(params, "k", "power_law params"),
                                  require_number(params, "alpha", "power_law params"));
    if (family == "log_linear")
      return ModelSpec::log_linear(require_number(params, "a", "log_linear params"),
                                   require_number(params, "b", "log_linear params"));
    if (family == "itu_cdf")
      return ModelSpec::itu_cdf(require_number(params, "a001", "itu_cdf params"),
                                require_number(params, "b1", "itu_cdf params"),
                                require_number(params, "b2", "itu_cdf params"),
                                require_number(params, "b3", "itu_cdf params"));
    if (family == "chinese_cdf")
      return ModelSpec::chinese_cdf(require_number(params, "a001_eq", "chinese_cdf params"),
                                    require_number(params, "frequency_ghz", "chinese_cdf params"));
    if (family == "yeo_cdf")
      return ModelSpec::yeo_cdf(require_number(params, "a001", "yeo_cdf params"),
                                require_number(params, "beta_sin_theta", "yeo_cdf params"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model spec: ") + e.what());
  }
  throw ConfigError("model spec: unknown family '" + family +
                    "' (expected power_law, log_linear, itu_cdf, chinese_cdf, or yeo_cdf)");
}

nlohmann::json to_json(const NormalizationDescriptor& descriptor) {
  return json{{"scale", descriptor.scale},
              {"a001_equivalent", descriptor.a001_equivalent},
              {"original_range", {descriptor.original_range[0], descriptor.original_range[1]}},
              {"normalized_range",
               {descriptor.normalized_range[0], descriptor.normalized_range[1]}}};
}

NormalizationDescriptor descriptor_from_json(const nlohmann::json& j) {
  NormalizationDescriptor descriptor;
  descriptor.scale = require_number(j, "scale", "normalization");
  descriptor.a001_equivalent = require_number(j, "a001_equivalent", "normalization");
  const json& original = require_key(j, "original_range", "normalization");
  const json& normalized = require_key(j, "normalized_range", "normalization");
  if (!original.is_array() || original.size() != 2 || !normalized.is_array() ||
      normalized.size() != 2)
    throw ConfigError("normalization: ranges must be [min, max] arrays");
  descriptor.original_range = {original[0].get<double>(), original[1].get<double>()};
  descriptor.normalized_range = {normalized[0].get<double>(), normalized[1].get<double>()};
  return descriptor;
}

nlohmann::json to_json(const SolveDiagnostics& diagnostics) {
  json j{{"rank", diagnostics.rank}, {"residual_norm", diagnostics.residual_norm}};
  // JSON has no infinity; a sentinel null marks rank-deficient systems.
  if (std::isfinite(diagnostics.condition_number))
    j["condition_number"] = diagnostics.condition_number;
  else
    j["condition_number"] = nullptr;
  return j;
}

nlohmann::json to_json(const CalibratedModel& model) {
  json j{{"spec", to_json(model.spec)},
         {"coefficients", std::vector<double>(model.coefficients.begin(),
                                              model.coefficients.end())}};
  j["normalization"] = model.normalization ? to_json(*model.normalization) : json(nullptr);
  return j;
}

CalibratedModel calibrated_model_from_json(const nlohmann::json& j) {
  const json& doc = (j.is_object() && j.contains("model")) ? j.at("model") : j;
  CalibratedModel model;
  model.spec = model_spec_from_json(require_key(doc, "spec", "calibrated model"));
  const json& coeffs = require_key(doc, "coefficients", "calibrated model");
  if (!coeffs.is_array()) throw ConfigError("calibrated model: coefficients must be an array");
  model.coefficients.resize(static_cast<Index>(coeffs.size()));
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!coeffs[i].is_number())
      throw ConfigError("calibrated model: coefficients must be numbers");
    model.coefficients(static_cast<Index>(i)) = coeffs[i].get<double>();
  }
  if (model.coefficients.size() != basis_count(model.spec.family()))
    throw ConfigError("calibrated model: coefficient count does not match the family");
  if (doc.contains("normalization") && !doc.at("normalization").is_null())
    model.normalization = descriptor_from_json(doc.at("normalization"));
  return model;
}

nlohmann::json to_json(const FitReport& report) {
  json j{{"model", to_json(report.model)},
         {"rmse_base_db", report.rmse_base_db},
         {"rmse_qmm_db", report.rmse_qmm_db},
         {"rmse_transformed_base", report.rmse_transformed_base},
         {"rmse_transformed_qmm", report.rmse_transformed_qmm},
         {"improvement_percent", report.improvement_percent},
         {"diagnostics", to_json(report.diagnostics)}};
  j["normalization"] = report.normalization ? to_json(*report.normalization) : json(nullptr);
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig config;
  config.spec = model_spec_from_json(require_key(j, "model", "config"));
  config.data_path = require_string(j, "data_path", "config");
  config.output_report = require_string(j, "output_report", "config");

  if (j.contains("normalize")) {
    const std::string mode = require_string(j, "normalize", "config");
    if (mode == "auto")
      config.normalize = NormalizeMode::Auto;
    else if (mode == "on")
      config.normalize = NormalizeMode::On;
    else if (mode == "off")
      config.normalize = NormalizeMode::Off;
    else
      throw ConfigError("config: normalize must be 'auto', 'on', or 'off'");
  }

  if (j.contains("output_curve") && !j.at("output_curve").is_null()) {
    config.output_curve = require_string(j, "output_curve", "config");
    const json& grid = require_key(j, "curve_grid", "config (required with output_curve)");
    RunConfig::CurveGrid curve_grid;
    curve_grid.min = require_number(grid, "min", "curve_grid");
    curve_grid.max = require_number(grid, "max", "curve_grid");
    const double ppd = require_number(grid, "points_per_decade", "curve_grid");
    curve_grid.points_per_decade = static_cast<int>(ppd);
    if (curve_grid.points_per_decade < 2)
      throw ConfigError("curve_grid: points_per_decade must be at least 2");
    if (!(curve_grid.min > 0.0) || !(curve_grid.max > curve_grid.min))
      throw ConfigError("curve_grid: need 0 < min < max");
    config.curve_grid = curve_grid;
  }
  return config;
}

}  // namespace qmm
