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

#include "qmm/pipeline.hpp"

#include <sstream>
#include <utility>

namespace qmm {
namespace {

bool is_cdf_family(ModelFamily family) {
  return family == ModelFamily::ItuCdf || family == ModelFamily::ChineseCdf ||
         family == ModelFamily::YeoCdf;
}

// With a scaling applied, the model extrapolates from the attenuation
// measured at the smallest percentage instead of the configured anchor.
ModelSpec with_anchor(const ModelSpec& spec, double anchor) {
  switch (spec.family()) {
    case ModelFamily::ItuCdf: {
      const auto& p = std::get<ItuCdfParams>(spec.params);
      return ModelSpec::itu_cdf(anchor, p.b1, p.b2, p.b3);
    }
    case ModelFamily::ChineseCdf: {
      const auto& p = std::get<ChineseCdfParams>(spec.params);
      return ModelSpec::chinese_cdf(anchor, p.frequency_ghz);
    }
    case ModelFamily::YeoCdf: {
      const auto& p = std::get<YeoCdfParams>(spec.params);
      return ModelSpec::yeo_cdf(anchor, p.beta_sin_theta);
    }
    default:
      throw DataError("normalization applies to CDF families only");
  }
}

}  // namespace

FitOutcome fit(const FitRequest& request) {
  const std::vector<Finding> findings = validate_series(request.series);
  std::ostringstream errors;
  bool has_error = false;
  for (const Finding& finding : findings) {
    if (finding.severity == Finding::Severity::Error) {
      errors << (has_error ? "; " : "") << finding.message;
      has_error = true;
    }
  }
  if (has_error) throw DataError("series validation failed: " + errors.str());

  validate(request.spec);
  const ModelFamily family = request.spec.family();
  const SeriesKind expected_kind =
      is_cdf_family(family) ? SeriesKind::ExceedancePercent : SeriesKind::RainRate;
  if (request.series.kind != expected_kind) {
    std::ostringstream os;
    os << family_name(family) << " expects a "
       << (expected_kind == SeriesKind::ExceedancePercent ? "exceedance-percentage" : "rain-rate")
       << " series";
    throw DataError(os.str());
  }

  bool normalize = false;
  switch (request.normalize) {
    case NormalizeMode::On:
      normalize = true;
      break;
    case NormalizeMode::Off:
      normalize = false;
      break;
    case NormalizeMode::Auto:
      normalize = request.series.kind == SeriesKind::ExceedancePercent &&
                  request.series.abscissa.minCoeff() < 0.01;
      break;
  }

  ModelSpec effective_spec = request.spec;
  std::optional<NormalizationDescriptor> descriptor;
  VectorXd fit_abscissa = request.series.abscissa;
  VectorXd fit_ordinate = request.series.ordinate;
  if (normalize) {
    auto [normalized, desc] = apply_normalization(request.series);
    descriptor = desc;
    effective_spec = with_anchor(request.spec, desc.a001_equivalent);
    fit_abscissa = std::move(normalized.abscissa);
    fit_ordinate = std::move(normalized.ordinate);
  }

  const Index m = basis_count(family);
  const Index n = fit_abscissa.size();
  DesignSamples samples;
  samples.phi.resize(m, n);
  samples.y.resize(n);
  for (Index k = 0; k < n; ++k) {
    samples.phi.col(k) = basis_eval(effective_spec, fit_abscissa(k));
    samples.y(k) = transform_ordinate(effective_spec, fit_ordinate(k));
  }

  const MatrixXd gram = gram_matrix(samples, request.options);
  const VectorXd moments = moment_vector(samples, request.options);
  auto [coefficients, diagnostics] = solve_coefficients(gram, moments, request.options);

  FitOutcome outcome;
  outcome.model = CalibratedModel{effective_spec, std::move(coefficients), descriptor};
  outcome.report =
      build_report(outcome.model, request.series, diagnostics, descriptor, request.options);
  return outcome;
}

VectorXd predict_series(const CalibratedModel& model, const VectorXd& abscissas) {
  VectorXd predictions(abscissas.size());
  for (Index i = 0; i < abscissas.size(); ++i) predictions(i) = predict(model, abscissas(i));
  return predictions;
}

}  // namespace qmm
