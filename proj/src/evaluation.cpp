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

#include "qmm/evaluation.hpp"

#include <cmath>
#include <vector>

namespace qmm {
namespace {

double weighted_rms(const VectorXd& errors, const VectorXd& weights) {
  std::vector<double> terms(static_cast<std::size_t>(errors.size()));
  for (Index i = 0; i < errors.size(); ++i)
    terms[static_cast<std::size_t>(i)] = weights(i) * errors(i) * errors(i);
  const double sum = detail::pairwise_sum(terms.data(), errors.size());
  return std::sqrt(sum / weights.sum());
}

}  // namespace

double rmse(const VectorXd& predicted, const VectorXd& measured) {
  if (predicted.size() != measured.size())
    throw std::invalid_argument("rmse: predicted and measured lengths differ");
  if (predicted.size() == 0) throw std::invalid_argument("rmse: empty input");
  return weighted_rms(predicted - measured, VectorXd::Ones(predicted.size()));
}

double improvement_percent(double rmse_new, double rmse_ref) {
  if (!(rmse_ref > 0.0))
    throw std::invalid_argument("improvement_percent: reference RMSE must be positive");
  return (1.0 - rmse_new / rmse_ref) * 100.0;
}

DbErrorSummary evaluate_on_series(const CalibratedModel& model, const MeasurementSeries& series) {
  const Index n = series.abscissa.size();
  VectorXd base(n);
  VectorXd qmm(n);
  const CalibratedModel base_model{model.spec, VectorXd::Ones(basis_count(model.spec.family())),
                                   model.normalization};
  for (Index i = 0; i < n; ++i) {
    base(i) = predict(base_model, series.abscissa(i));
    qmm(i) = predict(model, series.abscissa(i));
  }
  DbErrorSummary summary;
  summary.rmse_base_db = rmse(base, series.ordinate);
  summary.rmse_qmm_db = rmse(qmm, series.ordinate);
  summary.improvement_percent = summary.rmse_base_db > 0.0
                                    ? improvement_percent(summary.rmse_qmm_db, summary.rmse_base_db)
                                    : 0.0;
  return summary;
}

FitReport build_report(const CalibratedModel& model, const MeasurementSeries& series,
                       const SolveDiagnostics& diagnostics,
                       const std::optional<NormalizationDescriptor>& normalization,
                       const FitOptions& options) {
  const Index n = series.abscissa.size();
  if (n == 0 || n != series.ordinate.size())
    throw std::invalid_argument("build_report: empty or inconsistent series");

  FitReport report;
  report.model = model;
  report.diagnostics = diagnostics;
  report.normalization = normalization;

  const DbErrorSummary db = evaluate_on_series(model, series);
  report.rmse_base_db = db.rmse_base_db;
  report.rmse_qmm_db = db.rmse_qmm_db;
  report.improvement_percent = db.improvement_percent;

  // Transformed-space errors, evaluated on the same (possibly normalized)
  // abscissas the fit used.
  const VectorXd weights = detail::resolve_weights(n, options);
  const VectorXd ones = VectorXd::Ones(basis_count(model.spec.family()));
  VectorXd err_base(n);
  VectorXd err_qmm(n);
  for (Index i = 0; i < n; ++i) {
    const double x = model.normalization ? model.normalization->scale * series.abscissa(i)
                                         : series.abscissa(i);
    const VectorXd phi = basis_eval(model.spec, x);
    const double measured = transform_ordinate(model.spec, series.ordinate(i));
    err_base(i) = phi.dot(ones) - measured;
    err_qmm(i) = phi.dot(model.coefficients) - measured;
  }
  report.rmse_transformed_base = weighted_rms(err_base, weights);
  report.rmse_transformed_qmm = weighted_rms(err_qmm, weights);
  return report;
}

}  // namespace qmm
