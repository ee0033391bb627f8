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
#include <variant>

#include "qmm/errors.hpp"
#include "qmm/normalization.hpp"
#include "qmm/types.hpp"

// The base-model families. Each family is an existing rain-attenuation
// prediction model recast as a sum of basis functions phi_m, so that the
// fit engine can re-weight the terms:
//
//   PowerLaw    gamma = K R^alpha             (specific attenuation vs rain rate)
//   LogLinear   gamma = a ln R + b            (fitted in linear space)
//   ItuCdf      A_p = A001 B1 p^-(B2 + B3 log10 p)
//   ChineseCdf  six-term exponent model in ln(p/0.01), anchored at an
//               equivalent A001 and parameterized by frequency
//   YeoCdf      five-term exponent model in ln(p/0.01), anchored at A001
//               with a beta*sin(theta) site constant
//
// All families except LogLinear fit the natural logarithm of the ordinate,
// so a calibrated model predicts exp(sum_m c_m phi_m(x)); LogLinear
// predicts the raw sum.

namespace qmm {

enum class ModelFamily { PowerLaw, LogLinear, ItuCdf, ChineseCdf, YeoCdf };

enum class OrdinateTransform { NaturalLog, Identity };

struct PowerLawParams {
  double k = 0.0;      ///< K > 0, dB/km at R = 1 mm/h
  double alpha = 0.0;  ///< dimensionless exponent
};

struct LogLinearParams {
  double a = 0.0;  ///< dB/km per ln(mm/h)
  double b = 0.0;  ///< dB/km constant term
};

struct ItuCdfParams {
  double a001 = 0.0;  ///< attenuation exceeded 0.01% of the year, dB, > 0
  double b1 = 0.0;    ///< > 0 (its logarithm is a basis function)
  double b2 = 0.0;
  double b3 = 0.0;
};

struct ChineseCdfParams {
  double a001_eq = 0.0;        ///< (equivalent) 0.01% anchor, dB, > 0
  double frequency_ghz = 0.0;  ///< operating frequency, GHz, > 0
};

struct YeoCdfParams {
  double a001 = 0.0;            ///< 0.01% anchor, dB, > 0
  double beta_sin_theta = 0.0;  ///< site constant, supplied as one product
};

// Alternative order must match the ModelFamily enumerator order; the
// discriminant is derived from the variant index.
using FamilyParams =
    std::variant<PowerLawParams, LogLinearParams, ItuCdfParams, ChineseCdfParams, YeoCdfParams>;

/// A base-model family plus its fixed parameters. Construct through the
/// factories, which validate the positivity rules (every parameter whose
/// logarithm appears in a basis function must be positive).
struct ModelSpec {
  FamilyParams params;

  static ModelSpec power_law(double k, double alpha);
  static ModelSpec log_linear(double a, double b);
  static ModelSpec itu_cdf(double a001, double b1, double b2, double b3);
  static ModelSpec chinese_cdf(double a001_eq, double frequency_ghz);
  static ModelSpec yeo_cdf(double a001, double beta_sin_theta);

  ModelFamily family() const { return static_cast<ModelFamily>(params.index()); }
};

/// Number of basis functions: PowerLaw 2, LogLinear 2, ItuCdf 4,
/// ChineseCdf 6, YeoCdf 5.
Index basis_count(ModelFamily family);

/// NaturalLog for every family except LogLinear.
OrdinateTransform ordinate_transform(ModelFamily family);

/// Human-readable family name (also the JSON identifier).
std::string family_name(ModelFamily family);

/// Throws std::invalid_argument when a parameter violates its invariant.
void validate(const ModelSpec& spec);

/// Evaluates [phi_1(x), ..., phi_M(x)]. For CDF families x is the
/// (possibly normalized) exceedance percentage; for the rain-rate families
/// it is the rain rate. Throws DomainError for x <= 0.
VectorXd basis_eval(const ModelSpec& spec, double x);

/// ln(y) for NaturalLog families (y must be positive), y for LogLinear.
double transform_ordinate(const ModelSpec& spec, double y);

/// Inverse of transform_ordinate.
double untransform_ordinate(const ModelSpec& spec, double value);

/// A fitted model: spec, coefficient vector, and the percentage scaling
/// applied during the fit (if any). Immutable by convention.
struct CalibratedModel {
  ModelSpec spec;
  VectorXd coefficients;
  std::optional<NormalizationDescriptor> normalization;
};

/// Prediction at abscissa x. When the model carries a normalization
/// descriptor, x is mapped to scale*x before basis evaluation. Returns
/// exp(sum c_m phi_m) for NaturalLog families, the raw sum for LogLinear.
double predict(const CalibratedModel& model, double x);

/// The base model's own prediction: identical to predict with all
/// coefficients equal to one (same code path).
double base_prediction(const ModelSpec& spec, double x);

}  // namespace qmm
