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

#include "qmm/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qmm {
namespace {

static_assert(std::is_same_v<std::variant_alternative_t<0, FamilyParams>, PowerLawParams>);
static_assert(std::is_same_v<std::variant_alternative_t<1, FamilyParams>, LogLinearParams>);
static_assert(std::is_same_v<std::variant_alternative_t<2, FamilyParams>, ItuCdfParams>);
static_assert(std::is_same_v<std::variant_alternative_t<3, FamilyParams>, ChineseCdfParams>);
static_assert(std::is_same_v<std::variant_alternative_t<4, FamilyParams>, YeoCdfParams>);

// Fixed shape constants of the published CDF base models. The six/five
// exponent weights multiply ln(p/0.01) in the respective model families.
namespace chinese {
constexpr double kLogSlope = 0.854;
constexpr double kLowProbability = 0.026;
constexpr double kAnchorCoupling = 0.022;
constexpr double kFrequencyCoupling = 0.03;
constexpr double kLinearTerm = 0.226;
}  // namespace chinese

namespace yeo {
constexpr double kLogSlope = 1.0063;
constexpr double kLogCurvature = 0.0591;
constexpr double kAnchorCoupling = 0.1317;
}  // namespace yeo

// log10 computed as ln/ln10 so the whole module rests on one logarithm
// primitive.
double log10_of(double x) { return std::log(x) / std::numbers::ln10; }

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    std::ostringstream os;
    os << name << " must be positive and finite";
    throw std::invalid_argument(os.str());
  }
}

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << name << " must be finite";
    throw std::invalid_argument(os.str());
  }
}

[[noreturn]] void throw_domain(ModelFamily family, double x) {
  std::ostringstream os;
  os << family_name(family) << ": abscissa must be positive, got " << x;
  throw DomainError(os.str());
}

// Shared evaluation path for predict and base_prediction, so the all-ones
// model reproduces the base model bit for bit.
double eval_combination(const ModelSpec& spec, const VectorXd& coefficients, double x) {
  const VectorXd phi = basis_eval(spec, x);
  if (coefficients.size() != phi.size())
    throw std::invalid_argument("coefficient length does not match the family's basis count");
  const double combined = phi.dot(coefficients);
  return untransform_ordinate(spec, combined);
}

}  // namespace

ModelSpec ModelSpec::power_law(double k, double alpha) {
  ModelSpec spec{PowerLawParams{k, alpha}};
  validate(spec);
  return spec;
}

ModelSpec ModelSpec::log_linear(double a, double b) {
  ModelSpec spec{LogLinearParams{a, b}};
  validate(spec);
  return spec;
}

ModelSpec ModelSpec::itu_cdf(double a001, double b1, double b2, double b3) {
  ModelSpec spec{ItuCdfParams{a001, b1, b2, b3}};
  validate(spec);
  return spec;
}

ModelSpec ModelSpec::chinese_cdf(double a001_eq, double frequency_ghz) {
  ModelSpec spec{ChineseCdfParams{a001_eq, frequency_ghz}};
  validate(spec);
  return spec;
}

ModelSpec ModelSpec::yeo_cdf(double a001, double beta_sin_theta) {
  ModelSpec spec{YeoCdfParams{a001, beta_sin_theta}};
  validate(spec);
  return spec;
}

Index basis_count(ModelFamily family) {
  switch (family) {
    case ModelFamily::PowerLaw:
    case ModelFamily::LogLinear:
      return 2;
    case ModelFamily::ItuCdf:
      return 4;
    case ModelFamily::ChineseCdf:
      return 6;
    case ModelFamily::YeoCdf:
      return 5;
  }
  throw std::invalid_argument("unknown model family");
}

OrdinateTransform ordinate_transform(ModelFamily family) {
  return family == ModelFamily::LogLinear ? OrdinateTransform::Identity
                                          : OrdinateTransform::NaturalLog;
}

std::string family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::PowerLaw:
      return "power_law";
    case ModelFamily::LogLinear:
      return "log_linear";
    case ModelFamily::ItuCdf:
      return "itu_cdf";
    case ModelFamily::ChineseCdf:
      return "chinese_cdf";
    case ModelFamily::YeoCdf:
      return "yeo_cdf";
  }
  throw std::invalid_argument("unknown model family");
}

void validate(const ModelSpec& spec) {
  std::visit(
      [](const auto& params) {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, PowerLawParams>) {
          require_positive(params.k, "K");
          require_finite(params.alpha, "alpha");
        } else if constexpr (std::is_same_v<T, LogLinearParams>) {
          require_finite(params.a, "a");
          require_finite(params.b, "b");
        } else if constexpr (std::is_same_v<T, ItuCdfParams>) {
          require_positive(params.a001, "A001");
          require_positive(params.b1, "B1");
          require_finite(params.b2, "B2");
          require_finite(params.b3, "B3");
        } else if constexpr (std::is_same_v<T, ChineseCdfParams>) {
          require_positive(params.a001_eq, "equivalent A001");
          require_positive(params.frequency_ghz, "frequency");
        } else {
          require_positive(params.a001, "A001");
          require_finite(params.beta_sin_theta, "beta*sin(theta)");
        }
      },
      spec.params);
}

VectorXd basis_eval(const ModelSpec& spec, double x) {
  validate(spec);
  if (!(x > 0.0)) throw_domain(spec.family(), x);

  VectorXd phi(basis_count(spec.family()));
  switch (spec.family()) {
    case ModelFamily::PowerLaw: {
      const auto& p = std::get<PowerLawParams>(spec.params);
      phi << std::log(p.k), p.alpha * std::log(x);
      break;
    }
    case ModelFamily::LogLinear: {
      const auto& p = std::get<LogLinearParams>(spec.params);
      phi << p.a * std::log(x), p.b;
      break;
    }
    case ModelFamily::ItuCdf: {
      const auto& p = std::get<ItuCdfParams>(spec.params);
      const double log_p = std::log(x);
      phi << std::log(p.a001), std::log(p.b1), -p.b2 * log_p, -p.b3 * log10_of(x) * log_p;
      break;
    }
    case ModelFamily::ChineseCdf: {
      const auto& p = std::get<ChineseCdfParams>(spec.params);
      const double ratio_log = std::log(x / 0.01);
      phi << std::log(p.a001_eq),                                       //
          -chinese::kLogSlope * ratio_log,                              //
          (chinese::kLowProbability * std::log1p(x) / x) * ratio_log,   //
          (chinese::kAnchorCoupling * std::log(p.a001_eq)) * ratio_log, //
          (chinese::kFrequencyCoupling * std::log(p.frequency_ghz)) * ratio_log,
          (chinese::kLinearTerm * (1.0 + x)) * ratio_log;
      break;
    }
    case ModelFamily::YeoCdf: {
      const auto& p = std::get<YeoCdfParams>(spec.params);
      const double ratio_log = std::log(x / 0.01);
      phi << std::log(p.a001),                                   //
          -yeo::kLogSlope * ratio_log,                           //
          (-yeo::kLogCurvature * std::log(x)) * ratio_log,       //
          (yeo::kAnchorCoupling * std::log(p.a001)) * ratio_log, //
          (p.beta_sin_theta * (1.0 - x)) * ratio_log;
      break;
    }
  }
  return phi;
}

double transform_ordinate(const ModelSpec& spec, double y) {
  if (ordinate_transform(spec.family()) == OrdinateTransform::Identity) return y;
  if (!(y > 0.0)) {
    std::ostringstream os;
    os << family_name(spec.family()) << ": ordinate must be positive for the log transform, got "
       << y;
    throw DomainError(os.str());
  }
  return std::log(y);
}

double untransform_ordinate(const ModelSpec& spec, double value) {
  return ordinate_transform(spec.family()) == OrdinateTransform::Identity ? value
                                                                          : std::exp(value);
}

double predict(const CalibratedModel& model, double x) {
  const double x_effective = model.normalization ? model.normalization->scale * x : x;
  return eval_combination(model.spec, model.coefficients, x_effective);
}

double base_prediction(const ModelSpec& spec, double x) {
  return eval_combination(spec, VectorXd::Ones(basis_count(spec.family())), x);
}

}  // namespace qmm
