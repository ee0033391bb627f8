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

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "qmm/errors.hpp"
#include "qmm/types.hpp"

// Assembly and solution of the Gram system behind a quasi-moment-method
// fit. Basis samples phi(m, k) = phi_m(x_k) and transformed ordinates
// y(k) produce the normal-equation pair
//
//   G(m, n) = sum_k w_k phi_m(x_k) phi_n(x_k)
//   b(m)    = sum_k w_k phi_m(x_k) y(x_k)
//
// and the coefficients solve G c = b. When the basis functions are
// linearly dependent over the sample set (degenerate bases with several
// constant or proportional members are common here), the system is
// solved in the minimum-norm least-squares sense via a truncated SVD.

namespace qmm {

/// Weighted least-squares options. Default weights are uniform, which
/// makes the assembled inner products plain unweighted sums.
struct FitOptions {
  /// Optional per-sample weights; length N, all >= 0, at least one > 0.
  std::optional<VectorXd> weights;
  /// Relative singular-value cutoff for rank detection.
  double rank_tolerance = 1e-12;
};

/// Rank/conditioning/residual facts about one coefficient solve.
struct SolveDiagnostics {
  Index rank = 0;                 ///< detected rank of the Gram matrix, 0..M
  double condition_number = 0.0;  ///< sigma_max/sigma_min; +inf when rank < M
  double residual_norm = 0.0;     ///< ||G c - b||_2
};

/// Basis-function samples and transformed ordinates for one fit.
template <typename Scalar>
struct DesignSamplesT {
  MatrixX<Scalar> phi;  ///< M rows (basis index) x N columns (sample index)
  VectorX<Scalar> y;    ///< N transformed ordinate values
};
using DesignSamples = DesignSamplesT<double>;

namespace detail {

// Cascade summation: error grows O(log N) instead of O(N), so large
// synthetic sample sets do not degrade the Gram entries.
template <typename Scalar>
Scalar pairwise_sum(const Scalar* values, Eigen::Index count) {
  if (count <= 32) {
    Scalar acc{0};
    for (Eigen::Index i = 0; i < count; ++i) acc += values[i];
    return acc;
  }
  const Eigen::Index half = count / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

template <typename DerivedPhi, typename DerivedY>
void check_samples_finite(const Eigen::MatrixBase<DerivedPhi>& phi,
                          const Eigen::MatrixBase<DerivedY>& y) {
  for (Eigen::Index m = 0; m < phi.rows(); ++m)
    for (Eigen::Index k = 0; k < phi.cols(); ++k)
      if (!std::isfinite(phi(m, k))) {
        std::ostringstream os;
        os << "non-finite basis value at basis index " << m << ", sample index " << k;
        throw DataError(os.str());
      }
  for (Eigen::Index k = 0; k < y.size(); ++k)
    if (!std::isfinite(y(k))) {
      std::ostringstream os;
      os << "non-finite ordinate at sample index " << k;
      throw DataError(os.str());
    }
}

inline VectorXd resolve_weights(Index sample_count, const FitOptions& opts) {
  if (!opts.weights) return VectorXd::Ones(sample_count);
  const VectorXd& w = *opts.weights;
  if (w.size() != sample_count)
    throw std::invalid_argument("weights length does not match the sample count");
  bool any_positive = false;
  for (Index k = 0; k < w.size(); ++k) {
    if (!std::isfinite(w(k)) || w(k) < 0.0)
      throw std::invalid_argument("weights must be finite and nonnegative");
    any_positive = any_positive || w(k) > 0.0;
  }
  if (!any_positive) throw std::invalid_argument("at least one weight must be positive");
  return w;
}

template <typename Scalar>
void check_design(const DesignSamplesT<Scalar>& samples) {
  if (samples.phi.rows() < 1 || samples.phi.cols() < 1)
    throw std::invalid_argument("design samples need at least one basis function and one sample");
  if (samples.y.size() != samples.phi.cols())
    throw std::invalid_argument("ordinate length does not match the sample count");
}

}  // namespace detail

/// Inner-product matrix <phi_m, phi_n> over the sample set. Upper triangle
/// is accumulated (pairwise) and mirrored, so the result is symmetric
/// bit-for-bit.
template <typename DerivedPhi, typename DerivedW>
MatrixX<typename DerivedPhi::Scalar> weighted_gram(const Eigen::MatrixBase<DerivedPhi>& phi,
                                                   const Eigen::MatrixBase<DerivedW>& weights) {
  using Scalar = typename DerivedPhi::Scalar;
  const Eigen::Index basis_count = phi.rows();
  const Eigen::Index sample_count = phi.cols();
  MatrixX<Scalar> gram(basis_count, basis_count);
  std::vector<Scalar> products(static_cast<std::size_t>(sample_count));
  for (Eigen::Index m = 0; m < basis_count; ++m) {
    for (Eigen::Index n = m; n < basis_count; ++n) {
      for (Eigen::Index k = 0; k < sample_count; ++k)
        products[static_cast<std::size_t>(k)] = weights(k) * phi(m, k) * phi(n, k);
      const Scalar value = detail::pairwise_sum(products.data(), sample_count);
      gram(m, n) = value;
      gram(n, m) = value;
    }
  }
  return gram;
}

/// Inner products <phi_m, y> over the sample set.
template <typename DerivedPhi, typename DerivedY, typename DerivedW>
VectorX<typename DerivedPhi::Scalar> weighted_moments(const Eigen::MatrixBase<DerivedPhi>& phi,
                                                      const Eigen::MatrixBase<DerivedY>& y,
                                                      const Eigen::MatrixBase<DerivedW>& weights) {
  using Scalar = typename DerivedPhi::Scalar;
  const Eigen::Index basis_count = phi.rows();
  const Eigen::Index sample_count = phi.cols();
  VectorX<Scalar> moments(basis_count);
  std::vector<Scalar> products(static_cast<std::size_t>(sample_count));
  for (Eigen::Index m = 0; m < basis_count; ++m) {
    for (Eigen::Index k = 0; k < sample_count; ++k)
      products[static_cast<std::size_t>(k)] = weights(k) * phi(m, k) * y(k);
    moments(m) = detail::pairwise_sum(products.data(), sample_count);
  }
  return moments;
}

/// Gram matrix of the design samples. Rejects non-finite entries with a
/// diagnostic naming the offending basis and sample index.
inline MatrixXd gram_matrix(const DesignSamples& samples, const FitOptions& opts = {}) {
  detail::check_design(samples);
  detail::check_samples_finite(samples.phi, samples.y);
  const VectorXd weights = detail::resolve_weights(samples.phi.cols(), opts);
  return weighted_gram(samples.phi, weights);
}

/// Moment vector <phi_m, y> of the design samples.
inline VectorXd moment_vector(const DesignSamples& samples, const FitOptions& opts = {}) {
  detail::check_design(samples);
  detail::check_samples_finite(samples.phi, samples.y);
  const VectorXd weights = detail::resolve_weights(samples.phi.cols(), opts);
  return weighted_moments(samples.phi, samples.y, weights);
}

/// Solves G c = b. Full-rank systems get the unique solution; rank-deficient
/// ones get the minimum-Euclidean-norm least-squares solution, with singular
/// values below rank_tolerance * sigma_max treated as zero.
inline std::pair<VectorXd, SolveDiagnostics> solve_coefficients(const MatrixXd& gram,
                                                                const VectorXd& moments,
                                                                const FitOptions& opts = {}) {
  const Index m_count = gram.rows();
  if (m_count == 0) throw SolveError("empty system: no basis functions to solve for");
  if (gram.cols() != m_count) throw std::invalid_argument("Gram matrix must be square");
  if (moments.size() != m_count)
    throw std::invalid_argument("moment vector length does not match the Gram dimension");
  if (!gram.allFinite() || !moments.allFinite())
    throw std::invalid_argument("Gram system contains non-finite entries");
  if (!(opts.rank_tolerance >= 0.0 && opts.rank_tolerance < 1.0))
    throw std::invalid_argument("rank_tolerance must lie in [0, 1)");
  const double scale = gram.cwiseAbs().maxCoeff();
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + scale))
    throw std::invalid_argument("Gram matrix must be symmetric");

  Eigen::JacobiSVD<MatrixXd> svd(gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const VectorXd& sigma = svd.singularValues();
  const double sigma_max = sigma(0);
  const double cutoff = opts.rank_tolerance * sigma_max;

  Index rank = 0;
  for (Index i = 0; i < m_count; ++i)
    if (sigma(i) > cutoff && sigma(i) > 0.0) ++rank;

  SolveDiagnostics diag;
  diag.rank = rank;

  if (rank == 0) {
    if ((moments.array() != 0.0).any())
      throw SolveError("no informative basis: Gram matrix has rank 0 but moments are nonzero");
    diag.condition_number = std::numeric_limits<double>::infinity();
    diag.residual_norm = 0.0;
    return {VectorXd::Zero(m_count), diag};
  }

  VectorXd coefficients = VectorXd::Zero(m_count);
  const VectorXd projected = svd.matrixU().transpose() * moments;
  for (Index i = 0; i < rank; ++i)
    coefficients += (projected(i) / sigma(i)) * svd.matrixV().col(i);

  diag.condition_number = (rank == m_count) ? sigma_max / sigma(m_count - 1)
                                            : std::numeric_limits<double>::infinity();
  diag.residual_norm = (gram * coefficients - moments).norm();
  return {coefficients, diag};
}

}  // namespace qmm
