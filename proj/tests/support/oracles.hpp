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

// Test-only reference implementations. Everything here is hand-rolled from
// textbook algorithms and stays independent of the solve path under test:
// no SVD, no call into qmm::solve_coefficients.

#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qmm::testing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Textbook Gaussian elimination with partial pivoting on plain vectors.
/// Throws on a (numerically) singular pivot.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    if (std::abs(a[pivot][col]) < 1e-14) throw std::runtime_error("singular pivot");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t row = n; row-- > 0;) {
    double acc = b[row];
    for (std::size_t k = row + 1; k < n; ++k) acc -= a[row][k] * x[k];
    x[row] = acc / a[row][row];
  }
  return x;
}

/// Rank by straightforward row reduction with partial pivoting.
inline int row_reduction_rank(std::vector<std::vector<double>> a, double rel_tol = 1e-10) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0;
  const double tol = rel_tol * scale;

  int rank = 0;
  std::size_t lead_row = 0;
  for (std::size_t col = 0; col < cols && lead_row < rows; ++col) {
    std::size_t pivot = lead_row;
    for (std::size_t row = lead_row + 1; row < rows; ++row)
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    if (std::abs(a[pivot][col]) <= tol) continue;
    std::swap(a[lead_row], a[pivot]);
    for (std::size_t row = 0; row < rows; ++row) {
      if (row == lead_row) continue;
      const double factor = a[row][col] / a[lead_row][col];
      for (std::size_t k = 0; k < cols; ++k) a[row][k] -= factor * a[lead_row][k];
    }
    ++lead_row;
    ++rank;
  }
  return rank;
}

/// Orthonormal null-space basis of the map c -> sum_m c_m phi_m(x_k), found
/// by brute-force Gram-Schmidt: orthonormalize the per-sample basis columns,
/// then extend with unit vectors; whatever survives spans the null space.
inline std::vector<VectorXd> null_space_by_orthogonalization(const MatrixXd& phi,
                                                             double rel_tol = 1e-8) {
  const Eigen::Index m = phi.rows();
  std::vector<VectorXd> range_basis;
  const auto orthogonalize = [&](VectorXd v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const VectorXd& q : range_basis) v -= q.dot(v) * q;
    return v;
  };
  for (Eigen::Index k = 0; k < phi.cols(); ++k) {
    VectorXd column = phi.col(k);
    const double norm = column.norm();
    if (norm == 0.0) continue;
    VectorXd residual = orthogonalize(column / norm);
    if (residual.norm() > rel_tol) range_basis.push_back(residual.normalized());
  }
  std::vector<VectorXd> null_basis;
  for (Eigen::Index i = 0; i < m; ++i) {
    VectorXd candidate = orthogonalize(VectorXd::Unit(m, i));
    for (const VectorXd& q : null_basis) candidate -= q.dot(candidate) * q;
    for (const VectorXd& q : null_basis) candidate -= q.dot(candidate) * q;
    if (candidate.norm() > rel_tol) {
      null_basis.push_back(candidate.normalized());
      if (static_cast<Eigen::Index>(null_basis.size() + range_basis.size()) == m) break;
    }
  }
  return null_basis;
}

/// Weighted squared error sum_k w_k (y_k - sum_m c_m phi(m,k))^2 computed
/// straight from the samples.
inline double weighted_objective(const MatrixXd& phi, const VectorXd& y, const VectorXd& w,
                                 const VectorXd& c) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < phi.cols(); ++k) {
    double fit = 0.0;
    for (Eigen::Index m = 0; m < phi.rows(); ++m) fit += c(m) * phi(m, k);
    const double err = y(k) - fit;
    acc += w(k) * err * err;
  }
  return acc;
}

/// Brute-force minimizer of the weighted objective: conjugate directions
/// with exact quadratic line steps, driven purely by objective/gradient
/// evaluations on the raw samples.
inline VectorXd minimize_weighted_objective(const MatrixXd& phi, const VectorXd& y,
                                            const VectorXd& w) {
  const Eigen::Index m = phi.rows();
  const auto gradient = [&](const VectorXd& c) {
    VectorXd g = VectorXd::Zero(m);
    for (Eigen::Index k = 0; k < phi.cols(); ++k) {
      double fit = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) fit += c(j) * phi(j, k);
      const double err = y(k) - fit;
      for (Eigen::Index j = 0; j < m; ++j) g(j) += -2.0 * w(k) * phi(j, k) * err;
    }
    return g;
  };

  VectorXd c = VectorXd::Zero(m);
  VectorXd g = gradient(c);
  VectorXd direction = -g;
  const int max_iterations = 40 * static_cast<int>(m) + 40;
  for (int it = 0; it < max_iterations; ++it) {
    if (g.norm() < 1e-14 || direction.norm() == 0.0) break;
    // The objective is quadratic, so the curvature along `direction` comes
    // from one extra gradient probe and the line step is exact.
    const VectorXd g_probe = gradient(c + direction);
    const double curvature = (g_probe - g).dot(direction);
    if (!(curvature > 0.0)) {
      direction = -g;  // restart on flat/degenerate directions
      continue;
    }
    const double step = -g.dot(direction) / curvature;
    c += step * direction;
    const VectorXd g_next = gradient(c);
    const double beta =
        std::max(0.0, g_next.dot(g_next - g) / std::max(g.squaredNorm(), 1e-300));
    direction = -g_next + ((it + 1) % (m + 1) == 0 ? 0.0 : beta) * direction;
    g = g_next;
  }
  return c;
}

/// Deterministic generator helpers shared by the property suites.
inline std::mt19937& rng(unsigned seed) {
  thread_local std::mt19937 engine(seed);
  engine.seed(seed);
  return engine;
}

inline double uniform(std::mt19937& engine, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine);
}

}  // namespace qmm::testing
