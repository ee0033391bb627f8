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

#include "qmm/linalg.hpp"

#include <cmath>
#include <limits>

#include <doctest.h>

#include "support/oracles.hpp"

using namespace qmm;

namespace {

DesignSamples make_samples(const MatrixXd& phi, const VectorXd& y) {
  DesignSamples samples;
  samples.phi = phi;
  samples.y = y;
  return samples;
}

MatrixXd random_phi(std::mt19937& engine, Index m, Index n, double lo = -2.0, double hi = 2.0) {
  MatrixXd phi(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index k = 0; k < n; ++k) phi(i, k) = testing::uniform(engine, lo, hi);
  return phi;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("gram matrix of a single constant basis sums the sample count") {
  MatrixXd phi(1, 3);
  phi << 1, 1, 1;
  const MatrixXd gram = gram_matrix(make_samples(phi, VectorXd::Zero(3)));
  REQUIRE(gram.rows() == 1);
  CHECK(gram(0, 0) == 3.0);
}

TEST_CASE("gram matrix matches hand-computed sums of products") {
  MatrixXd phi(2, 3);
  phi << 1, 1, 1, 1, 2, 3;
  const MatrixXd gram = gram_matrix(make_samples(phi, VectorXd::Zero(3)));
  CHECK(gram(0, 0) == 3.0);
  CHECK(gram(0, 1) == 6.0);
  CHECK(gram(1, 0) == 6.0);
  CHECK(gram(1, 1) == 14.0);
}

TEST_CASE("duplicated constant rows produce a rank-deficient Gram matrix") {
  // The degenerate shape of CDF bases with two constant members.
  MatrixXd phi(3, 3);
  phi << 1, 1, 1, 1, 1, 1, 1, 2, 3;
  const MatrixXd gram = gram_matrix(make_samples(phi, VectorXd::Zero(3)));
  CHECK(gram.row(0) == gram.row(1));
  std::vector<std::vector<double>> rows(3, std::vector<double>(3));
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) rows[i][j] = gram(i, j);
  CHECK(testing::row_reduction_rank(rows) == 2);
}

TEST_CASE("moment vector examples") {
  MatrixXd phi(2, 3);
  phi << 1, 1, 1, 1, 2, 3;

  SUBCASE("zero ordinate") {
    MatrixXd single(1, 3);
    single << 1, 1, 1;
    const VectorXd b = moment_vector(make_samples(single, VectorXd::Zero(3)));
    CHECK(b(0) == 0.0);
  }
  SUBCASE("hand-computed sums") {
    VectorXd y(3);
    y << 2, 4, 6;
    const VectorXd b = moment_vector(make_samples(phi, y));
    CHECK(b(0) == 12.0);
    CHECK(b(1) == 28.0);
  }
  SUBCASE("ordinate equal to a basis row reproduces a Gram column") {
    const VectorXd b = moment_vector(make_samples(phi, phi.row(1).transpose()));
    CHECK(b(0) == 6.0);
    CHECK(b(1) == 14.0);
  }
}

TEST_CASE("solve recovers the hand-eliminated solution") {
  MatrixXd gram(2, 2);
  gram << 3, 6, 6, 14;
  VectorXd moments(2);
  moments << 12, 28;
  const auto [c, diag] = solve_coefficients(gram, moments);
  CHECK(std::abs(c(0)) <= 1e-12);
  CHECK(c(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(diag.rank == 2);
  CHECK(std::isfinite(diag.condition_number));
}

TEST_CASE("identity system returns the right-hand side") {
  const MatrixXd gram = MatrixXd::Identity(3, 3);
  VectorXd moments(3);
  moments << -1.5, 2.25, 7.0;
  const auto [c, diag] = solve_coefficients(gram, moments);
  CHECK((c - moments).cwiseAbs().maxCoeff() == 0.0);
  CHECK(diag.rank == 3);
  CHECK(diag.condition_number == 1.0);
  CHECK(diag.residual_norm == 0.0);
}

TEST_CASE("degenerate system gets the minimum-norm least-squares solution") {
  MatrixXd phi(3, 4);
  phi << 1, 1, 1, 1,  // constant
      1, 1, 1, 1,     // duplicated constant
      1, 2, 3, 4;
  VectorXd y(4);
  y << 3.0, 4.5, 5.5, 7.0;
  const DesignSamples samples = make_samples(phi, y);
  const MatrixXd gram = gram_matrix(samples);
  const VectorXd moments = moment_vector(samples);
  const auto [c, diag] = solve_coefficients(gram, moments);

  CHECK(diag.rank == 2);
  CHECK(std::isinf(diag.condition_number));
  CHECK((gram * c - moments).norm() <= 1e-9 * moments.norm());
  for (const VectorXd& null_vec : testing::null_space_by_orthogonalization(phi)) {
    CHECK(std::abs(c.dot(null_vec)) <= 1e-9 * std::max(1.0, c.norm()));
  }
}

TEST_CASE("errors: empty system, no informative basis, asymmetric input") {
  CHECK_THROWS_AS(solve_coefficients(MatrixXd(0, 0), VectorXd(0)), SolveError);

  const MatrixXd zero = MatrixXd::Zero(2, 2);
  VectorXd nonzero(2);
  nonzero << 1, 0;
  CHECK_THROWS_WITH_AS(solve_coefficients(zero, nonzero),
                       doctest::Contains("no informative basis"), SolveError);

  // Rank 0 with a zero right-hand side is solvable: c = 0.
  const auto [c, diag] = solve_coefficients(zero, VectorXd::Zero(2));
  CHECK(c.norm() == 0.0);
  CHECK(diag.rank == 0);

  MatrixXd asymmetric(2, 2);
  asymmetric << 1, 2, 3, 4;
  CHECK_THROWS_AS(solve_coefficients(asymmetric, VectorXd::Zero(2)), std::invalid_argument);

  MatrixXd rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(gram_matrix(make_samples(MatrixXd(0, 0), VectorXd(0))),
                  std::invalid_argument);
}

TEST_CASE("non-finite entries are rejected with basis and sample indices") {
  MatrixXd phi(2, 3);
  phi << 1, 1, 1, 1, std::numeric_limits<double>::quiet_NaN(), 3;
  CHECK_THROWS_WITH_AS(gram_matrix(make_samples(phi, VectorXd::Zero(3))),
                       doctest::Contains("basis index 1, sample index 1"), DataError);
  MatrixXd ok(1, 2);
  ok << 1, 1;
  VectorXd bad_y(2);
  bad_y << 1, std::numeric_limits<double>::infinity();
  CHECK_THROWS_WITH_AS(moment_vector(make_samples(ok, bad_y)),
                       doctest::Contains("sample index 1"), DataError);
}

TEST_CASE("weight validation") {
  MatrixXd phi(1, 2);
  phi << 1, 1;
  VectorXd y(2);
  y << 1, 2;
  FitOptions opts;
  opts.weights = VectorXd::Zero(2);
  CHECK_THROWS_AS(gram_matrix(make_samples(phi, y), opts), std::invalid_argument);
  opts.weights = -VectorXd::Ones(2);
  CHECK_THROWS_AS(gram_matrix(make_samples(phi, y), opts), std::invalid_argument);
  opts.weights = VectorXd::Ones(3);
  CHECK_THROWS_AS(gram_matrix(make_samples(phi, y), opts), std::invalid_argument);

  // Weighted sums: w = (1, 3) on phi = 1 gives <phi,phi> = 4.
  opts.weights = VectorXd(2);
  (*opts.weights) << 1, 3;
  CHECK(gram_matrix(make_samples(phi, y), opts)(0, 0) == 4.0);
  CHECK(moment_vector(make_samples(phi, y), opts)(0) == 7.0);
}

TEST_CASE("property: Gram output is symmetric bit-for-bit") {
  auto& engine = testing::rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = 1 + engine() % 6;
    const Index n = 1 + engine() % 20;
    const MatrixXd gram = gram_matrix(make_samples(random_phi(engine, m, n), VectorXd::Zero(n)));
    const MatrixXd transposed = gram.transpose();
    CHECK(gram == transposed);
  }
}

TEST_CASE("property: Gram matrices are positive semidefinite") {
  auto& engine = testing::rng(202);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = 1 + engine() % 6;
    const Index n = 1 + engine() % 20;
    FitOptions opts;
    if (trial % 3 == 0) {
      VectorXd w(n);
      for (Index k = 0; k < n; ++k) w(k) = testing::uniform(engine, 0.0, 2.0);
      w(0) = 1.0;
      opts.weights = w;
    }
    const MatrixXd gram =
        gram_matrix(make_samples(random_phi(engine, m, n), VectorXd::Zero(n)), opts);
    const VectorXd eigenvalues = Eigen::SelfAdjointEigenSolver<MatrixXd>(gram).eigenvalues();
    CHECK(eigenvalues.minCoeff() >= -1e-9 * gram.trace());
  }
}

TEST_CASE("property: solve matches a textbook elimination oracle on full-rank systems") {
  auto& engine = testing::rng(303);
  int accepted = 0;
  while (accepted < 100) {
    const Index m = 1 + engine() % 4;
    const Index n = std::max<Index>(m, 1 + engine() % 10);
    const MatrixXd phi = random_phi(engine, m, n);
    VectorXd y(n);
    for (Index k = 0; k < n; ++k) y(k) = testing::uniform(engine, -2.0, 2.0);

    const DesignSamples samples = make_samples(phi, y);
    const MatrixXd gram = gram_matrix(samples);
    const VectorXd moments = moment_vector(samples);
    const Eigen::JacobiSVD<MatrixXd> svd(gram);
    if (svd.singularValues()(m - 1) < 1e-6 * svd.singularValues()(0)) continue;  // keep well-posed
    ++accepted;

    std::vector<std::vector<double>> gram_rows(m, std::vector<double>(m));
    std::vector<double> rhs(m);
    for (Index i = 0; i < m; ++i) {
      rhs[i] = moments(i);
      for (Index j = 0; j < m; ++j) gram_rows[i][j] = gram(i, j);
    }
    const std::vector<double> oracle = testing::gauss_solve(gram_rows, rhs);
    const auto [c, diag] = solve_coefficients(gram, moments);
    REQUIRE(diag.rank == m);
    for (Index i = 0; i < m; ++i) CHECK(c(i) == doctest::Approx(oracle[i]).epsilon(1e-9));
  }
}

TEST_CASE("property: single-coefficient perturbations never beat the solution") {
  auto& engine = testing::rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const Index m = 1 + engine() % 5;
    const Index n = 1 + engine() % 12;
    const MatrixXd phi = random_phi(engine, m, n);
    VectorXd y(n);
    for (Index k = 0; k < n; ++k) y(k) = testing::uniform(engine, -2.0, 2.0);
    VectorXd w = VectorXd::Ones(n);
    if (trial % 2 == 0)
      for (Index k = 0; k < n; ++k) w(k) = testing::uniform(engine, 0.1, 2.0);

    FitOptions opts;
    opts.weights = w;
    const DesignSamples samples = make_samples(phi, y);
    const auto [c, diag] =
        solve_coefficients(gram_matrix(samples, opts), moment_vector(samples, opts), opts);

    const double best = testing::weighted_objective(phi, y, w, c);
    for (Index i = 0; i < m; ++i) {
      for (double delta : {-1e-3, 1e-3}) {
        VectorXd perturbed = c;
        perturbed(i) += delta;
        CHECK(testing::weighted_objective(phi, y, w, perturbed) >= best - 1e-12 * (1.0 + best));
      }
    }
  }
}

TEST_CASE("property: rank-deficient solutions have minimum norm") {
  auto& engine = testing::rng(505);
  for (int trial = 0; trial < 40; ++trial) {
    const Index rank = 1 + engine() % 3;
    const Index m = rank + 1 + engine() % 2;  // force deficiency
    const Index n = 4 + engine() % 8;
    const MatrixXd independent = random_phi(engine, rank, n);
    MatrixXd phi(m, n);
    phi.topRows(rank) = independent;
    for (Index i = rank; i < m; ++i) {
      // dependent rows: random combinations of the independent ones
      VectorXd combo = VectorXd::Zero(n);
      for (Index j = 0; j < rank; ++j)
        combo += testing::uniform(engine, -1.5, 1.5) * independent.row(j).transpose();
      phi.row(i) = combo.transpose();
    }
    VectorXd y(n);
    for (Index k = 0; k < n; ++k) y(k) = testing::uniform(engine, -2.0, 2.0);

    const DesignSamples samples = make_samples(phi, y);
    const MatrixXd gram = gram_matrix(samples);
    const VectorXd moments = moment_vector(samples);
    const auto [c, diag] = solve_coefficients(gram, moments);
    CHECK(diag.rank < m);

    const auto null_basis = testing::null_space_by_orthogonalization(phi);
    REQUIRE(!null_basis.empty());
    for (const VectorXd& null_vec : null_basis) {
      for (double t : {-1.0, -0.1, 0.1, 1.0}) {
        const VectorXd alternative = c + t * null_vec;
        CHECK(alternative.norm() >= c.norm() - 1e-9);
      }
    }
  }
}

}  // TEST_SUITE
