#include <doctest.h>

#include <cmath>

#include "fuzzyspec/operators.hpp"
#include "fuzzyspec/rng.hpp"

using namespace fuzzyspec;

TEST_CASE("interval derivative: symmetric on its domain") {
  const auto op = build_interval_derivative(1, 128, Backend::FiniteDifference);
  CHECK(check_symmetry(op) < 1e-10);
  const auto sp = build_interval_derivative(1, 128, Backend::Spectral);
  CHECK(check_symmetry(sp) < 1e-10);
}

TEST_CASE("interval derivative: domain codimension two per copy (fd)") {
  const auto op = build_interval_derivative(1, 64, Backend::FiniteDifference);
  CHECK(op.ambient_dim() - op.domain.dim() == 2);
  const auto op3 = build_interval_derivative(3, 64, Backend::FiniteDifference);
  CHECK(op3.ambient_dim() - op3.domain.dim() == 6);
}

TEST_CASE("interval derivative: three copies are block-diagonal and identical") {
  const auto op = build_interval_derivative(3, 64, Backend::FiniteDifference);
  const int n = op.points_per_copy;
  // no cross-copy coupling at all
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const CMat blk = op.matrix.block(a * n, b * n, n, n);
      if (a == b)
        CHECK((blk - op.matrix.topLeftCorner(n, n)).cwiseAbs().maxCoeff() == 0.0);
      else
        CHECK(blk.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("interval derivative: N below 16 rejected") {
  CHECK_THROWS_AS(build_interval_derivative(1, 8, Backend::FiniteDifference),
                  config_error);
}

TEST_CASE("halfline derivative: symmetry and normalizability scales") {
  const double L = 12.0;
  const auto op = build_halfline_derivative(512, L);
  CHECK(check_symmetry(op) < 1e-8);

  CVec decay(512), grow(512);
  for (int j = 0; j < 512; ++j) {
    decay[j] = std::exp(-op.grid.points[j]);
    grow[j] = std::exp(op.grid.points[j]);
  }
  const double n2 = std::pow(weighted_norm(decay, op.grid), 2);
  CHECK(n2 == doctest::Approx((1.0 - std::exp(-2.0 * L)) / 2.0).epsilon(1e-3));
  // e^{+lambda} blows up like e^{2L}/2: far above any normalizability cut
  const double g2 = std::pow(weighted_norm(grow, op.grid), 2);
  CHECK(g2 > 0.5 * std::exp(2.0 * L) * 0.9);
  CHECK_THROWS_AS(build_halfline_derivative(512, 5.0), config_error);
}

TEST_CASE("beta algebra: Heisenberg degeneration at tiny beta") {
  const double beta = 1e-12;
  // odd N puts a sample exactly at p = 0, where 1 + beta p^2 = 1
  const int n = 513;
  const auto m = build_beta_algebra(beta, 20.0 / std::sqrt(beta), n);
  const double h = 2.0 * m.cutoff / (n - 1);
  const int mid = n / 2;
  CHECK(m.x_op.grid.points[mid] == 0.0);
  CHECK(std::abs(m.x_op.matrix(mid, mid + 1) - Complex(0.0, 0.5 / h)) <
        1e-9 * (0.5 / h));
  const auto m1024 = build_beta_algebra(beta, 20.0 / std::sqrt(beta), 1024);
  CHECK(check_commutator(m1024) < 1e-3);
}

TEST_CASE("beta algebra: symmetry and commutator residual at beta=1") {
  const auto m = build_beta_algebra(1.0, 20.0, 1024);
  CHECK(check_symmetry(m.x_op) < 1e-8);
  CHECK(check_commutator(m) < 1e-3);
  CHECK_THROWS_AS(build_beta_algebra(-1.0, 20.0, 1024), config_error);
}

TEST_CASE("beta algebra: commutator residual is second order in 1/N") {
  const auto coarse = build_beta_algebra(1.0, 20.0, 256);
  const auto fine = build_beta_algebra(1.0, 20.0, 512);
  const double ratio = check_commutator(coarse) / check_commutator(fine);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("matrix model: full domain at codim zero") {
  Rng rng(42);
  const CMat raw = rng.cgaussian_matrix(6, 6);
  const CMat a = (raw + raw.adjoint()) * 0.5;
  const auto op = build_matrix_model(a, 0);
  CHECK(op.domain.dim() == 6);
  CHECK(check_symmetry(op) < 1e-12);
}

TEST_CASE("matrix model: deterministic domain under a fixed seed") {
  Rng rng(42);
  const CMat raw = rng.cgaussian_matrix(6, 6);
  const CMat a = (raw + raw.adjoint()) * 0.5;
  const auto op1 = build_matrix_model(a, 1, 7);
  const auto op2 = build_matrix_model(a, 1, 7);
  CHECK((op1.domain.basis - op2.domain.basis).cwiseAbs().maxCoeff() == 0.0);
  CHECK(op1.ambient_dim() - op1.domain.dim() == 1);
}

TEST_CASE("matrix model: non-Hermitian input rejected") {
  CMat a = CMat::Zero(6, 6);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(build_matrix_model(a, 1), symmetry_error);
}

TEST_CASE("check_symmetry: boundary rows break symmetry on the full space") {
  auto op = build_interval_derivative(1, 64, Backend::FiniteDifference);
  OperatorOnDomain full = op;
  full.domain = Subspace::full(op.grid);
  CHECK(check_symmetry(op) < 1e-10);
  CHECK(check_symmetry(full) > 1e-4);
}

TEST_CASE("direct sum: blocks preserved and parts recorded") {
  const auto a = build_interval_derivative(1, 32, Backend::FiniteDifference);
  const auto b = build_halfline_derivative(32, 12.0);
  const auto s = direct_sum(a, b);
  CHECK(s.ambient_dim() == a.ambient_dim() + b.ambient_dim());
  CHECK(s.parts.size() == 2);
  CHECK(check_symmetry(s) < 1e-8);
}
