#include <doctest.h>

#include <cmath>

#include "fuzzyspec/hilbert.hpp"
#include "fuzzyspec/rng.hpp"

using namespace fuzzyspec;

namespace {
constexpr Complex kI{0.0, 1.0};
}

TEST_CASE("inner product: unit function normalization") {
  const Grid g = uniform_trapezoid_grid(0.0, 1.0, 3);
  const CVec one = CVec::Ones(3);
  CHECK(inner_product(one, one, g).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(inner_product(one, one, g).imag() == doctest::Approx(0.0));
}

TEST_CASE("inner product: disjoint supports are orthogonal") {
  const Grid g = uniform_trapezoid_grid(0.0, 1.0, 8);
  CVec a = CVec::Zero(8), b = CVec::Zero(8);
  a[1] = 1.0;
  b[5] = 2.0;
  CHECK(std::abs(inner_product(a, b, g)) == 0.0);
}

TEST_CASE("inner product: conjugate symmetry and oscillatory quadrature") {
  const int n = 256;
  const Grid g = uniform_trapezoid_grid(0.0, 1.0, n);
  CVec osc(n), one = CVec::Ones(n);
  for (int j = 0; j < n; ++j)
    osc[j] = std::exp(2.0 * M_PI * kI * g.points[j]);
  // closed form: integral of e^{2 pi i lambda} over [0,1] vanishes
  CHECK(std::abs(inner_product(osc, one, g)) < 1e-3);
  const Complex ab = inner_product(osc, one, g);
  const Complex ba = inner_product(one, osc, g);
  CHECK(std::abs(ab - std::conj(ba)) < 1e-15);
}

TEST_CASE("inner product: length mismatch throws") {
  const Grid g = uniform_trapezoid_grid(0.0, 1.0, 4);
  CHECK_THROWS_AS(inner_product(CVec::Ones(3), CVec::Ones(4), g), dimension_error);
}

TEST_CASE("orthonormalize: idempotent on an orthonormal set") {
  const Grid g = unit_weight_grid(5);
  CMat v = CMat::Identity(5, 3);
  const Subspace s = orthonormalize(v, g);
  CHECK(s.dim() == 3);
  CHECK((s.basis - v).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("orthonormalize: duplicate columns collapse") {
  const Grid g = uniform_trapezoid_grid(0.0, 1.0, 6);
  CMat v(6, 2);
  v.col(0) = CVec::Ones(6);
  v.col(1) = CVec::Ones(6);
  CHECK(orthonormalize(v, g).dim() == 1);
}

TEST_CASE("orthonormalize: random columns give identity Gram matrix") {
  const Grid g = uniform_trapezoid_grid(0.0, 2.0, 8);
  Rng rng(7);
  const Subspace s = orthonormalize(rng.cgaussian_matrix(8, 3), g);
  CHECK(s.dim() == 3);
  CHECK(orthonormality_defect(s, g) < 1e-10);
}

TEST_CASE("orthonormalize: all-zero input yields the empty subspace") {
  const Grid g = unit_weight_grid(4);
  CHECK(orthonormalize(CMat::Zero(4, 2), g).dim() == 0);
}

TEST_CASE("eigh: diagonal matrix sorted") {
  const Grid g = unit_weight_grid(3);
  CMat m = CMat::Zero(3, 3);
  m(0, 0) = 2.0;
  m(1, 1) = -1.0;
  m(2, 2) = 0.5;
  const SpectralData sd = eigh(m, g);
  CHECK(sd.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(sd.eigenvalues[1] == doctest::Approx(0.5));
  CHECK(sd.eigenvalues[2] == doctest::Approx(2.0));
}

TEST_CASE("eigh: zero matrix") {
  const Grid g = uniform_trapezoid_grid(0.0, 1.0, 4);
  const SpectralData sd = eigh(CMat::Zero(4, 4), g);
  CHECK(sd.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eigh: Dirichlet Laplacian ground state") {
  // -d^2/dlambda^2 on interior points, Dirichlet ends; oracle (n pi)^2
  const int n = 512;
  const double h = 1.0 / (n + 1);
  Grid g;
  g.points = RVec::LinSpaced(n, h, 1.0 - h);
  g.weights = RVec::Constant(n, h);
  CMat m = CMat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    m(j, j) = 2.0 / (h * h);
    if (j > 0) m(j, j - 1) = -1.0 / (h * h);
    if (j + 1 < n) m(j, j + 1) = -1.0 / (h * h);
  }
  const SpectralData sd = eigh(m, g);
  CHECK(sd.eigenvalues[0] ==
        doctest::Approx(M_PI * M_PI).epsilon(0.005));
}

TEST_CASE("eigh: non-Hermitian input rejected with defect") {
  const Grid g = unit_weight_grid(3);
  CMat m = CMat::Zero(3, 3);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(eigh(m, g), symmetry_error);
}

TEST_CASE("eigh: weighted reconstruction identity") {
  const Grid g = uniform_trapezoid_grid(0.0, 1.0, 12);
  Rng rng(11);
  CMat a = rng.cgaussian_matrix(12, 12);
  // Hermitian w.r.t. the weighted inner product: W A = (W A)^H
  CMat wa = a;
  for (int i = 0; i < 12; ++i) wa.row(i) *= g.weights[i];
  wa = CMat((wa + wa.adjoint()) * 0.5);
  for (int i = 0; i < 12; ++i) a.row(i) = wa.row(i) / g.weights[i];
  const SpectralData sd = eigh(a, g);
  CMat recon = CMat::Zero(12, 12);
  for (int k = 0; k < 12; ++k) {
    CVec wv = sd.eigenvectors.col(k);
    for (int i = 0; i < 12; ++i) wv[i] = std::conj(wv[i]) * g.weights[i];
    recon += sd.eigenvalues[k] * sd.eigenvectors.col(k) * wv.transpose();
  }
  CHECK((recon - a).norm() < 1e-8 * a.norm());
}

TEST_CASE("complement: full and empty edge cases") {
  const Grid g = uniform_trapezoid_grid(0.0, 1.0, 4);
  CHECK(complement(Subspace::full(g), g).dim() == 0);
  CHECK(complement(Subspace::empty(4), g).dim() == 4);
}

TEST_CASE("complement: orthogonal to the input span") {
  const Grid g = unit_weight_grid(4);
  CMat v = CMat::Zero(4, 1);
  v(0, 0) = 1.0;
  const Subspace s = orthonormalize(v, g);
  const Subspace c = complement(s, g);
  CHECK(c.dim() == 3);
  for (int j = 0; j < 3; ++j)
    CHECK(std::abs(inner_product(s.basis.col(0), c.basis.col(j), g)) < 1e-12);
}

TEST_CASE("complement: involution on dimensions") {
  const Grid g = uniform_trapezoid_grid(-1.0, 1.0, 7);
  Rng rng(3);
  const Subspace s = orthonormalize(rng.cgaussian_matrix(7, 3), g);
  CHECK(complement(complement(s, g), g).dim() == s.dim());
}
