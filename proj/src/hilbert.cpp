#include "fuzzyspec/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace fuzzyspec {

void Grid::validate() const {
  if (points.size() != weights.size())
    throw dimension_error("grid points/weights length mismatch");
  if (points.size() == 0) throw dimension_error("empty grid");
  for (Eigen::Index k = 0; k < weights.size(); ++k)
    if (!(weights[k] > 0)) throw parameter_error("grid weights must be positive");
  for (Eigen::Index k = 1; k < points.size(); ++k)
    if (!(points[k] > points[k - 1]))
      throw parameter_error("grid points must be strictly increasing");
}

Grid uniform_trapezoid_grid(double a, double b, int n) {
  if (n < 2) throw config_error("grid needs at least 2 points");
  Grid g;
  g.points = RVec::LinSpaced(n, a, b);
  const double h = (b - a) / static_cast<double>(n - 1);
  g.weights = RVec::Constant(n, h);
  g.weights[0] *= 0.5;
  g.weights[n - 1] *= 0.5;
  return g;
}

Grid periodic_unit_grid(int n) {
  if (n < 2) throw config_error("grid needs at least 2 points");
  Grid g;
  g.points = RVec::LinSpaced(n, 0.0, static_cast<double>(n - 1) / n);
  g.weights = RVec::Constant(n, 1.0 / n);
  return g;
}

Grid unit_weight_grid(int n) {
  Grid g;
  g.points = RVec::LinSpaced(n, 0.0, static_cast<double>(n - 1));
  g.weights = RVec::Ones(n);
  return g;
}

Subspace Subspace::full(const Grid& g) {
  Subspace s;
  s.ambient_dim = g.size();
  s.basis = CMat::Zero(s.ambient_dim, s.ambient_dim);
  for (Eigen::Index k = 0; k < s.ambient_dim; ++k)
    s.basis(k, k) = 1.0 / std::sqrt(g.weights[k]);
  return s;
}

Subspace Subspace::empty(Eigen::Index ambient) {
  Subspace s;
  s.ambient_dim = ambient;
  s.basis = CMat::Zero(ambient, 0);
  return s;
}

Complex inner_product(const CVec& phi, const CVec& psi, const Grid& g) {
  if (phi.size() != g.size() || psi.size() != g.size())
    throw dimension_error("inner_product: vector/grid length mismatch");
  Complex acc = 0.0;
  for (Eigen::Index k = 0; k < g.size(); ++k)
    acc += g.weights[k] * std::conj(phi[k]) * psi[k];
  return acc;
}

double weighted_norm(const CVec& phi, const Grid& g) {
  return std::sqrt(std::abs(inner_product(phi, phi, g)));
}

namespace {

// One MGS sweep of v against the columns already in q.
void project_out(CVec& v, const CMat& q, const Grid& g) {
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    v -= inner_product(q.col(j), v, g) * q.col(j);
}

}  // namespace

Subspace orthonormalize(const CMat& v, const Grid& g, double tol) {
  if (v.rows() != g.size())
    throw dimension_error("orthonormalize: matrix rows != grid size");
  double maxn = 0.0;
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    maxn = std::max(maxn, weighted_norm(v.col(j), g));

  Subspace out;
  out.ambient_dim = v.rows();
  if (maxn == 0.0) {
    out.basis = CMat::Zero(v.rows(), 0);
    return out;
  }

  CMat q(v.rows(), v.cols());
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    CVec w = v.col(j);
    project_out(w, q.leftCols(rank), g);
    project_out(w, q.leftCols(rank), g);  // re-orthogonalization pass
    const double n = weighted_norm(w, g);
    if (n >= tol * maxn) q.col(rank++) = w / n;
  }
  out.basis = q.leftCols(rank);
  return out;
}

std::pair<CMat, CMat> weighted_thin_qr(const CMat& v, const Grid& g) {
  if (v.rows() != g.size())
    throw dimension_error("weighted_thin_qr: matrix rows != grid size");
  const Eigen::Index n = v.cols();
  CMat q(v.rows(), n);
  CMat r = CMat::Zero(n, n);
  double maxn = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    maxn = std::max(maxn, weighted_norm(v.col(j), g));
  for (Eigen::Index j = 0; j < n; ++j) {
    CVec w = v.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const Complex c = inner_product(q.col(i), w, g);
        r(i, j) += c;
        w -= c * q.col(i);
      }
    }
    const double nn = weighted_norm(w, g);
    if (nn < 1e-12 * maxn)
      throw numerical_error("weighted_thin_qr: rank-deficient input");
    r(j, j) = nn;
    q.col(j) = w / nn;
  }
  return {q, r};
}

SpectralData eigh(const CMat& m, const Grid& g) {
  if (m.rows() != m.cols() || m.rows() != g.size())
    throw dimension_error("eigh: matrix/grid size mismatch");
  const Eigen::Index n = m.rows();

  // Similarity transform to a plainly Hermitian matrix: A = D M D^{-1},
  // D = diag(sqrt(w)).  W-orthonormal eigenvectors are D^{-1} * (std ones).
  RVec d = g.weights.cwiseSqrt();
  CMat a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = m(i, j) * d[i] / d[j];

  const double scale = a.norm();
  const double defect = (a - a.adjoint()).norm();
  if (scale > 0 && defect > 1e-9 * scale)
    throw symmetry_error("eigh: matrix not Hermitian w.r.t. grid weights",
                         defect / scale);

  Eigen::SelfAdjointEigenSolver<CMat> solver((a + a.adjoint()) * 0.5);
  if (solver.info() != Eigen::Success)
    throw numerical_error("eigh: eigensolver failed to converge");

  SpectralData out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  for (Eigen::Index i = 0; i < n; ++i) out.eigenvectors.row(i) /= d[i];
  return out;
}

Subspace complement(const Subspace& s, const Grid& g) {
  if (s.ambient_dim != g.size())
    throw dimension_error("complement: subspace/grid mismatch");
  const Eigen::Index n = s.ambient_dim;
  const Eigen::Index target = n - s.dim();

  Subspace out;
  out.ambient_dim = n;
  CMat q(n, target);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < n && rank < target; ++k) {
    CVec w = CVec::Zero(n);
    w[k] = 1.0 / std::sqrt(g.weights[k]);  // unit W-norm candidate
    for (int pass = 0; pass < 2; ++pass) {
      project_out(w, s.basis, g);
      project_out(w, q.leftCols(rank), g);
    }
    const double nn = weighted_norm(w, g);
    if (nn >= 1e-8) q.col(rank++) = w / nn;
  }
  if (rank != target)
    throw numerical_error("complement: rank deficiency while completing basis");
  out.basis = q;
  return out;
}

double orthonormality_defect(const Subspace& s, const Grid& g) {
  if (s.dim() == 0) return 0.0;
  CMat gram(s.dim(), s.dim());
  for (Eigen::Index j = 0; j < s.dim(); ++j)
    for (Eigen::Index i = 0; i < s.dim(); ++i)
      gram(i, j) = inner_product(s.basis.col(i), s.basis.col(j), g);
  gram -= CMat::Identity(s.dim(), s.dim());
  return gram.cwiseAbs().maxCoeff();
}

double distance_to_subspace(const CVec& v, const Subspace& s, const Grid& g) {
  CVec w = v;
  project_out(w, s.basis, g);
  project_out(w, s.basis, g);
  return weighted_norm(w, g);
}

double operator_norm_estimate(const CMat& m) {
  const double n1 = m.cwiseAbs().colwise().sum().maxCoeff();
  const double ninf = m.cwiseAbs().rowwise().sum().maxCoeff();
  return std::sqrt(n1 * ninf);
}

}  // namespace fuzzyspec
