#include "fuzzyspec/operators.hpp"

#include <cmath>
#include <cstdio>

#include "fuzzyspec/rng.hpp"

namespace fuzzyspec {

namespace {

constexpr Complex kI{0.0, 1.0};

// Central second-order stencil, one-sided second-order rows at both edges.
// Returns the plain d/dlambda matrix for one block of n points, spacing h.
Eigen::MatrixXd derivative_stencil(int n, double h) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k + 1 < n; ++k) {
    d(k, k + 1) = 0.5 / h;
    d(k, k - 1) = -0.5 / h;
  }
  d(0, 0) = -1.5 / h;
  d(0, 1) = 2.0 / h;
  d(0, 2) = -0.5 / h;
  d(n - 1, n - 1) = 1.5 / h;
  d(n - 1, n - 2) = -2.0 / h;
  d(n - 1, n - 3) = 0.5 / h;
  return d;
}

// Delta-function domain basis: unit W-norm spikes at the listed indices.
Subspace delta_domain(const Grid& g, const std::vector<Eigen::Index>& idx) {
  Subspace s;
  s.ambient_dim = g.size();
  s.basis = CMat::Zero(g.size(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j)
    s.basis(idx[j], static_cast<Eigen::Index>(j)) = 1.0 / std::sqrt(g.weights[idx[j]]);
  return s;
}

// Stack per-copy grids with a gap so global points stay strictly increasing.
Grid stack_copies(const Grid& unit, int copies, double stride) {
  Grid g;
  const Eigen::Index n = unit.size();
  g.points.resize(n * copies);
  g.weights.resize(n * copies);
  g.measure_label = unit.measure_label;
  for (int c = 0; c < copies; ++c) {
    g.points.segment(c * n, n) = unit.points.array() + stride * c;
    g.weights.segment(c * n, n) = unit.weights;
  }
  return g;
}

}  // namespace

const char* to_string(Backend b) {
  switch (b) {
    case Backend::FiniteDifference: return "finite-difference";
    case Backend::Spectral: return "spectral";
    case Backend::MatrixModel: return "matrix";
  }
  return "?";
}

bool OperatorOnDomain::is_interval_model() const {
  return model_tag.rfind("interval", 0) == 0;
}

bool OperatorOnDomain::is_halfline_model() const {
  return model_tag.rfind("halfline", 0) == 0;
}

OperatorOnDomain build_interval_derivative(int copies, int n, Backend backend,
                                           double hbar) {
  if (n < 16) throw config_error("build_interval_derivative: need N >= 16");
  if (copies < 1) throw config_error("build_interval_derivative: copies >= 1");
  if (backend == Backend::MatrixModel)
    throw config_error("build_interval_derivative: backend must be finite-difference or spectral");

  OperatorOnDomain op;
  op.copies = copies;
  op.points_per_copy = n;
  op.hbar = hbar;
  op.backend = backend;
  op.copy_length = 1.0;

  CMat block;
  std::vector<Eigen::Index> interior;

  if (backend == Backend::FiniteDifference) {
    Grid unit = uniform_trapezoid_grid(0.0, 1.0, n);
    op.grid = stack_copies(unit, copies, 2.0);
    const double h = 1.0 / (n - 1);
    block = kI * hbar * derivative_stencil(n, h).cast<Complex>();
    for (int c = 0; c < copies; ++c)
      for (int j = 1; j + 1 < n; ++j) interior.push_back(c * n + j);
    op.model_tag = "interval-fd";
  } else {
    Grid unit = periodic_unit_grid(n);
    op.grid = stack_copies(unit, copies, 2.0);
    // Exact differentiation on the exponential basis e^{-2 pi i m lambda}.
    block = CMat::Zero(n, n);
    for (int m = -n / 2; m < (n + 1) / 2; ++m) {
      const double mu = 2.0 * M_PI * m;
      CVec v(n);
      for (int j = 0; j < n; ++j)
        v[j] = std::exp(-kI * mu * (static_cast<double>(j) / n));
      block += (hbar * mu / n) * v * v.adjoint();
    }
    for (int c = 0; c < copies; ++c)
      for (int j = 1; j < n; ++j) interior.push_back(c * n + j);
    op.model_tag = "interval-spectral";
  }

  const Eigen::Index dim = static_cast<Eigen::Index>(n) * copies;
  op.matrix = CMat::Zero(dim, dim);
  for (int c = 0; c < copies; ++c)
    op.matrix.block(c * n, c * n, n, n) = block;
  op.domain = delta_domain(op.grid, interior);
  return op;
}

OperatorOnDomain build_halfline_derivative(int n, double length, double hbar) {
  if (length < 10.0)
    throw config_error("build_halfline_derivative: need L >= 10");
  if (n < 16) throw config_error("build_halfline_derivative: need N >= 16");

  OperatorOnDomain op;
  op.grid = uniform_trapezoid_grid(0.0, length, n);
  op.copies = 1;
  op.points_per_copy = n;
  op.hbar = hbar;
  op.copy_length = length;
  op.backend = Backend::FiniteDifference;
  // The far edge is a truncation of [0, inf); its sample is excluded from the
  // domain as a surrogate for L^2 decay.
  op.model_tag = "halfline-fd;absorbing-far-edge";

  const double h = length / (n - 1);
  op.matrix = kI * hbar * derivative_stencil(n, h).cast<Complex>();
  std::vector<Eigen::Index> interior;
  for (int j = 1; j + 1 < n; ++j) interior.push_back(j);
  op.domain = delta_domain(op.grid, interior);
  return op;
}

BetaAlgebraModel build_beta_algebra(double beta, double cutoff, int n, double hbar) {
  if (!(beta > 0)) throw config_error("build_beta_algebra: beta must be > 0");
  if (cutoff * std::sqrt(beta) < 10.0 - 1e-12)
    throw config_error("build_beta_algebra: need P*sqrt(beta) >= 10");
  if (n < 16) throw config_error("build_beta_algebra: need N >= 16");

  BetaAlgebraModel m;
  m.beta = beta;
  m.cutoff = cutoff;
  m.hbar = hbar;

  Grid g = uniform_trapezoid_grid(-cutoff, cutoff, n);
  for (Eigen::Index k = 0; k < n; ++k)
    g.weights[k] /= 1.0 + beta * g.points[k] * g.points[k];
  g.measure_label = "beta-measure";

  const double h = 2.0 * cutoff / (n - 1);
  Eigen::MatrixXd d = derivative_stencil(n, h);
  CMat x = CMat::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    x.row(k) = kI * hbar * (1.0 + beta * g.points[k] * g.points[k]) *
               d.row(k).cast<Complex>();

  std::vector<Eigen::Index> interior;
  for (Eigen::Index j = 1; j + 1 < n; ++j) interior.push_back(j);

  m.x_op.matrix = x;
  m.x_op.grid = g;
  m.x_op.domain = delta_domain(g, interior);
  m.x_op.copies = 1;
  m.x_op.points_per_copy = n;
  m.x_op.hbar = hbar;
  m.x_op.copy_length = 2.0 * cutoff;
  m.x_op.backend = Backend::FiniteDifference;
  {
    char buf[40];
    std::snprintf(buf, sizeof buf, "beta-x;beta=%.17g", beta);
    m.x_op.model_tag = buf;
  }

  m.p_op.matrix = CMat::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) m.p_op.matrix(k, k) = g.points[k];
  m.p_op.grid = g;
  m.p_op.domain = Subspace::full(g);
  m.p_op.copies = 1;
  m.p_op.points_per_copy = n;
  m.p_op.hbar = hbar;
  m.p_op.backend = Backend::FiniteDifference;
  m.p_op.model_tag = "beta-p";
  return m;
}

OperatorOnDomain build_matrix_model(const CMat& m, int domain_codim,
                                    std::uint64_t seed) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) throw dimension_error("build_matrix_model: square matrix required");
  if (n < 2 * domain_codim + 2)
    throw config_error("build_matrix_model: need ambient dim >= 2r + 2");
  const double defect = (m - m.adjoint()).norm();
  if (defect > 1e-9 * std::max(1.0, m.norm()))
    throw symmetry_error("build_matrix_model: matrix not Hermitian", defect);

  OperatorOnDomain op;
  op.grid = unit_weight_grid(static_cast<int>(n));
  op.matrix = (m + m.adjoint()) * 0.5;
  op.copies = 1;
  op.points_per_copy = static_cast<int>(n);
  op.backend = Backend::MatrixModel;
  op.model_tag = "matrix-model;seed=" + std::to_string(seed);

  if (domain_codim == 0) {
    op.domain = Subspace::full(op.grid);
    return op;
  }
  Rng rng(seed);
  CMat dirs = rng.cgaussian_matrix(n, domain_codim);
  Subspace excluded = orthonormalize(dirs, op.grid);
  if (excluded.dim() != domain_codim)
    throw numerical_error("build_matrix_model: random directions degenerate");
  op.domain = complement(excluded, op.grid);
  return op;
}

OperatorOnDomain direct_sum(const OperatorOnDomain& a, const OperatorOnDomain& b) {
  OperatorOnDomain op;
  const Eigen::Index na = a.ambient_dim();
  const Eigen::Index nb = b.ambient_dim();
  op.grid.points.resize(na + nb);
  op.grid.weights.resize(na + nb);
  const double shift = a.grid.points[na - 1] + 1.0 - b.grid.points[0];
  op.grid.points << a.grid.points, (b.grid.points.array() + shift).matrix();
  op.grid.weights << a.grid.weights, b.grid.weights;
  op.grid.measure_label = a.grid.measure_label;

  op.matrix = CMat::Zero(na + nb, na + nb);
  op.matrix.topLeftCorner(na, na) = a.matrix;
  op.matrix.bottomRightCorner(nb, nb) = b.matrix;

  op.domain.ambient_dim = na + nb;
  op.domain.basis = CMat::Zero(na + nb, a.domain.dim() + b.domain.dim());
  op.domain.basis.topLeftCorner(na, a.domain.dim()) = a.domain.basis;
  op.domain.basis.bottomRightCorner(nb, b.domain.dim()) = b.domain.basis;

  op.copies = 1;
  op.points_per_copy = static_cast<int>(na + nb);
  op.hbar = a.hbar;
  op.backend = a.backend;
  op.model_tag = "direct-sum(" + a.model_tag + "," + b.model_tag + ")";
  op.parts.push_back(std::make_shared<OperatorOnDomain>(a));
  op.parts.push_back(std::make_shared<OperatorOnDomain>(b));
  return op;
}

double check_symmetry(const OperatorOnDomain& op) {
  const CMat xb = op.matrix * op.domain.basis;
  CMat wb = op.domain.basis;
  for (Eigen::Index k = 0; k < op.grid.size(); ++k)
    wb.row(k) *= op.grid.weights[k];
  const CMat t2 = wb.adjoint() * xb;  // <phi_i, X phi_j>
  const double norm = operator_norm_estimate(op.matrix);
  if (norm == 0.0) return 0.0;
  return (t2.adjoint() - t2).cwiseAbs().maxCoeff() / norm;
}

double check_commutator(const BetaAlgebraModel& m) {
  const Grid& g = m.x_op.grid;
  const Eigen::Index n = g.size();
  // Wide interior Gaussians: narrow ones near the cutoff pick up the
  // (1 + beta p^2) magnification of the stencil error.
  const double sigma = m.cutoff / 6.0;
  const double centers[] = {0.0, -m.cutoff / 10.0, m.cutoff / 10.0,
                            -m.cutoff / 5.0, m.cutoff / 5.0};
  double worst = 0.0;
  for (double c : centers) {
    CVec phi(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double z = (g.points[k] - c) / sigma;
      phi[k] = std::exp(-0.5 * z * z);
    }
    const CVec comm = m.x_op.matrix * (m.p_op.matrix * phi) -
                      m.p_op.matrix * (m.x_op.matrix * phi);
    CVec target(n);
    for (Eigen::Index k = 0; k < n; ++k)
      target[k] = kI * m.hbar * (1.0 + m.beta * g.points[k] * g.points[k]) * phi[k];
    const double res = weighted_norm(CVec(comm - target), g) / weighted_norm(phi, g);
    worst = std::max(worst, res);
  }
  return worst;
}

}  // namespace fuzzyspec
