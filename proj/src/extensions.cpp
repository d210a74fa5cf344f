#include "fuzzyspec/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace fuzzyspec {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_unitary(const CMat& u, const char* who) {
  if (u.rows() != u.cols()) throw parameter_error(std::string(who) + ": matrix not square");
  const double defect = (u.adjoint() * u - CMat::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
  if (defect > 1e-10) throw parameter_error(std::string(who) + ": matrix not unitary");
}

// Eigenphases and orthonormal eigenvectors of a unitary matrix.
void unitary_eigensystem(const CMat& u, RVec& phases, CMat& vectors) {
  Eigen::ComplexSchur<CMat> schur(u, true);
  if (schur.info() != Eigen::Success)
    throw numerical_error("unitary eigensystem: Schur decomposition failed");
  const Eigen::Index r = u.rows();
  phases.resize(r);
  for (Eigen::Index m = 0; m < r; ++m) phases[m] = std::arg(schur.matrixT()(m, m));
  vectors = schur.matrixU();
}

void sort_spectral(SpectralData& sd) {
  const Eigen::Index n = sd.eigenvalues.size();
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return sd.eigenvalues[a] < sd.eigenvalues[b];
  });
  RVec ev(n);
  CMat vecs(sd.eigenvectors.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    ev[k] = sd.eigenvalues[idx[k]];
    vecs.col(k) = sd.eigenvectors.col(idx[k]);
  }
  sd.eigenvalues = ev;
  sd.eigenvectors = vecs;
}

SelfAdjointExtension boundary_extension_spectral(const OperatorOnDomain& op,
                                                 const ExtensionParameter& u) {
  const int r = op.copies;
  const int n = op.points_per_copy;
  RVec phases;
  CMat w;
  unitary_eigensystem(u.u, phases, w);

  // phi_c(lambda) = w_c e^{-i mu lambda}, mu = hbar(theta_m + 2 pi k): the
  // boundary relation holds exactly and the modes are DFT-orthonormal.
  const Eigen::Index dim = static_cast<Eigen::Index>(r) * n;
  auto sd = std::make_shared<SpectralData>();
  sd->eigenvalues.resize(dim);
  sd->eigenvectors.resize(dim, dim);
  Eigen::Index col = 0;
  for (int m = 0; m < r; ++m) {
    for (int k = -n / 2; k < (n + 1) / 2; ++k) {
      const double mu = phases[m] + 2.0 * M_PI * k;
      sd->eigenvalues[col] = op.hbar * mu;
      for (int c = 0; c < r; ++c)
        for (int j = 0; j < n; ++j)
          sd->eigenvectors(c * n + j, col) =
              w(c, m) * std::exp(-kI * mu * (static_cast<double>(j) / n));
      ++col;
    }
  }
  sort_spectral(*sd);

  SelfAdjointExtension ext;
  ext.grid = op.grid;
  ext.parameter = u;
  ext.parent_tag = op.model_tag;
  ext.embed = CMat::Identity(dim, dim);
  ext.hbar = op.hbar;
  ext.copies = r;
  ext.points_per_copy = n;
  ext.backend = Backend::Spectral;
  ext.parent = std::make_shared<OperatorOnDomain>(op);

  CMat scaled = sd->eigenvectors;
  for (Eigen::Index j = 0; j < dim; ++j)
    scaled.col(j) *= sd->eigenvalues[j];
  ext.matrix = scaled * sd->eigenvectors.adjoint() * (1.0 / n);
  ext.spectral = sd;
  return ext;
}

SelfAdjointExtension boundary_extension_fd(const OperatorOnDomain& op,
                                           const ExtensionParameter& u) {
  const int r = op.copies;
  const int n = op.points_per_copy;
  const int m = n - 1;  // the lambda = 1 sample is fused into lambda = 0
  const double h = 1.0 / m;
  const Eigen::Index dim = static_cast<Eigen::Index>(r) * m;

  SelfAdjointExtension ext;
  ext.grid.points.resize(dim);
  ext.grid.weights = RVec::Constant(dim, h);
  for (int c = 0; c < r; ++c)
    for (int j = 0; j < m; ++j)
      ext.grid.points[c * m + j] = op.grid.points[c * n] + j * h;

  // Twisted cyclic central difference: ghost points come from the wrapped
  // continuation phi(lambda + 1) = u^{-1} phi(lambda).
  const Complex coeff = kI * op.hbar / (2.0 * h);
  ext.matrix = CMat::Zero(dim, dim);
  for (int c = 0; c < r; ++c) {
    for (int j = 1; j + 1 < m; ++j) {
      ext.matrix(c * m + j, c * m + j + 1) = coeff;
      ext.matrix(c * m + j, c * m + j - 1) = -coeff;
    }
    ext.matrix(c * m, c * m + 1) = coeff;
    for (int c2 = 0; c2 < r; ++c2) {
      ext.matrix(c * m, c2 * m + m - 1) -= coeff * u.u(c, c2);
      ext.matrix(c * m + m - 1, c2 * m) += coeff * std::conj(u.u(c2, c));
    }
    ext.matrix(c * m + m - 1, c * m + m - 2) = -coeff;
  }

  ext.embed = CMat::Zero(op.grid.size(), dim);
  for (int c = 0; c < r; ++c) {
    for (int j = 0; j < m; ++j) ext.embed(c * n + j, c * m + j) = 1.0;
    for (int c2 = 0; c2 < r; ++c2)
      ext.embed(c * n + n - 1, c2 * m) = std::conj(u.u(c2, c));  // u^{-1} phi(0)
  }

  ext.parameter = u;
  ext.parent_tag = op.model_tag;
  ext.hbar = op.hbar;
  ext.copies = r;
  ext.points_per_copy = m;
  ext.backend = Backend::FiniteDifference;
  ext.parent = std::make_shared<OperatorOnDomain>(op);
  return ext;
}

}  // namespace

ExtensionParameter make_extension_parameter(const CMat& u, std::string label) {
  require_unitary(u, "extension parameter");
  return ExtensionParameter{u, std::move(label)};
}

SelfAdjointExtension extend_by_boundary(const OperatorOnDomain& op,
                                        const ExtensionParameter& u) {
  if (!op.is_interval_model())
    throw config_error("extend_by_boundary: interval models only");
  if (u.u.rows() != op.copies)
    throw config_error("extend_by_boundary: parameter size must equal copies");
  require_unitary(u.u, "extend_by_boundary");
  return op.backend == Backend::Spectral ? boundary_extension_spectral(op, u)
                                         : boundary_extension_fd(op, u);
}

const SpectralData& spectrum(const SelfAdjointExtension& ext) {
  if (!ext.spectral) {
    auto sd = std::make_shared<SpectralData>(eigh(ext.matrix, ext.grid));
    ext.spectral = sd;
  }
  return *ext.spectral;
}

SelfAdjointExtension extend_by_cayley(const OperatorOnDomain& op,
                                      const CMat& s_prime) {
  const DeficiencyReport rep = deficiency_spaces(op);
  if (rep.r_plus != rep.r_minus)
    throw parameter_error("extend_by_cayley: unequal deficiency indices admit no self-adjoint extension");
  if (s_prime.rows() != rep.r_minus || s_prime.cols() != rep.r_plus)
    throw parameter_error("extend_by_cayley: s' must be r x r in the deficiency bases");
  require_unitary(s_prime, "extend_by_cayley s'");

  const PartialIsometry s = cayley_transform(op);
  const Grid& g = op.grid;
  const Eigen::Index dim = g.size();

  // S' : L+ -> L- in the deficiency bases, extended by zero.
  CMat lplus_hw(rep.basis_plus.dim(), dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    lplus_hw.col(j) = rep.basis_plus.basis.row(j).adjoint() * g.weights[j];
  const CMat u_full = s.matrix + rep.basis_minus.basis * s_prime * lplus_hw;

  if (op.is_interval_model() && op.copies == 1) {
    // Calibrate the boundary phase from the extension's own unitary: an
    // eigenphase alpha of U corresponds to the eigenvalue -cot(alpha/2) of
    // X_e; the best-resolved one (nearest 0) fixes theta mod 2 pi.
    RVec d = g.weights.cwiseSqrt();
    CMat a(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
      for (Eigen::Index i = 0; i < dim; ++i)
        a(i, j) = u_full(i, j) * d[i] / d[j];
    RVec phases;
    CMat vecs;
    unitary_eigensystem(a, phases, vecs);
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < dim; ++k) {
      if (std::abs(phases[k]) < 1e-8) continue;
      const double mu = -1.0 / std::tan(0.5 * phases[k]);
      if (std::abs(mu) < std::abs(best)) best = mu;
    }
    if (!std::isfinite(best))
      throw numerical_error("extend_by_cayley: no resolvable eigenphase");
    double theta = std::fmod(best / op.hbar, 2.0 * M_PI);
    if (theta < 0) theta += 2.0 * M_PI;
    CMat u(1, 1);
    u(0, 0) = std::exp(kI * theta);
    auto ext = extend_by_boundary(op, make_extension_parameter(u, "cayley-calibrated"));
    return ext;
  }

  // Finite-dimensional algebra: X_e = i(1+U)(1-U)^{-1}, done in the
  // sqrt(weight)-similar frame where U is plainly unitary.
  RVec d = g.weights.cwiseSqrt();
  CMat a(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i)
      a(i, j) = u_full(i, j) * d[i] / d[j];

  const CMat one_minus = CMat::Identity(dim, dim) - a;
  Eigen::JacobiSVD<CMat> svd(one_minus, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()[dim - 1] < 1e-8)
    throw numerical_error(
        "extend_by_cayley: U has eigenvalue 1 (flat direction escapes to spectral infinity)");
  CMat x_std = kI * (CMat::Identity(dim, dim) + a) * one_minus.inverse();
  x_std = (x_std + x_std.adjoint()) * 0.5;

  SelfAdjointExtension ext;
  ext.grid = g;
  ext.matrix.resize(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i)
      ext.matrix(i, j) = x_std(i, j) * d[j] / d[i];
  ext.parameter = ExtensionParameter{s_prime, "cayley"};
  ext.parent_tag = op.model_tag;
  ext.embed = CMat::Identity(dim, dim);
  ext.hbar = op.hbar;
  ext.copies = op.copies;
  ext.points_per_copy = static_cast<int>(dim);
  ext.backend = op.backend;
  ext.parent = std::make_shared<OperatorOnDomain>(op);
  return ext;
}

ExtensionParameter extension_with_degenerate_eigenvalue(const OperatorOnDomain& op,
                                                        double xi) {
  if (!op.is_interval_model())
    throw config_error("extension_with_degenerate_eigenvalue: interval models only");
  // e^{-i xi lambda} satisfies phi(0) = u phi(1) for u = e^{i xi}; taking
  // u = e^{i xi} I makes xi an eigenvalue once per copy.
  CMat u = std::exp(kI * (xi / op.hbar)) *
           CMat::Identity(op.copies, op.copies);
  char buf[48];
  std::snprintf(buf, sizeof buf, "degenerate-at-%.6g", xi);
  return make_extension_parameter(u, buf);
}

CMat isospinor_expansion(const CVec& phi, const OperatorOnDomain& op,
                         const std::vector<double>& xi_grid) {
  if (!op.is_interval_model())
    throw config_error("isospinor_expansion: interval models only");
  if (phi.size() != op.grid.size())
    throw dimension_error("isospinor_expansion: state/grid mismatch");
  const int r = op.copies;
  const int n = op.points_per_copy;
  CMat out(r, static_cast<Eigen::Index>(xi_grid.size()));
  for (int c = 0; c < r; ++c) {
    const double base = op.grid.points[c * n];
    double wsum = 0.0;
    for (int j = 0; j < n; ++j) wsum += op.grid.weights[c * n + j];
    const double norm = std::sqrt(wsum);
    for (std::size_t q = 0; q < xi_grid.size(); ++q) {
      Complex acc = 0.0;
      for (int j = 0; j < n; ++j) {
        const double lambda = op.grid.points[c * n + j] - base;
        const Complex ket = std::exp(-kI * xi_grid[q] * lambda);
        acc += op.grid.weights[c * n + j] * std::conj(ket) * phi[c * n + j];
      }
      out(c, static_cast<Eigen::Index>(q)) = acc / norm;
    }
  }
  return out;
}

GaugeReport verify_gauge_isometry(const CMat& g, const OperatorOnDomain& op) {
  if (g.rows() != op.ambient_dim() || g.cols() != op.ambient_dim())
    throw dimension_error("verify_gauge_isometry: matrix/ambient mismatch");
  GaugeReport rep;
  const CMat comm = g * op.matrix - op.matrix * g;
  for (Eigen::Index j = 0; j < op.domain.dim(); ++j) {
    const CVec b = op.domain.basis.col(j);
    rep.commutator_defect =
        std::max(rep.commutator_defect, weighted_norm(CVec(comm * b), op.grid));
    rep.domain_preservation_defect =
        std::max(rep.domain_preservation_defect,
                 distance_to_subspace(CVec(g * b), op.domain, op.grid));
    rep.isometry_defect =
        std::max(rep.isometry_defect,
                 std::abs(weighted_norm(CVec(g * b), op.grid) - 1.0));
  }
  return rep;
}

double extension_restriction_defect(const SelfAdjointExtension& ext,
                                    const OperatorOnDomain& op) {
  if (!op.is_interval_model())
    throw config_error("extension_restriction_defect: interval models only");
  const int r = op.copies;
  const int n = op.points_per_copy;
  const double xnorm = operator_norm_estimate(op.matrix);

  // C-infinity bump supported in (0.15, 0.85) of one copy: identical under
  // parent and extension away from the boundary stitching.
  auto bump = [](double lambda) {
    const double t = (lambda - 0.15) / 0.7;
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (t * (1.0 - t)));
  };

  double worst = 0.0;
  for (int c = 0; c < r; ++c) {
    for (double k : {0.0, 5.0}) {
      CVec phi = CVec::Zero(op.grid.size());
      const double base = op.grid.points[c * n];
      for (int j = 0; j < n; ++j) {
        const double lambda = op.grid.points[c * n + j] - base;
        phi[c * n + j] = bump(lambda) * std::exp(-kI * k * lambda);
      }
      const double pnorm = weighted_norm(phi, op.grid);
      // Representation coordinates: drop the fused boundary samples.
      CVec rep_phi(ext.grid.size());
      const int m = ext.points_per_copy;
      for (int cc = 0; cc < r; ++cc)
        for (int j = 0; j < m; ++j)
          rep_phi[cc * m + j] = phi[cc * n + j];
      const CVec via_ext = ext.embed * (ext.matrix * rep_phi);
      const CVec via_parent = op.matrix * phi;
      worst = std::max(worst, weighted_norm(CVec(via_ext - via_parent), op.grid) /
                                  (xnorm * pnorm));
    }
  }
  return worst;
}

}  // namespace fuzzyspec
