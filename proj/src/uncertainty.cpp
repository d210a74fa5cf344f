#include "fuzzyspec/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fuzzyspec/deficiency.hpp"
#include "fuzzyspec/rng.hpp"

namespace fuzzyspec {

namespace {

constexpr Complex kI{0.0, 1.0};

CMat domain_compressed(const CMat& lhs, const CMat& rhs, const Grid& g) {
  CMat lhw = lhs.adjoint();
  for (Eigen::Index j = 0; j < g.size(); ++j) lhw.col(j) *= g.weights[j];
  return lhw * rhs;
}

double smallest_pair(const CMat& h, CVec& v) {
  Eigen::SelfAdjointEigenSolver<CMat> solver((h + h.adjoint()) * 0.5);
  if (solver.info() != Eigen::Success)
    throw numerical_error("min_uncertainty: eigensolver failed");
  v = solver.eigenvectors().col(0);
  return solver.eigenvalues()[0];
}

struct ConstrainedMin {
  double m0;   // residual of the mean constraint at the accepted multiplier
  double var;  // variance of the accepted state
  CVec v;
};

// Minimize v^H q v subject to v^H l v = 0 on the unit sphere via a Lagrange
// multiplier kappa: the minimizer is the smallest eigenpair of q + kappa l
// with kappa tuned until the constraint holds.
ConstrainedMin constrained_min(const CMat& q, const CMat& l, double scale) {
  CVec v;
  auto constraint = [&](double kappa) {
    smallest_pair(q + kappa * l, v);
    return (v.adjoint() * l * v)(0, 0).real();
  };

  double m0 = constraint(0.0);
  double kappa = 0.0;
  if (std::abs(m0) > 1e-11 * scale) {
    // m(kappa) is non-increasing; bracket, then Illinois regula falsi.
    double klo = -1.0, khi = 1.0;
    double mlo = constraint(klo), mhi = constraint(khi);
    int guard = 0;
    while (mlo <= 0.0 && guard++ < 80) { klo *= 2.0; mlo = constraint(klo); }
    while (mhi >= 0.0 && guard++ < 160) { khi *= 2.0; mhi = constraint(khi); }
    if (mlo <= 0.0 || mhi >= 0.0)
      throw numerical_error("min_uncertainty: failed to bracket the multiplier");
    double mk = m0 > 0 ? m0 : mlo;
    for (int it = 0; it < 120; ++it) {
      kappa = (klo * mhi - khi * mlo) / (mhi - mlo);
      if (!(kappa > klo && kappa < khi)) kappa = 0.5 * (klo + khi);
      mk = constraint(kappa);
      if (std::abs(mk) < 1e-11 * scale || khi - klo < 1e-14 * (1.0 + std::abs(kappa)))
        break;
      if (mk > 0) {
        klo = kappa; mlo = mk; mhi *= 0.5;  // Illinois damping
      } else {
        khi = kappa; mhi = mk; mlo *= 0.5;
      }
    }
    m0 = mk;
  }

  ConstrainedMin out;
  out.m0 = m0;
  out.var = (v.adjoint() * q * v)(0, 0).real();
  out.v = std::move(v);
  return out;
}

}  // namespace

MinUncertaintyResult min_uncertainty(const OperatorOnDomain& op, double xi) {
  const CMat& b = op.domain.basis;
  if (b.cols() == 0) throw config_error("min_uncertainty: empty domain");
  const CMat xb = op.matrix * b;

  // Mean and variance forms on the domain: the basis is W-orthonormal, so
  // the state sphere is the coefficient sphere.
  CMat mean_form = domain_compressed(b, xb, op.grid);
  mean_form = (mean_form + mean_form.adjoint()) * 0.5;

  Eigen::SelfAdjointEigenSolver<CMat> range_solver(mean_form);
  const double lo = range_solver.eigenvalues().minCoeff();
  const double hi = range_solver.eigenvalues().maxCoeff();
  const double scale = std::max(std::abs(lo), std::abs(hi)) + 1.0;
  if (xi < lo - 1e-9 * scale || xi > hi + 1e-9 * scale) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "min_uncertainty: mean %.6g unreachable; achievable range [%.6g, %.6g]",
                  xi, lo, hi);
    throw infeasible_error(msg, std::clamp(xi, lo, hi), lo, hi);
  }

  const CMat y = xb - xi * b;
  CMat q = domain_compressed(y, y, op.grid);  // variance form at mean xi
  q = (q + q.adjoint()) * 0.5;
  const CMat l = mean_form - xi * CMat::Identity(b.cols(), b.cols());

  // The constrained minimizer lives in the span of the low-variance modes,
  // so solve the multiplier problem on a Galerkin subspace of them and
  // double its size until the answer stops moving. The subspace caps the
  // cost of each eigensolve inside the root-find; at k == d it reduces to
  // the exact problem.
  Eigen::SelfAdjointEigenSolver<CMat> q_modes(q);
  if (q_modes.info() != Eigen::Success)
    throw numerical_error("min_uncertainty: eigensolver failed");
  const Eigen::Index d = b.cols();

  ConstrainedMin sol;
  CMat uk;
  double prev_dx = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index k = std::min<Eigen::Index>(64, d);; k = std::min(2 * k, d)) {
    uk = q_modes.eigenvectors().leftCols(k);
    const CMat qk = q_modes.eigenvalues().head(k).cast<Complex>().asDiagonal();
    const CMat lk = uk.adjoint() * l * uk;
    bool solved = false;
    try {
      sol = constrained_min(qk, lk, scale);
      solved = true;
    } catch (const numerical_error&) {
      if (k == d) throw;  // not a truncation artifact
    }
    if (solved) {
      const double dx = std::sqrt(std::max(0.0, sol.var - sol.m0 * sol.m0));
      if (k == d || std::abs(dx - prev_dx) < 1e-10 * (1.0 + dx)) break;
      prev_dx = dx;
    }
    if (k == d) break;
  }

  MinUncertaintyResult out;
  out.dx_min = std::sqrt(std::max(0.0, sol.var - sol.m0 * sol.m0));
  out.minimizer = b * (uk * sol.v);
  out.residual = std::abs(sol.m0);
  return out;
}

UncertaintyCurve uncertainty_curve(const OperatorOnDomain& op,
                                   const std::vector<double>& xi_grid) {
  UncertaintyCurve curve;
  curve.model_tag = op.model_tag;
  for (double xi : xi_grid) {
    try {
      const MinUncertaintyResult r = min_uncertainty(op, xi);
      curve.xi_values.push_back(xi);
      curve.dx_min.push_back(r.dx_min);
      curve.solver_residuals.push_back(r.residual);
    } catch (const infeasible_error&) {
      curve.skipped_xi.push_back(xi);
    }
  }
  return curve;
}

GupReport sample_gup(const BetaAlgebraModel& m, int n_states, std::uint64_t seed) {
  const Grid& g = m.x_op.grid;
  const Eigen::Index n = g.size();
  const Eigen::Index n_modes = std::max<Eigen::Index>(4, n / 8);
  const double p_lo = g.points[0];
  const double span = g.points[n - 1] - p_lo;

  // Smooth domain states: random superpositions of the lowest sine modes
  // (each vanishes at the cutoff edges).
  CMat modes(n, n_modes);
  for (Eigen::Index k = 0; k < n_modes; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      modes(j, k) = std::sin((k + 1) * M_PI * (g.points[j] - p_lo) / span);

  const CMat x_modes = m.x_op.matrix * modes;
  CMat p_modes(n, n_modes);
  for (Eigen::Index k = 0; k < n_modes; ++k)
    p_modes.col(k) = g.points.cast<Complex>().cwiseProduct(modes.col(k));

  const CMat gram = domain_compressed(modes, modes, g);
  const CMat mx = domain_compressed(modes, x_modes, g);
  const CMat mxx = domain_compressed(x_modes, x_modes, g);
  const CMat mp = domain_compressed(modes, p_modes, g);
  const CMat mpp = domain_compressed(p_modes, p_modes, g);

  Rng rng(seed);
  GupReport rep;
  rep.n_states = n_states;
  rep.seed = seed;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_states; ++s) {
    const CVec c = rng.cgaussian_matrix(n_modes, 1);
    const double nn = (c.adjoint() * gram * c)(0, 0).real();
    const double ex = (c.adjoint() * mx * c)(0, 0).real() / nn;
    const double exx = (c.adjoint() * mxx * c)(0, 0).real() / nn;
    const double ep = (c.adjoint() * mp * c)(0, 0).real() / nn;
    const double epp = (c.adjoint() * mpp * c)(0, 0).real() / nn;
    const double dx = std::sqrt(std::max(0.0, exx - ex * ex));
    const double dp = std::sqrt(std::max(0.0, epp - ep * ep));
    const double bound = 0.5 * m.hbar * (1.0 + m.beta * dp * dp);
    const double margin = dx * dp - bound;
    rep.min_margin = std::min(rep.min_margin, margin);
    if (margin < -1e-9 * bound) ++rep.violations;
  }
  return rep;
}

LocalizationSequence fuzzyB_localizing_sequence(const OperatorOnDomain& op, int n) {
  const DeficiencyReport rep = deficiency_spaces(op);
  if (rep.classification != Classification::FuzzyB)
    throw contract_error("fuzzyB_localizing_sequence: model is not fuzzy-B");
  if (n < 2) throw config_error("fuzzyB_localizing_sequence: need n >= 2");

  const Grid& g = op.grid;
  const double length = g.points[g.size() - 1];
  const double xi_a = 2.0, xi_b = 5.0;

  // Plane-wave packets sin^2(pi lambda / T) e^{-i xi lambda} on [0, T]:
  // widening T shrinks the spread of X = i hbar d/dlambda.
  auto packet = [&](double t_support, double xi) {
    CVec v = CVec::Zero(g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      const double lambda = g.points[j];
      if (lambda <= 0.0 || lambda >= t_support) continue;
      const double prof = std::sin(M_PI * lambda / t_support);
      v[j] = prof * prof * std::exp(-kI * xi * lambda);
    }
    v /= weighted_norm(v, g);
    return v;
  };

  LocalizationSequence seq;
  std::vector<CVec> family_b;
  for (int k = 0; k < n; ++k) {
    const double t_support = length / std::pow(2.0, n - 1 - k);
    const CVec phi = packet(t_support, xi_a);
    const CVec xphi = op.matrix * phi;
    const double mean = inner_product(phi, xphi, g).real();
    const double second = std::pow(weighted_norm(xphi, g), 2);
    seq.states.push_back(phi);
    seq.dx_values.push_back(std::sqrt(std::max(0.0, second - mean * mean)));
    family_b.push_back(packet(t_support, xi_b));
  }
  seq.overlap_matrix.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      seq.overlap_matrix(i, j) = std::abs(inner_product(seq.states[i], family_b[j], g));
  return seq;
}

}  // namespace fuzzyspec
