#include "fuzzyspec/deficiency.hpp"

#include <cmath>

#include "fuzzyspec/rng.hpp"

namespace fuzzyspec {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_symmetric(const OperatorOnDomain& op) {
  const double defect = check_symmetry(op);
  if (defect > 1e-8)
    throw symmetry_error("operator is not symmetric on its domain", defect);
}

// Columns of (X +/- i) applied to the domain basis.
CMat shifted_image(const OperatorOnDomain& op, double sign) {
  return op.matrix * op.domain.basis + (sign * kI) * op.domain.basis;
}

// Grid samples of exp(s * lambda / hbar) on one interval copy, zero elsewhere.
CVec copy_exponential(const OperatorOnDomain& op, int copy, double s) {
  const Eigen::Index n = op.points_per_copy;
  const double base = op.grid.points[copy * n];
  CVec v = CVec::Zero(op.grid.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lambda = op.grid.points[copy * n + j] - base;
    v[copy * n + j] = std::exp(s * lambda / op.hbar);
  }
  return v;
}

// Truncated half-line normalizability proxy: the norm over [0,L] must agree
// with the norm over [0,L/2] within 1%.
bool halfline_normalizable(const OperatorOnDomain& op, double s) {
  const Grid& g = op.grid;
  double full = 0.0, half = 0.0;
  const double mid = 0.5 * g.points[g.size() - 1];
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const double v = std::exp(2.0 * s * g.points[k] / op.hbar);
    full += g.weights[k] * v;
    if (g.points[k] <= mid) half += g.weights[k] * v;
  }
  return std::abs(full - half) <= 0.01 * full;
}

CVec beta_kernel_solution(const OperatorOnDomain& op, double beta, double s) {
  const Grid& g = op.grid;
  CVec v(g.size());
  const double rb = std::sqrt(beta);
  for (Eigen::Index k = 0; k < g.size(); ++k)
    v[k] = std::exp(s * std::atan(rb * g.points[k]) / (op.hbar * rb));
  return v;
}

}  // namespace

const char* to_string(DeficiencyMethod m) {
  return m == DeficiencyMethod::SubspaceCodimension ? "subspace-codimension"
                                                    : "ode-normalizability";
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::SelfAdjoint: return "self-adjoint";
    case Classification::FuzzyA: return "fuzzy-A";
    case Classification::FuzzyB: return "fuzzy-B";
    case Classification::Mixed: return "mixed";
  }
  return "?";
}

DeficiencyReport deficiency_spaces(const OperatorOnDomain& op) {
  require_symmetric(op);
  DeficiencyReport rep;

  const bool beta_model = op.model_tag.rfind("beta-x", 0) == 0;
  const bool closed_form = op.is_differential_model() || beta_model;

  // Grid-level codimension counts.  ||(X+-i)phi||^2 = ||X phi||^2 + ||phi||^2
  // makes (X+-i) injective on D, so the codimension is exactly
  // ambient - dim(D); the dense complement is only materialized for matrix
  // models, where the bases are also the reported deficiency spaces.
  rep.discrete_r_plus = static_cast<int>(op.ambient_dim() - op.domain.dim());
  rep.discrete_r_minus = rep.discrete_r_plus;

  Subspace codim_plus, codim_minus;
  if (!closed_form) {
    const Subspace range_plus = orthonormalize(shifted_image(op, +1.0), op.grid);
    const Subspace range_minus = orthonormalize(shifted_image(op, -1.0), op.grid);
    codim_plus = complement(range_plus, op.grid);    // L+
    codim_minus = complement(range_minus, op.grid);  // L-
    rep.discrete_r_plus = static_cast<int>(codim_plus.dim());
    rep.discrete_r_minus = static_cast<int>(codim_minus.dim());
  }

  if (op.is_interval_model()) {
    // ker(X* -/+ i) for X = i hbar d/dlambda is spanned by e^{+/- lambda/hbar},
    // both square-integrable on every bounded copy.
    rep.method = DeficiencyMethod::OdeNormalizability;
    rep.r_plus = rep.r_minus = op.copies;
    CMat plus(op.grid.size(), op.copies), minus(op.grid.size(), op.copies);
    for (int c = 0; c < op.copies; ++c) {
      plus.col(c) = copy_exponential(op, c, +1.0);
      minus.col(c) = copy_exponential(op, c, -1.0);
    }
    rep.basis_plus = orthonormalize(plus, op.grid);
    rep.basis_minus = orthonormalize(minus, op.grid);
  } else if (op.is_halfline_model()) {
    rep.method = DeficiencyMethod::OdeNormalizability;
    rep.r_plus = halfline_normalizable(op, +1.0) ? 1 : 0;
    rep.r_minus = halfline_normalizable(op, -1.0) ? 1 : 0;
    rep.basis_plus = rep.r_plus
                         ? orthonormalize(copy_exponential(op, 0, +1.0), op.grid)
                         : Subspace::empty(op.grid.size());
    rep.basis_minus = rep.r_minus
                          ? orthonormalize(copy_exponential(op, 0, -1.0), op.grid)
                          : Subspace::empty(op.grid.size());
  } else if (beta_model) {
    // i hbar (1+beta p^2) phi' = +/- i phi  =>  phi = e^{+/- atan(sqrt(b)p)/(hb sqrt(b))},
    // bounded, hence normalizable in the beta measure.
    const std::size_t eq = op.model_tag.find('=');
    const double beta = eq == std::string::npos
                            ? 1.0
                            : std::stod(op.model_tag.substr(eq + 1));
    rep.method = DeficiencyMethod::OdeNormalizability;
    rep.r_plus = rep.r_minus = 1;
    rep.basis_plus = orthonormalize(beta_kernel_solution(op, beta, +1.0), op.grid);
    rep.basis_minus = orthonormalize(beta_kernel_solution(op, beta, -1.0), op.grid);
  } else {
    rep.method = DeficiencyMethod::SubspaceCodimension;
    rep.r_plus = rep.discrete_r_plus;
    rep.r_minus = rep.discrete_r_minus;
    rep.basis_plus = codim_plus;
    rep.basis_minus = codim_minus;
  }

  rep.classification = classify(rep, op);
  return rep;
}

PartialIsometry cayley_transform(const OperatorOnDomain& op) {
  require_symmetric(op);
  const CMat yp = shifted_image(op, +1.0);
  const CMat ym = shifted_image(op, -1.0);

  PartialIsometry s;
  s.grid = op.grid;
  s.initial_space = orthonormalize(yp, op.grid);
  s.final_space = orthonormalize(ym, op.grid);

  // S (X+i)phi = (X-i)phi:  S = Ym G^{-1} Yp^H W with G the weighted Gram of
  // Yp.  ||(X+i)phi||^2 = ||X phi||^2 + ||phi||^2 keeps G well conditioned.
  const Eigen::Index d = yp.cols();
  CMat gram(d, d);
  CMat yphw(d, op.grid.size());
  for (Eigen::Index j = 0; j < op.grid.size(); ++j)
    yphw.col(j) = yp.row(j).adjoint() * op.grid.weights[j];
  gram = yphw * yp;
  Eigen::LDLT<CMat> ldlt(gram);
  if (ldlt.info() != Eigen::Success)
    throw numerical_error("cayley_transform: Gram factorization failed");
  s.matrix = ym * ldlt.solve(yphw);
  return s;
}

Classification classify(const DeficiencyReport& report, const OperatorOnDomain& op) {
  if (op.parts.size() >= 2) {
    Classification first = Classification::SelfAdjoint;
    bool seen = false;
    for (const auto& part : op.parts) {
      const DeficiencyReport sub = deficiency_spaces(*part);
      if (!seen) {
        first = sub.classification;
        seen = true;
      } else if (sub.classification != first) {
        return Classification::Mixed;
      }
    }
    if (seen) return first;
  }
  if (report.r_plus == 0 && report.r_minus == 0) return Classification::SelfAdjoint;
  if (report.r_plus == report.r_minus) return Classification::FuzzyA;
  return Classification::FuzzyB;
}

double verify_isometry(const PartialIsometry& s, int samples, std::uint64_t seed) {
  if (s.initial_space.dim() == 0) return 0.0;
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    CVec c = rng.cgaussian_matrix(s.initial_space.dim(), 1);
    CVec phi = s.initial_space.basis * c;
    const double n0 = weighted_norm(phi, s.grid);
    const double n1 = weighted_norm(CVec(s.matrix * phi), s.grid);
    worst = std::max(worst, std::abs(n1 - n0));
  }
  return worst;
}

}  // namespace fuzzyspec
