#include "fuzzyspec/flows.hpp"

#include <cmath>

#include "fuzzyspec/rng.hpp"

namespace fuzzyspec {

namespace {

constexpr Complex kI{0.0, 1.0};

// u^p for integer p (p may be negative; u unitary).
CMat unitary_power(const CMat& u, int p) {
  const Eigen::Index r = u.rows();
  CMat base = p >= 0 ? u : CMat(u.adjoint());
  CMat acc = CMat::Identity(r, r);
  for (int k = 0; k < std::abs(p); ++k) acc = base * acc;
  return acc;
}

}  // namespace

const char* to_string(FlowBackend b) {
  return b == FlowBackend::SpectralExponential ? "spectral-exponential"
                                               : "analytic-wrap";
}

FlowUnitary flow_unitary(const SelfAdjointExtension& ext, double a,
                         FlowBackend backend) {
  FlowUnitary flow;
  flow.parameter_a = a;
  flow.extension_label = ext.parameter.label.empty() ? ext.parent_tag
                                                     : ext.parameter.label;
  flow.backend = backend;
  flow.grid = ext.grid;

  const Eigen::Index dim = ext.grid.size();

  if (backend == FlowBackend::SpectralExponential) {
    const SpectralData& sd = spectrum(ext);
    CMat scaled = sd.eigenvectors;
    for (Eigen::Index j = 0; j < dim; ++j)
      scaled.col(j) *= std::exp(-kI * a * sd.eigenvalues[j]);
    CMat vhw = sd.eigenvectors.adjoint();
    for (Eigen::Index j = 0; j < dim; ++j)
      vhw.col(j) *= ext.grid.weights[j];
    flow.matrix = scaled * vhw;
    return flow;
  }

  if (!ext.parent || !ext.parent->is_interval_model())
    throw config_error("flow_unitary: analytic-wrap requires an interval model");
  const int r = ext.copies;
  const int m = ext.points_per_copy;
  // exp(-i a X_u) translates by a*hbar; commensurate means a*hbar = k/m.
  const double shift = a * ext.hbar * m;
  const long k = std::lround(shift);
  if (std::abs(shift - static_cast<double>(k)) > 1e-9)
    throw parameter_error("flow_unitary: analytic-wrap needs a = k/M (grid-commensurate)");

  // (S_u(a) phi)(lambda) = phi(lambda + a), continued by phi(lambda+1) =
  // u^{-1} phi(lambda) past every wrap.
  flow.matrix = CMat::Zero(dim, dim);
  for (int j = 0; j < m; ++j) {
    long jj = j + k;
    long wraps = 0;
    while (jj >= m) { jj -= m; ++wraps; }
    while (jj < 0) { jj += m; --wraps; }
    const CMat t = unitary_power(ext.parameter.u, -static_cast<int>(wraps));
    for (int c = 0; c < r; ++c)
      for (int c2 = 0; c2 < r; ++c2)
        flow.matrix(c * m + j, c2 * m + jj) = t(c, c2);
  }
  return flow;
}

CMat compose(const std::vector<FlowUnitary>& flows) {
  if (flows.empty()) throw dimension_error("compose: empty flow list");
  CMat acc = flows.front().matrix;
  for (std::size_t k = 1; k < flows.size(); ++k) {
    if (flows[k].matrix.rows() != acc.cols())
      throw dimension_error("compose: ambient dimension mismatch");
    acc = acc * flows[k].matrix;
  }
  return acc;
}

CMat local_phase_op(const OperatorOnDomain& op, const ExtensionParameter& u,
                    const ExtensionParameter& u_prime, double a,
                    FlowBackend backend) {
  if (!(a > 0.0 && a < 1.0))
    throw parameter_error("local_phase_op: a must lie in (0,1)");
  const SelfAdjointExtension ext_u = extend_by_boundary(op, u);
  const SelfAdjointExtension ext_up = extend_by_boundary(op, u_prime);
  // Composition realizing the localized rotation: identity on (0, 1-a) and
  // the phase (u')^{-1} u on (1-a, 1).
  return compose({flow_unitary(ext_up, a, backend), flow_unitary(ext_u, -a, backend)});
}

LocalPhaseReport verify_local_phase(const OperatorOnDomain& op,
                                    const ExtensionParameter& u,
                                    const ExtensionParameter& u_prime, double a,
                                    FlowBackend backend) {
  const CMat t = local_phase_op(op, u, u_prime, a, backend);
  const SelfAdjointExtension ext = extend_by_boundary(op, u);
  const Grid& g = ext.grid;
  const int r = ext.copies;
  const int m = ext.points_per_copy;
  const double h = 1.0 / m;
  const CMat phase = u_prime.u.adjoint() * u.u;

  // sin^4 bump on (s0, s1), flat zero outside; support margins >= 2 cells.
  auto bump_vec = [&](int copy, double s0, double s1) {
    CVec v = CVec::Zero(g.size());
    for (int j = 0; j < m; ++j) {
      const double lambda = j * h;
      const double tt = (lambda - s0) / (s1 - s0);
      if (tt > 0.0 && tt < 1.0) v[copy * m + j] = std::pow(std::sin(M_PI * tt), 4);
    }
    return v;
  };

  LocalPhaseReport rep;
  const double pad = 3.0 * h;
  for (int c = 0; c < r; ++c) {
    const CVec inner = bump_vec(c, pad, 1.0 - a - pad);
    rep.identity_error = std::max(
        rep.identity_error, (t * inner - inner).cwiseAbs().maxCoeff());

    const CVec outer = bump_vec(c, 1.0 - a + pad, 1.0 - pad);
    CVec expected = CVec::Zero(g.size());
    for (int c2 = 0; c2 < r; ++c2)
      expected.segment(c2 * m, m) = phase(c2, c) * outer.segment(c * m, m);
    rep.phase_error = std::max(
        rep.phase_error, (t * outer - expected).cwiseAbs().maxCoeff());
  }
  return rep;
}

int generated_algebra_dimension(const OperatorOnDomain& model, int max_word_length,
                                int extension_set_size, std::uint64_t seed) {
  if (model.backend != Backend::MatrixModel)
    throw config_error("generated_algebra_dimension: matrix models only");
  const Eigen::Index n = model.ambient_dim();
  if (n > 8) throw config_error("generated_algebra_dimension: ambient dim > 8");

  const DeficiencyReport rep = deficiency_spaces(model);
  const int r = rep.r_plus;
  const PartialIsometry s = cayley_transform(model);

  // Seeded unitary extensions U_k = S + (L- basis) Q_k (L+ basis)^H W.
  Rng rng(seed);
  CMat lplus_hw(r, n);
  for (Eigen::Index j = 0; j < n; ++j)
    lplus_hw.col(j) = rep.basis_plus.basis.row(j).adjoint() * model.grid.weights[j];
  std::vector<CMat> generators;
  for (int k = 0; k < extension_set_size; ++k) {
    CMat q;
    if (r > 0) {
      Eigen::HouseholderQR<CMat> qr(rng.cgaussian_matrix(r, r));
      q = qr.householderQ() * CMat::Identity(r, r);
      // fix column phases so the draw is deterministic across platforms
      for (int c = 0; c < r; ++c) {
        const Complex d = qr.matrixQR()(c, c);
        if (std::abs(d) > 0) q.col(c) *= d / std::abs(d);
      }
    } else {
      q = CMat(0, 0);
    }
    const CMat u_k = s.matrix + rep.basis_minus.basis * q * lplus_hw;
    generators.push_back(u_k);
    // W-adjoint = W^{-1} U^H W
    CMat adj = u_k.adjoint();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        adj(i, j) *= model.grid.weights[j] / model.grid.weights[i];
    generators.push_back(adj);
  }

  // Span growth over vectorized words, breadth-first, early exit at n^2.
  const Eigen::Index target = n * n;
  std::vector<CVec> span_basis;
  auto try_add = [&](const CMat& word) {
    CVec v = Eigen::Map<const CVec>(word.data(), target);
    const double scale = v.norm();
    if (scale == 0.0) return;
    for (int pass = 0; pass < 2; ++pass)
      for (const CVec& b : span_basis) v -= b.dot(v) * b;
    if (v.norm() > 1e-10 * scale) span_basis.push_back(v.normalized());
  };

  std::vector<CMat> frontier{CMat::Identity(n, n)};
  try_add(frontier.front());
  for (int len = 1; len <= max_word_length; ++len) {
    if (static_cast<Eigen::Index>(span_basis.size()) >= target) break;
    std::vector<CMat> next;
    next.reserve(frontier.size() * generators.size());
    for (const CMat& w : frontier) {
      for (const CMat& gmat : generators) {
        CMat prod = gmat * w;
        try_add(prod);
        next.push_back(std::move(prod));
        if (static_cast<Eigen::Index>(span_basis.size()) >= target) break;
      }
      if (static_cast<Eigen::Index>(span_basis.size()) >= target) break;
    }
    frontier = std::move(next);
  }
  return static_cast<int>(span_basis.size());
}

}  // namespace fuzzyspec
