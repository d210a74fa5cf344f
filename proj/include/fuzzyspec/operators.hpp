#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fuzzyspec/hilbert.hpp"

namespace fuzzyspec {

enum class Backend { FiniteDifference, Spectral, MatrixModel };

const char* to_string(Backend b);

/// A discretized symmetric operator together with the subspace it is
/// symmetric on.  The matrix acts on the full ambient grid space; all
/// symmetry claims refer to the domain only.
struct OperatorOnDomain {
  CMat matrix;
  Subspace domain;
  Grid grid;
  int copies = 1;           // interval copies; 1 for non-interval models
  int points_per_copy = 0;  // grid points per copy (equals grid size / copies)
  double hbar = 1.0;
  double copy_length = 1.0;  // 1 for the interval, L for the half-line
  Backend backend = Backend::MatrixModel;
  std::string model_tag;

  // Direct-sum constituents, kept for block-wise classification.
  std::vector<std::shared_ptr<const OperatorOnDomain>> parts;

  Eigen::Index ambient_dim() const { return matrix.rows(); }
  bool is_interval_model() const;
  bool is_halfline_model() const;
  bool is_differential_model() const { return is_interval_model() || is_halfline_model(); }
};

/// X = i hbar d/dlambda on r disjoint copies of [0,1].  The domain consists of
/// grid functions vanishing at the copy boundaries.
///
/// finite-difference backend: endpoint-inclusive grid of N points per copy,
/// trapezoid weights, central stencil (one-sided rows at the copy edges exist
/// only in the ambient matrix; the domain excludes both edge samples).
///
/// spectral backend: periodic grid of N points per copy (lambda = j/N, uniform
/// weights), exact differentiation on the exponential mode basis; the single
/// boundary sample lambda = 0 carries the vanishing condition.
OperatorOnDomain build_interval_derivative(int copies, int n, Backend backend,
                                           double hbar = 1.0);

/// X = i hbar d/dlambda on [0, L], domain vanishing at lambda = 0.  The far
/// edge is a truncation of the half-line: its grid sample is excluded from the
/// domain as a stand-in for L^2 decay, and the model tag records the
/// absorbing-truncation caveat.
OperatorOnDomain build_halfline_derivative(int n, double length, double hbar = 1.0);

struct BetaAlgebraModel {
  double beta = 0.0;
  double cutoff = 0.0;  // momentum cutoff P
  double hbar = 1.0;
  OperatorOnDomain x_op;
  OperatorOnDomain p_op;
};

/// Momentum representation of [x,p] = i hbar (1 + beta p^2) on p in [-P, P]
/// with measure weights dp/(1 + beta p^2).  p acts by multiplication; x acts
/// as i hbar (1 + beta p^2) d/dp with domain vanishing at +-P.
BetaAlgebraModel build_beta_algebra(double beta, double cutoff, int n,
                                    double hbar = 1.0);

/// Hermitian matrix restricted in action to the orthogonal complement of
/// `domain_codim` seeded pseudo-random directions (mt19937_64 stream).
OperatorOnDomain build_matrix_model(const CMat& m, int domain_codim,
                                    std::uint64_t seed = 0x66757a7aULL);

/// Block-diagonal sum; the result remembers its constituents so that
/// classification can inspect blocks separately.
OperatorOnDomain direct_sum(const OperatorOnDomain& a, const OperatorOnDomain& b);

/// max_{phi,psi in domain basis} |<X phi, psi> - <phi, X psi>| / ||X||.
double check_symmetry(const OperatorOnDomain& op);

/// || [x,p] phi - i hbar (1+beta p^2) phi || / ||phi|| maximized over a fixed
/// set of interior Gaussians.
double check_commutator(const BetaAlgebraModel& m);

}  // namespace fuzzyspec
