#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fuzzyspec/operators.hpp"

namespace fuzzyspec {

struct MinUncertaintyResult {
  double dx_min = 0.0;
  CVec minimizer;
  double residual = 0.0;  // |<phi|X|phi> - xi| at the solution
};

/// Minimizes the variance of X over normalized domain states with mean xi.
/// Lagrangian eigenproblem: smallest eigenpair of Q + kappa L on the domain,
/// with kappa root-found so the mean constraint holds.
MinUncertaintyResult min_uncertainty(const OperatorOnDomain& op, double xi);

struct UncertaintyCurve {
  std::vector<double> xi_values;
  std::vector<double> dx_min;
  std::vector<double> solver_residuals;
  std::string model_tag;
  std::vector<double> skipped_xi;  // infeasible points, recorded not thrown
};

UncertaintyCurve uncertainty_curve(const OperatorOnDomain& op,
                                   const std::vector<double>& xi_grid);

struct GupReport {
  double min_margin = 0.0;  // min of dx*dp - (hbar/2)(1 + beta dp^2)
  int violations = 0;       // margins below -1e-9 * bound
  int n_states = 0;
  std::uint64_t seed = 0;
};

/// Seeded smooth random domain states vs the generalized uncertainty bound.
GupReport sample_gup(const BetaAlgebraModel& m, int n_states, std::uint64_t seed);

struct LocalizationSequence {
  std::vector<CVec> states;        // family at the first center
  std::vector<double> dx_values;   // strictly decreasing
  CMat overlap_matrix;             // |<phi_i^(xi)|phi_j^(xi')>| across centers
};

/// Widening plane-wave packets on the half-line: dX shrinks dyadically while
/// overlaps between distinct-center families are recorded.
LocalizationSequence fuzzyB_localizing_sequence(const OperatorOnDomain& op, int n);

}  // namespace fuzzyspec
