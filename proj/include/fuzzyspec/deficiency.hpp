#pragma once

#include <cstdint>
#include <string>

#include "fuzzyspec/operators.hpp"

namespace fuzzyspec {

enum class DeficiencyMethod { SubspaceCodimension, OdeNormalizability };
enum class Classification { SelfAdjoint, FuzzyA, FuzzyB, Mixed };

const char* to_string(DeficiencyMethod m);
const char* to_string(Classification c);

/// Indices and deficiency-space bases.  For differential models the
/// closed-form (ode) indices are authoritative and the grid-level codimension
/// counts are recorded alongside; for matrix models the codimension method is
/// exact and authoritative.
struct DeficiencyReport {
  int r_plus = 0;
  int r_minus = 0;
  Subspace basis_plus;   // ker(X* - i), i.e. ((X+i)D)^perp
  Subspace basis_minus;  // ker(X* + i), i.e. ((X-i)D)^perp
  DeficiencyMethod method = DeficiencyMethod::SubspaceCodimension;
  Classification classification = Classification::SelfAdjoint;
  int discrete_r_plus = 0;   // codimension of (X+i)D on the grid
  int discrete_r_minus = 0;  // codimension of (X-i)D on the grid
};

/// S maps (X+i)phi -> (X-i)phi on the range of (X+i); zero on the complement.
struct PartialIsometry {
  CMat matrix;
  Subspace initial_space;
  Subspace final_space;
  Grid grid;
};

DeficiencyReport deficiency_spaces(const OperatorOnDomain& op);

PartialIsometry cayley_transform(const OperatorOnDomain& op);

/// (0,0) -> self-adjoint; equal nonzero -> fuzzy-A; unequal -> fuzzy-B;
/// block-diagonal models whose blocks classify differently -> mixed.
Classification classify(const DeficiencyReport& report, const OperatorOnDomain& op);

/// Max |  ||S phi|| - ||phi||  | over seeded random vectors in initial_space.
double verify_isometry(const PartialIsometry& s, int samples,
                       std::uint64_t seed = 0x697a6fULL);

}  // namespace fuzzyspec
