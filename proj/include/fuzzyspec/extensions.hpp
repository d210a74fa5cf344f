#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fuzzyspec/deficiency.hpp"
#include "fuzzyspec/operators.hpp"

namespace fuzzyspec {

/// r x r unitary labeling a self-adjoint extension.
struct ExtensionParameter {
  CMat u;
  std::string label;
};

/// Validates unitarity (defect tolerance 1e-10).
ExtensionParameter make_extension_parameter(const CMat& u, std::string label = "");

/// A self-adjoint extension, represented on its own grid.  For the spectral
/// interval backend the representation space equals the parent's ambient
/// space; for the finite-difference backend the boundary samples are fused by
/// the relation phi_i(0) = sum_j u_ij phi_j(1), which compresses each copy by
/// one point.  `embed` maps representation vectors back to the parent grid.
struct SelfAdjointExtension {
  CMat matrix;  // Hermitian w.r.t. grid weights
  Grid grid;
  ExtensionParameter parameter;
  std::string parent_tag;
  CMat embed;  // parent ambient_dim x rep dim
  double hbar = 1.0;
  int copies = 1;
  int points_per_copy = 0;  // representation points per copy
  Backend backend = Backend::MatrixModel;
  std::shared_ptr<const OperatorOnDomain> parent;
  mutable std::shared_ptr<const SpectralData> spectral;  // write-once cache
};

/// Extension defined by the boundary relation phi_i(0) = sum_j u_ij phi_j(1).
SelfAdjointExtension extend_by_boundary(const OperatorOnDomain& op,
                                        const ExtensionParameter& u);

/// Extension via U = S + S', X_e = i(1+U)(1-U)^{-1}.  s_prime is the r x r
/// coefficient matrix of the isometry L+ -> L- in the deficiency bases.
/// Matrix models use the finite-dimensional algebra directly; interval models
/// (r = 1) are calibrated back to a boundary phase by spectrum matching.
SelfAdjointExtension extend_by_cayley(const OperatorOnDomain& op,
                                      const CMat& s_prime);

/// Eigendecomposition, cached in the extension on first request.
const SpectralData& spectrum(const SelfAdjointExtension& ext);

/// Parameter whose extension carries xi as an r-fold degenerate eigenvalue.
ExtensionParameter extension_with_degenerate_eigenvalue(const OperatorOnDomain& op,
                                                        double xi);

/// phi_i(xi) = <xi,i|phi> with |xi,i> the normalized e^{-i xi lambda} on
/// copy i.  Rows are copies, columns follow xi_grid.
CMat isospinor_expansion(const CVec& phi, const OperatorOnDomain& op,
                         const std::vector<double>& xi_grid);

struct GaugeReport {
  double commutator_defect = 0.0;
  double domain_preservation_defect = 0.0;
  double isometry_defect = 0.0;
};

GaugeReport verify_gauge_isometry(const CMat& g, const OperatorOnDomain& op);

/// Max relative disagreement of the extension with its parent on smooth test
/// functions supported away from the copy boundaries.
double extension_restriction_defect(const SelfAdjointExtension& ext,
                                    const OperatorOnDomain& op);

}  // namespace fuzzyspec
