#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fuzzyspec/extensions.hpp"

namespace fuzzyspec {

enum class FlowBackend { SpectralExponential, AnalyticWrap };

const char* to_string(FlowBackend b);

/// S_u(a) = exp(-i a X_u) on the extension's representation grid.
struct FlowUnitary {
  CMat matrix;
  double parameter_a = 0.0;
  std::string extension_label;
  FlowBackend backend = FlowBackend::SpectralExponential;
  Grid grid;
};

/// spectral-exponential: V diag(e^{-i a mu}) V^H W from the cached spectrum.
/// analytic-wrap (interval models): exact index shift by a = k/M points per
/// copy with the boundary unitary applied at every wrap; a must be
/// grid-commensurate.
FlowUnitary flow_unitary(const SelfAdjointExtension& ext, double a,
                         FlowBackend backend);

/// Ordered product; the rightmost flow acts first.
CMat compose(const std::vector<FlowUnitary>& flows);

/// The localized phase rotation built from two extensions: identity on
/// (0, 1-a), the matrix phase (u')^{-1} u on the copy index over (1-a, 1).
CMat local_phase_op(const OperatorOnDomain& op, const ExtensionParameter& u,
                    const ExtensionParameter& u_prime, double a,
                    FlowBackend backend = FlowBackend::AnalyticWrap);

struct LocalPhaseReport {
  double identity_error = 0.0;  // sup error on bumps inside (0, 1-a)
  double phase_error = 0.0;     // sup error on bumps inside (1-a, 1)
};

/// Checks the piecewise action on smooth bumps kept >= 2 cells away from the
/// discontinuity points {0, 1-a, 1}.
LocalPhaseReport verify_local_phase(const OperatorOnDomain& op,
                                    const ExtensionParameter& u,
                                    const ExtensionParameter& u_prime, double a,
                                    FlowBackend backend = FlowBackend::AnalyticWrap);

/// Span dimension of words (length <= max_word_length) in seeded extension
/// unitaries of a matrix model and their adjoints; early exit at N^2.
int generated_algebra_dimension(const OperatorOnDomain& model, int max_word_length,
                                int extension_set_size,
                                std::uint64_t seed = 0x616c67ULL);

}  // namespace fuzzyspec
