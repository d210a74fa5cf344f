#pragma once

#include <stdexcept>
#include <string>

namespace fuzzyspec {

struct dimension_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parameter_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operator fails a Hermiticity/symmetry requirement; carries the measured defect.
struct symmetry_error : std::runtime_error {
  symmetry_error(const std::string& what, double defect_)
      : std::runtime_error(what + " (defect " + std::to_string(defect_) + ")"),
        defect(defect_) {}
  double defect;
};

struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested expectation value lies outside the achievable range of the domain.
struct infeasible_error : std::runtime_error {
  infeasible_error(const std::string& what, double nearest_, double lo_, double hi_)
      : std::runtime_error(what), nearest(nearest_), range_lo(lo_), range_hi(hi_) {}
  double nearest;
  double range_lo;
  double range_hi;
};

struct contract_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fuzzyspec
