#pragma once

#include <stdexcept>
#include <string>

namespace dwx {

enum class Errc {
  invalid_extent,
  too_few_points,
  invalid_argument,
  well_outside_box,
  grid_mismatch,
  no_convergence,
  near_singular_shift,
  not_a_doublet,
  no_barrier,
  turning_point_ambiguity,
  non_perturbative,
  non_orthonormal,
  region_empty,
  insufficient_levels,
  too_large,
  no_identifiable_orbital,
  regime_violation,
  states_not_identifiable,
  nonpositive_input,
  no_crossing,
  multiple_crossings,
  empty_values,
  unknown_key,
  type_mismatch,
  missing_required,
  invalid_value,
};

// Stable kebab-case name, used in JSON error objects.
const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dwx
