#include "dwx/error.hpp"

namespace dwx {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_extent: return "invalid-extent";
    case Errc::too_few_points: return "too-few-points";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::well_outside_box: return "well-outside-box";
    case Errc::grid_mismatch: return "grid-mismatch";
    case Errc::no_convergence: return "no-convergence";
    case Errc::near_singular_shift: return "near-singular-shift";
    case Errc::not_a_doublet: return "not-a-doublet";
    case Errc::no_barrier: return "no-barrier";
    case Errc::turning_point_ambiguity: return "turning-point-ambiguity";
    case Errc::non_perturbative: return "non-perturbative";
    case Errc::non_orthonormal: return "non-orthonormal";
    case Errc::region_empty: return "region-empty";
    case Errc::insufficient_levels: return "insufficient-levels";
    case Errc::too_large: return "too-large";
    case Errc::no_identifiable_orbital: return "no-identifiable-orbital";
    case Errc::regime_violation: return "regime-violation";
    case Errc::states_not_identifiable: return "states-not-identifiable";
    case Errc::nonpositive_input: return "nonpositive-input";
    case Errc::no_crossing: return "no-crossing";
    case Errc::multiple_crossings: return "multiple-crossings";
    case Errc::empty_values: return "empty-values";
    case Errc::unknown_key: return "unknown-key";
    case Errc::type_mismatch: return "type-mismatch";
    case Errc::missing_required: return "missing-required";
    case Errc::invalid_value: return "invalid-value";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

}  // namespace dwx
