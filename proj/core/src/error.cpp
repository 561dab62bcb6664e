#include "periodlab/error.hpp"

namespace periodlab {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::capacity: return "capacity";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::mismatched_variables: return "mismatched_variables";
    case ErrorCode::singular_matrix: return "singular_matrix";
    case ErrorCode::not_phi_stable: return "not_phi_stable";
    case ErrorCode::not_dominant: return "not_dominant";
    case ErrorCode::not_length_preserving: return "not_length_preserving";
    case ErrorCode::invalid_selector: return "invalid_selector";
    case ErrorCode::invalid_cover: return "invalid_cover";
    case ErrorCode::degree_out_of_range: return "degree_out_of_range";
    case ErrorCode::calibration_ambiguous: return "calibration_ambiguous";
    case ErrorCode::calibration_inconsistent: return "calibration_inconsistent";
    }
    return "unknown";
}

} // namespace periodlab
