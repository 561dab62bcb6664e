#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace periodlab {

// Machine-parsable error categories. The CLI prints them as `error[<code>]`.
enum class ErrorCode {
    invalid_argument,
    parse_error,
    capacity,
    unsupported,
    mismatched_variables,
    singular_matrix,
    not_phi_stable,
    not_dominant,
    not_length_preserving,
    invalid_selector,
    invalid_cover,
    degree_out_of_range,
    calibration_ambiguous,
    calibration_inconsistent,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace periodlab
