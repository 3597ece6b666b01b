#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bicausal {

enum class ErrorCode {
    DOMAIN_VIOLATION,
    BASE_MISMATCH,
    NUMERIC_FAILURE,
    IMMERSION_FAILURE,
    DEGENERATE_INPUT,
    SIGN_AMBIGUOUS,
    ORIENTATION_FLIP,
    NON_TANGENT,
    NULL_DIRECTION,
    MISSING_CONTEXT,
    PARAMETER_SINGULARITY,
    HYPOTHESIS_VIOLATED,
    T_R_VANISHES,
    CURVE_SINGULAR,
    TAU_NONZERO,
    MODEL_MISMATCH,
    CONFIG_INVALID,
    UNSUPPORTED_FORMAT,
};

std::string_view to_string(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace bicausal
