#pragma once

#include <stdexcept>
#include <string>

namespace gfcalc {

enum class ErrorCode {
    domain_mismatch,
    gauge_mismatch,
    not_invertible,
    undetermined,
    not_differentiable,
    boundary_condition,
    out_of_domain,
    non_moderate,
    budget_exceeded,
    incompatible_family,
    invalid_argument,
    parse_error,
    target_invariant,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gfcalc
