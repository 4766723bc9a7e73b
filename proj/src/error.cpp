#include "gfcalc/error.hpp"

namespace gfcalc {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::domain_mismatch: return "domain_mismatch";
    case ErrorCode::gauge_mismatch: return "gauge_mismatch";
    case ErrorCode::not_invertible: return "not_invertible";
    case ErrorCode::undetermined: return "undetermined";
    case ErrorCode::not_differentiable: return "not_differentiable";
    case ErrorCode::boundary_condition: return "boundary_condition";
    case ErrorCode::out_of_domain: return "out_of_domain";
    case ErrorCode::non_moderate: return "non_moderate";
    case ErrorCode::budget_exceeded: return "budget_exceeded";
    case ErrorCode::incompatible_family: return "incompatible_family";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::target_invariant: return "target_invariant";
    }
    return "unknown";
}

}  // namespace gfcalc
