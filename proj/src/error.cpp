#include "tilecensus/error.hpp"

namespace tilecensus {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::empty_set: return "EMPTY_SET";
        case ErrorCode::out_of_box: return "OUT_OF_BOX";
        case ErrorCode::bad_dimension: return "BAD_DIMENSION";
        case ErrorCode::parse_error: return "PARSE_ERROR";
        case ErrorCode::wrong_dimension: return "WRONG_DIMENSION";
        case ErrorCode::not_a_tile: return "NOT_A_TILE";
        case ErrorCode::limit_exceeded: return "LIMIT_EXCEEDED";
        case ErrorCode::duplicates: return "DUPLICATES";
        case ErrorCode::budget_exceeded: return "BUDGET_EXCEEDED";
        case ErrorCode::bad_divisibility: return "BAD_DIVISIBILITY";
        case ErrorCode::degenerate: return "DEGENERATE";
        case ErrorCode::certificate_failed: return "CERTIFICATE_FAILED";
        case ErrorCode::domain: return "DOMAIN";
        case ErrorCode::vacuous_bound: return "VACUOUS_BOUND";
        case ErrorCode::not_a_tiling: return "NOT_A_TILING";
    }
    return "UNKNOWN_ERROR";
}

bool is_budget_error(ErrorCode code) {
    return code == ErrorCode::budget_exceeded || code == ErrorCode::limit_exceeded;
}

TilingError::TilingError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

}  // namespace tilecensus
