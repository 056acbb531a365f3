#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tilecensus {

enum class ErrorCode {
    empty_set,
    out_of_box,
    bad_dimension,
    parse_error,
    wrong_dimension,
    not_a_tile,
    limit_exceeded,
    duplicates,
    budget_exceeded,
    bad_divisibility,
    degenerate,
    certificate_failed,
    domain,
    vacuous_bound,
    not_a_tiling,
};

std::string_view to_string(ErrorCode code);

// Budget-type errors map to exit code 3 in the CLI, everything else to 1.
bool is_budget_error(ErrorCode code);

class TilingError : public std::runtime_error {
public:
    TilingError(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace tilecensus
