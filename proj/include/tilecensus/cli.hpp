#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace tilecensus::cli {

// TILECENSUS_* settings; flags override them, they override the defaults.
struct Environment {
    std::optional<std::string> max_n;
    std::optional<std::string> budget_cells;
    std::optional<std::string> jobs;

    static Environment from_process();
};

// Runs one subcommand. args excludes the program name. Results go to out,
// logs and errors (as JSON) to err. Exit codes: 0 ok, 1 domain error,
// 2 usage error, 3 budget exhausted.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const Environment& env = Environment::from_process());

// Rounds every floating-point number in j to the given significant digits.
nlohmann::json round_floats(const nlohmann::json& j, int digits = 12);

std::string format_number(double x, int digits = 12);

}  // namespace tilecensus::cli
