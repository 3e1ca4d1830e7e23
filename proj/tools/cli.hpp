#pragma once
// Command-line front end. run() is the whole program minus process setup,
// so tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

#include "askey/recipe.hpp"

namespace askey::cli {

enum ExitCode : int { kOk = 0, kToleranceFailure = 1, kUsageError = 2 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct Check {
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool passed = true;
    bool informational = false;  // reported, never fails the run
};

struct VerifyOptions {
    double kernel_tol = -1.0;  // < 0: 1e-12 finite, 1e-10 truncated
    int oracle_max_sites = 6;  // many-body oracle runs when size <= this
    // Test hook: K(x, y) += delta before any check.
    bool inject = false;
    long inject_x = 0;
    long inject_y = 0;
    double inject_delta = 0.0;
};

std::vector<Check> run_checks(const RecipeSpec& recipe, const VerifyOptions& options);

}  // namespace askey::cli
