#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lasym::cli {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Known suites: landau, green, flux, solver, counterexample, all.
bool suite_exists(const std::string& name);
std::vector<CheckResult> run_suite(const std::string& name, std::uint64_t seed);

}  // namespace lasym::cli
