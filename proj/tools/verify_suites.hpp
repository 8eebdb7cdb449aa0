#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace rigidsphere::cli {

struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0; // base tolerance, scaled by 2^degree for series
    bool pass = false;
    nlohmann::json detail = nlohmann::json::object();
};

struct SuiteOptions {
    std::uint64_t seed = 42;
    int cap = 10;
    double perturb_phi = 0.0;
    double tolerance = 1e-9;
};

const std::vector<std::string> &suite_names();

// Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_suite(const std::string &suite, const SuiteOptions &opts);

nlohmann::json to_json(const CheckResult &c);

} // namespace rigidsphere::cli
