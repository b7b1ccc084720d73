#pragma once

#include <string>
#include <vector>

#include "bwu/local_norms.hpp"

namespace bwu::harness {

struct AcceptanceOptions {
    int dim = 1;
    double h = 1.0 / 64.0;
    double r_max = 8.0;
    double rho = 1.1892071150027210667; // 2^(1/4)
    bool verbose = false;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs the nine-criterion verification suite and returns one line each.
std::vector<CriterionResult> run_acceptance_suite(const AcceptanceOptions& opts = {});

} // namespace bwu::harness
