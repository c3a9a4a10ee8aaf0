// qosrec/optimize.hpp
//
// Deterministic limited-memory quasi-Newton minimizer used to fit the GLMs.
// Only objective values and gradients are required.

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qosrec {

/// Returns f(x) and writes ∇f(x) into `grad` (same length as x).
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct MinimizeOptions {
    int max_iterations = 500;
    double gradient_tolerance = 1e-7;  // on the max-norm of the gradient
    int history = 10;
};

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

MinimizeResult minimize_lbfgs(const Objective& objective, std::vector<double> x0,
                              const MinimizeOptions& options = {});

}  // namespace qosrec
