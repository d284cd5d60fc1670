#pragma once

#include <optional>
#include <vector>

#include "pasf/frames.hpp"

namespace pasf {

struct AlgorithmCondition {
    double condition_value = 0.0;  // ||I - (2/(a+b)) S||_{r->r} certified upper
    double ratio_bound = 0.0;      // (b-a)/(b+a)
    bool holds = false;
    FrameBounds bounds;
};

// Hypothesis of the frame iteration theorem: the relaxed operator must
// contract at least as fast as the frame-bound ratio.
AlgorithmCondition check_algorithm_condition(const Pasf& P);

struct ReconstructionTrace {
    std::vector<Vec> iterates;
    std::vector<double> errors;  // ||x_k - x||_r, or residual ||theta_tau c - S x_k||_r
    double ratio_bound = 0.0;
    double condition_value = 0.0;
    bool condition_holds = false;
    bool converged = false;
};

// x_0 = 0, x_k = x_{k-1} + (2/(a+b)) (theta_tau c - S x_{k-1}): the
// measurement-only form of the update, since S(x - x_{k-1}) is unavailable
// without the unknown x.
ReconstructionTrace duffin_schaeffer(const Pasf& P, const Vec& coefficients,
                                     int max_iters, double tol,
                                     const std::optional<Vec>& ground_truth = std::nullopt);

}  // namespace pasf
