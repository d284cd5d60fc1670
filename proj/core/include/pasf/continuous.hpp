#pragma once

#include <functional>
#include <string>

#include "pasf/conjectures.hpp"

namespace pasf {

// Parameterized frame pair on an interval with a density; the evaluable maps
// must be pure and reentrant.
struct ContinuousPasf {
    double domain_lo = 0.0;
    double domain_hi = 1.0;
    std::function<double(double)> weight;      // density w(alpha) >= 0
    std::function<Vec(double)> functional;     // alpha -> row f_alpha (length d)
    std::function<Vec(double)> vector;         // alpha -> column tau_alpha
    int dim = 0;
    Exponent p{2.0};
    Exponent r{2.0};
    std::string label;
};

enum class QuadratureRule { trapezoid, midpoint, gauss_legendre };

std::string to_string(QuadratureRule r);

struct Quadrature {
    std::vector<double> nodes;    // sorted, inside the domain
    std::vector<double> weights;  // positive, summing to the domain length
    QuadratureRule rule = QuadratureRule::trapezoid;
};

// n is the node count (trapezoid includes both endpoints, n >= 2)
Quadrature make_quadrature(QuadratureRule rule, int n, double lo, double hi);

// tau_alpha = (cos a, sin a), f_alpha(x,y) = x cos a + y sin a on [0, 2pi]
// with w = 1 and X = (R^2, ||.||_1)
ContinuousPasf circle_example(Exponent p);

// sum_i q_i w(a_i) tau(a_i) f(a_i), pairwise tree summation
Mat cont_frame_operator(const ContinuousPasf& c, const Quadrature& q);

struct ContNormEstimates {
    double analysis = 0.0;   // lower estimate of ||theta_f||_{r -> L^p}
    double synthesis = 0.0;  // lower estimate through the discretized synthesis matrix
    int samples = 0;
    std::uint64_t seed = 0;
};

ContNormEstimates cont_norm_estimates(const ContinuousPasf& c, const Quadrature& q,
                                      int samples, std::uint64_t seed = kDefaultSeed);

// node i contributes f_i = (w q)^{1/q'} f(a_i), tau_i = (w q)^{1/p} tau(a_i)
// with q' = dual(p), so that T F equals the quadrature frame operator exactly;
// p = 1 puts all weight on tau (recorded in the label)
Pasf discretize(const ContinuousPasf& c, const Quadrature& q);

// || F_d S^{-1} T_d - I ||_{p->p} on the node space; per-resolution evidence
// toward the continuous Riesz identity, never a proof
double cont_riesz_defect(const ContinuousPasf& c, const Quadrature& q);

enum class BridgeWhich { feichtinger, weaver, akemann_weaver };

struct BridgeParams {
    double a_min = 0.5;
    int max_m = 4;
    double b = 2.0;
    double eps = 0.5;
    int m = 2;
    WeaverFlags weaver_flags{};
    std::function<double(double)> r_map;  // Akemann-Weaver weights, default 1/2
    int coarse_blocks = 8;
    Budget budget{};
};

// Runs the discrete harness on the discretized pair; node partitions stand in
// for measurable partitions and are reported as unions of subintervals.
SearchReport continuous_conjecture_bridge(const ContinuousPasf& c, const Quadrature& q,
                                          BridgeWhich which, const BridgeParams& params);

}  // namespace pasf
