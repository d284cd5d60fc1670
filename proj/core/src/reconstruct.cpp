#include "pasf/reconstruct.hpp"

#include <stdexcept>

namespace pasf {

AlgorithmCondition check_algorithm_condition(const Pasf& P) {
    AlgorithmCondition res;
    res.bounds = frame_bounds(P);
    if (res.bounds.a <= 0.0)
        throw std::invalid_argument("check_algorithm_condition: no certified lower frame bound");
    const Mat s = frame_operator(P);
    const double relax = 2.0 / (res.bounds.a + res.bounds.b);
    const Mat m = Mat::Identity(P.dim(), P.dim()) - relax * s;
    res.condition_value = op_norm(m, P.r, P.r).upper;
    res.ratio_bound = (res.bounds.b - res.bounds.a) / (res.bounds.b + res.bounds.a);
    res.holds = res.condition_value <= res.ratio_bound + 1e-12;
    return res;
}

ReconstructionTrace duffin_schaeffer(const Pasf& P, const Vec& coefficients,
                                     int max_iters, double tol,
                                     const std::optional<Vec>& ground_truth) {
    if (coefficients.size() != P.size())
        throw std::invalid_argument("duffin_schaeffer: coefficient length != n");
    if (ground_truth && ground_truth->size() != P.dim())
        throw std::invalid_argument("duffin_schaeffer: ground truth has wrong dimension");

    const AlgorithmCondition cond = check_algorithm_condition(P);
    const Mat s = frame_operator(P);
    const Vec synthesized = P.vectors * coefficients;  // theta_tau c
    const double relax = 2.0 / (cond.bounds.a + cond.bounds.b);

    ReconstructionTrace trace;
    trace.ratio_bound = cond.ratio_bound;
    trace.condition_value = cond.condition_value;
    trace.condition_holds = cond.holds;

    Vec x = Vec::Zero(P.dim());
    auto record = [&](const Vec& xk) {
        trace.iterates.push_back(xk);
        const double err = ground_truth ? p_norm(Vec(xk - *ground_truth), P.r)
                                        : p_norm(Vec(synthesized - s * xk), P.r);
        trace.errors.push_back(err);
        return err;
    };
    record(x);
    for (int k = 0; k < max_iters; ++k) {
        x = x + relax * (synthesized - s * x);
        if (record(x) <= tol) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

}  // namespace pasf
