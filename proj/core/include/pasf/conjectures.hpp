#pragma once

#include <optional>

#include "pasf/search.hpp"

namespace pasf {

// Minimal M <= max_m such that every part of some M-partition is a Riesz
// sequence with certified lower bound >= a_min. Exhaustive over
// restricted-growth strings for n <= 12, greedy first-fit plus local moves
// beyond.
SearchReport feichtinger_search(const Pasf& P, double a_min, int max_m,
                                const Budget& budget = {});

struct WeaverFlags {
    bool unit_norm = false;
    bool tight = false;
    bool spectrum_nonneg = false;
};

// Minimize max_k ||S_k||_{r->r} over partitions into at most m parts, where
// S_k sums tau_j f_j over part k; holds when the minimum is <= b - eps.
SearchReport weaver_search(const Pasf& P, double b, double eps, int m,
                           WeaverFlags flags = {}, const Budget& budget = {});

// Minimal M such that every part is a unit-norm eps-Riesz sequence.
SearchReport r_eps_search(const Pasf& P, double eps, int max_m,
                          const Budget& budget = {});

// Subset M minimizing || sum_{j in M} tau_j f_j - sum_j r_j tau_j f_j ||;
// exhaustive over 2^n for n <= 20, otherwise rounding plus local swaps.
SearchReport akemann_weaver_search(const Pasf& P, const std::vector<double>& weights,
                                   const Budget& budget = {});

// Norm triples (||f_j||, ||tau_j||, |f_j(tau_j)|) with the exponents of the
// fundamental-inequality conjecture; exponents here are any positive reals.
struct NormProfile {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;
    double p = 2.0;
    double q = 2.0;
    double r = 2.0;
};

struct InequalityResult {
    bool a_ok = false;
    bool b_ok = false;
    bool c_ok = false;
    bool combined = false;
};

// max_j v_j^e <= (1/d) sum_j v_j^e for each of the three families
InequalityResult fundamental_inequality_check(const NormProfile& profile, int d);

struct MajorizationResult {
    bool a_ok = false;
    bool b_ok = false;
    bool c_ok = false;
    bool combined = false;
};

// prefix-sum domination by the spectrum lambda (sorted descending, positive)
// plus total-sum equality, for each family
MajorizationResult majorization_check(const NormProfile& profile,
                                      const std::vector<double>& lambda,
                                      double tol = kTolExact);

enum class DesignMode { tight_with_norms, frame_operator_with_norms };

// Penalized multistart minimization over (F, T): tightness defect (or
// ||TF - S_target||) plus squared norm-target deviations. A witness-only
// search: non-achievement reports exhausted-inconclusive, never refuted.
SearchReport inverse_design_search(DesignMode mode, int d, int n,
                                   const NormProfile& targets,
                                   const std::optional<Mat>& s_target,
                                   Exponent p, Exponent r,
                                   const Budget& budget = {},
                                   std::uint64_t seed = kDefaultSeed);

struct ScalingResult {
    Vec scalars;      // c_j with sum_j c_j tau_j f_j ~ I (minimum-norm solution)
    double residual = 0.0;
    bool scalable = false;
    Vec a_scalars;    // c split as a_j = b_j = sign(c_j) sqrt|c_j|
    Vec b_scalars;
    bool used_negative = false;
};

// Exact linear least squares for the scaling problem: S_{af,btau} depends on
// the products a_j b_j only.
ScalingResult scaling_solve(const Pasf& P);

enum class RetrievalSide { vector, functional };
enum class RetrievalKind { phase, norm };

// Sign-pattern kernel certification of phase/norm retrieval over the reals.
SearchReport retrieval_check(const Pasf& P, RetrievalSide side, RetrievalKind kind,
                             double tol = kTolExact);

// (f_k U^m, V^m tau_k) for k over generators and m = 0..horizon-1, index
// order (k, m) lexicographic.
Pasf dynamical_build(const Mat& generators_f, const Mat& generators_tau,
                     const Mat& u, const Mat& v, int horizon, Exponent p, Exponent r);

enum class DecompositionMode { lin_comb, multiple_of_sum, onb_plus_riesz };

// Express T over signed-permutation p-orthonormal bases (r = p != 2,
// exhaustive up to d = 4) or over orthogonal factors by alternating
// Procrustes (r = p = 2). The functional-side decomposition is reported
// alongside in witness_mats/witness_coeffs order: T-side first, F-side after.
SearchReport decomposition_search(const Pasf& P, DecompositionMode mode, int m,
                                  const Budget& budget = {});

struct KotheLorchReport {
    RieszBasisResult riesz;
    double expansion_defect = 0.0;  // ||S - I||_{r->r}
    bool expansion_ok = false;
    double tau_min = 0.0, tau_max = 0.0;
    double f_min = 0.0, f_max = 0.0;
    bool sandwich_ok = false;
};

// Raw condition results of the Kothe-Lorch problem; no verdict is synthesized.
KotheLorchReport kothe_lorch_check(const Pasf& P, double tol = kTolExact);

// Recompute every per-part bound from scratch with a fresh estimator seed.
bool verify_certificate(const PartitionCertificate& cert, const Pasf& P);

}  // namespace pasf
