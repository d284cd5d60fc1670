#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pasf/exponent.hpp"
#include "pasf/op_norm.hpp"

namespace pasf {

// default tolerances: exact identity checks vs optimization-derived values
inline constexpr double kTolExact = 1e-9;
inline constexpr double kTolOptim = 1e-6;

// Finite p-approximate Schauder frame pair on X = (R^d, ||.||_r):
// functionals as rows of F (n x d), vectors as columns of T (d x n),
// coefficients living in l^p_n. Immutable after construction.
struct Pasf {
    Mat functionals;  // n x d, row j is f_j
    Mat vectors;      // d x n, column j is tau_j
    Exponent p{2.0};
    Exponent r{2.0};
    std::string label;

    Eigen::Index dim() const { return vectors.rows(); }
    Eigen::Index size() const { return vectors.cols(); }

    Vec functional(Eigen::Index j) const { return functionals.row(j).transpose(); }
    Vec vector(Eigen::Index j) const { return vectors.col(j); }
};

Pasf make_explicit(Mat functionals, Mat vectors, Exponent p, Exponent r,
                   std::string label = {});
Pasf make_standard(int d, Exponent p, Exponent r);
// basis vector e_j repeated k times, functionals scaled 1/k so that S = I
Pasf make_duplicated_standard(int d, int k, Exponent p, Exponent r);
// seeded uniform[-1,1] entries, redrawn until cond_2(S) <= 1e6
Pasf make_random(int d, int n, Exponent p, Exponent r, std::uint64_t seed);

struct FrameBounds {
    double a = 0.0;  // certified lower frame bound (0 when S is not injective)
    double b = 0.0;  // certified upper frame bound
    OperatorNormEstimate a_cert;
    OperatorNormEstimate b_cert;
};

enum class FrameClassTag {
    rejected,      // not a frame model at all (non-finite entries etc.)
    bessel_only,   // S singular: p-approximate Bessel sequence only
    asf,           // invertible S with certified a > 0
    tight,         // S = lambda I
    parseval,      // S = I
    riesz_basis,   // F S^{-1} T = I on the coefficient space
    p_orthonormal_basis,
};

std::string to_string(FrameClassTag t);

struct Evidence {
    std::string check;
    bool passed = false;
    double value = 0.0;
    std::string detail;
};

struct FrameClass {
    FrameClassTag tag = FrameClassTag::rejected;
    double tight_lambda = 0.0;  // meaningful for tight/parseval
    std::vector<Evidence> evidence;
};

// S_{f,tau} = T * F, the d x d frame operator
Mat frame_operator(const Pasf& P);

FrameBounds frame_bounds(const Pasf& P);

FrameClass classify(const Pasf& P, double tol = kTolExact);

enum class OrthoMode { sequence, basis };

struct POrthonormalResult {
    bool ok = false;
    std::vector<Evidence> diagnostics;
};

// Conditions of the p-orthonormal sequence/basis definition on an index set:
// biorthogonality, contractive analysis into l^p, and synthesis acting as an
// l^p isometry onto its range (signed-permutation criterion when r == p != 2
// on disjoint supports, certificate route otherwise).
POrthonormalResult is_p_orthonormal(const Pasf& P, const std::vector<int>& index_set,
                                    OrthoMode mode, double tol = kTolExact);

struct RieszBasisResult {
    bool is_riesz = false;
    double defect = 0.0;  // ||F S^{-1} T - I||_{p->p}, infinite when S singular
    bool has_intertwiners = false;
    Mat u;  // theta_omega theta_f for the standard reference pair (square case)
    Mat v;  // theta_tau theta_g
};

RieszBasisResult is_riesz_basis(const Pasf& P, double tol = kTolExact);

struct RieszBoundPair {
    double lower = 0.0;
    double upper = 0.0;
    OperatorNormEstimate lower_cert;
    OperatorNormEstimate upper_cert;
    std::vector<int> index_set;
};

struct RieszSequenceResult {
    RieszBoundPair bounds;
    bool is_riesz = false;
    // secondary route: the pair restricted to W = span{tau_j : j in I} in an
    // l^2-orthonormal basis of W; reported alongside, never merged
    bool restricted_pair_riesz = false;
    double restricted_defect = 0.0;
};

RieszSequenceResult riesz_sequence_bounds(const Pasf& P, const std::vector<int>& index_set,
                                          double tol = kTolExact);

struct EpsRieszResult {
    bool ok = false;
    bool unit_norm_ok = false;
    double lower = 0.0;
    double upper = 0.0;
};

// unit-norm eps-Riesz test: ||f_j|| = ||tau_j|| = |f_j(tau_j)| = 1 and Riesz
// bounds within [1-eps, 1+eps]
EpsRieszResult is_eps_riesz(const Pasf& P, const std::vector<int>& index_set,
                            double eps, double tol = kTolExact);

struct IntertwinerResult {
    Mat v;
    bool isometry = false;
    double deviation = 0.0;  // worst entry error of V tau^1 = tau^2 and f^1 V^{-1} = f^2
};

// V with V tau^{(1)}_n = tau^{(2)}_n and f^{(1)}_n V^{-1} = f^{(2)}_n for two
// p-orthonormal bases; throws if either input fails the basis-mode test.
IntertwinerResult recover_intertwiner(const Pasf& B1, const Pasf& B2,
                                      double tol = kTolExact);

std::vector<int> full_index_set(const Pasf& P);

}  // namespace pasf
