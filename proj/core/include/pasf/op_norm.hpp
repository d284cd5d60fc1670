#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pasf/exponent.hpp"

namespace pasf {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed5eedULL;

enum class NormMethod {
    exact_diagonal,   // |diagonal| maximum, r_in == r_out
    exact_p1,         // column/row closed forms (r_in = 1 family, r_out = inf family)
    exact_spectral,   // largest/smallest singular value, r_in == r_out == 2
    boyd_multistart,  // fixed-point power iteration from many starts
};

std::string to_string(NormMethod m);

// Two-sided bracket on an r_in -> r_out operator norm (or minimal gain).
// For op_norm the witness achieves `lower`; for gain_lower_bound the witness
// achieves `upper` (an infimum is witnessed from above). `certified` is false
// only when the non-witnessed side is the declared 5% slack rather than a
// closed form or interpolation inequality.
struct OperatorNormEstimate {
    double lower = 0.0;
    double upper = 0.0;
    Vec witness;
    NormMethod method = NormMethod::boyd_multistart;
    int starts = 0;
    std::uint64_t seed = 0;
    bool certified = true;
};

struct OpNormOptions {
    int max_iters = 500;
    double tol = 1e-12;        // relative convergence on the norm functional
    int multistarts = 64;      // total starts incl. +-basis vectors
    std::uint64_t seed = kDefaultSeed;
};

double norm_ratio(const Mat& a, const Vec& x, Exponent r_in, Exponent r_out);

// Certified bracket on sup_x ||Ax||_{r_out} / ||x||_{r_in}. Exact closed
// forms where available, otherwise Boyd iteration with a Riesz-Thorin upper
// bound when r_in == r_out.
OperatorNormEstimate op_norm(const Mat& a, Exponent r_in, Exponent r_out,
                             const OpNormOptions& opts = {});

// Certified bracket on inf_x ||Ax||_{r_out} / ||x||_{r_in}. Exact through
// the inverse for square invertible inputs; zero with a kernel witness when
// the kernel is nontrivial; norm-equivalence times sigma_min otherwise.
OperatorNormEstimate gain_lower_bound(const Mat& a, Exponent r_in, Exponent r_out,
                                      const OpNormOptions& opts = {});

struct IsometryResult {
    bool isometry = false;
    double defect = 0.0;  // worst observed | ||Ax||/||x|| - 1 |
    Vec witness;          // violating vector when isometry == false
};

// ||Ax||_r == ||x||_r for all x.  r == 2 checks A^T A == I; r != 2 uses the
// signed-permutation characterization of finite-dimensional l^r isometries.
IsometryResult is_isometry(const Mat& a, Exponent r, double tol = 1e-9);

// Stream of all 2^d d! generalized permutation matrices with entries in
// {-1,0,+1}, lexicographic in (permutation, sign mask). Rejects d > 8.
class SignedPermutations {
public:
    explicit SignedPermutations(int d);

    std::optional<Mat> next();
    void reset();

    static std::uint64_t count(int d);

private:
    int d_;
    std::vector<int> perm_;
    std::uint32_t mask_ = 0;
    bool done_ = false;
};

std::vector<Mat> all_signed_permutations(int d);

}  // namespace pasf
