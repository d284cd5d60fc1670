#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

#include "pasf/conjectures.hpp"
#include "pasf/rng.hpp"

namespace pasf {

namespace {

// K_eps = kernel of (x, y) -> diag(eps) A x - A y on R^{2d}
Mat sign_pattern_kernel(const Mat& a, const std::vector<int>& signs) {
    const Eigen::Index n = a.rows(), d = a.cols();
    Mat b(n, 2 * d);
    for (Eigen::Index i = 0; i < n; ++i) {
        b.block(i, 0, 1, d) = static_cast<double>(signs[static_cast<std::size_t>(i)]) * a.row(i);
        b.block(i, d, 1, d) = -a.row(i);
    }
    Eigen::FullPivLU<Mat> lu(b);
    lu.setThreshold(1e-12);
    Mat kernel = lu.kernel();  // 2d x k (a zero column when the kernel is trivial)
    // normalize columns for stable containment tests
    for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
        const double norm = kernel.col(j).norm();
        if (norm > 0) kernel.col(j) /= norm;
    }
    return kernel;
}

struct KernelSplit {
    Mat zx, zy;  // d x k blocks
    bool trivial = false;
};

KernelSplit split_kernel(const Mat& kernel, Eigen::Index d) {
    KernelSplit ks;
    if (kernel.cols() == 1 && kernel.col(0).norm() == 0.0) {
        ks.trivial = true;
        return ks;
    }
    ks.zx = kernel.topRows(d);
    ks.zy = kernel.bottomRows(d);
    return ks;
}

bool contained_in_diagonal(const KernelSplit& ks, double sign, double tol) {
    return (ks.zx - sign * ks.zy).cwiseAbs().maxCoeff() <= tol;
}

struct PairWitness {
    Vec x, y;
};

// scaled distance of (x, y) from both diagonals {y = x} and {y = -x}
double diagonal_distance(const Vec& x, const Vec& y) {
    const double scale = std::max(1e-300, std::sqrt(x.squaredNorm() + y.squaredNorm()));
    return std::min((x - y).norm(), (x + y).norm()) / scale;
}

}  // namespace

SearchReport retrieval_check(const Pasf& P, RetrievalSide side, RetrievalKind kind,
                             double tol) {
    const Mat a = side == RetrievalSide::vector ? P.functionals
                                                : Mat(P.vectors.transpose());
    const Exponent norm_exp = side == RetrievalSide::vector ? P.r : dual_exponent(P.r);
    const Eigen::Index n = a.rows(), d = a.cols();
    if (n > 20)
        throw std::invalid_argument("retrieval_check: n > 20 exceeds the sign-pattern budget");

    SearchReport rep;
    rep.seed = kDefaultSeed;
    rep.strategy = SearchStrategy::exhaustive;
    rep.conjecture = kind == RetrievalKind::phase ? "phase retrieval problem"
                                                  : "norm retrieval problem";
    Rng rng(kDefaultSeed);
    bool inconclusive = false;

    std::vector<int> signs(static_cast<std::size_t>(n), 1);
    const std::uint64_t patterns = n >= 1 ? (1ULL << (n - 1)) : 1;  // global sign quotient
    for (std::uint64_t bits = 0; bits < patterns; ++bits) {
        ++rep.nodes_examined;
        for (Eigen::Index i = 1; i < n; ++i)
            signs[static_cast<std::size_t>(i)] = (bits >> (i - 1)) & 1ULL ? -1 : 1;

        const Mat kernel = sign_pattern_kernel(a, signs);
        const KernelSplit ks = split_kernel(kernel, d);
        if (ks.trivial) continue;
        if (contained_in_diagonal(ks, 1.0, tol) || contained_in_diagonal(ks, -1.0, tol)) continue;

        if (kind == RetrievalKind::phase) {
            // some kernel vector has y != +-x; find a well-separated one
            PairWitness best;
            double best_dist = -1.0;
            auto consider = [&](const Vec& c) {
                const Vec x = ks.zx * c, y = ks.zy * c;
                if (x.norm() + y.norm() < 1e-12) return;
                const double dist = diagonal_distance(x, y);
                if (dist > best_dist) {
                    best_dist = dist;
                    best = {x, y};
                }
            };
            const Eigen::Index k = ks.zx.cols();
            for (Eigen::Index j = 0; j < k; ++j) consider(Vec(Vec::Unit(k, j)));
            for (Eigen::Index i = 0; i < k; ++i)
                for (Eigen::Index j = i + 1; j < k; ++j)
                    consider(Vec(Vec::Unit(k, i) + Vec::Unit(k, j)));
            for (int t = 0; t < 16; ++t) {
                Vec c(k);
                for (Eigen::Index i = 0; i < k; ++i) c[i] = rng.normal();
                consider(c);
            }
            if (best_dist > 1e-6) {
                const double scale = std::max(best.x.norm(), best.y.norm());
                rep.witness_x = Vec(best.x / scale);
                rep.witness_y = Vec(best.y / scale);
                rep.status = SearchStatus::refuted_with_witness;
                rep.note = "kernel of sign pattern escapes both diagonals";
                return rep;
            }
            inconclusive = true;  // kernel exceeds the diagonals only marginally
            continue;
        }

        // norm retrieval on this kernel
        const Eigen::Index k = ks.zx.cols();
        Eigen::FullPivLU<Mat> lux(ks.zx);
        lux.setThreshold(1e-12);
        if (lux.rank() < k) {
            // a pair (0, y != 0) lies in the kernel: norms 0 and ||y|| differ
            const Mat coeff_kernel = lux.kernel();
            for (Eigen::Index j = 0; j < coeff_kernel.cols(); ++j) {
                Vec y = ks.zy * coeff_kernel.col(j);
                if (y.norm() > 1e-9) {
                    rep.witness_x = Vec(Vec::Zero(d));
                    rep.witness_y = Vec(y / y.norm());
                    rep.status = SearchStatus::refuted_with_witness;
                    rep.note = "kernel contains (0, y) with y != 0";
                    return rep;
                }
            }
            inconclusive = true;
            continue;
        }
        // graph case: y = W x on the subspace spanned by zx
        bool certified = false;
        if (norm_exp.is_two()) {
            const Mat gram_diff = ks.zy.transpose() * ks.zy - ks.zx.transpose() * ks.zx;
            if (gram_diff.cwiseAbs().maxCoeff() <= tol) {
                certified = true;
            } else {
                Eigen::SelfAdjointEigenSolver<Mat> es(gram_diff);
                Eigen::Index worst = 0;
                for (Eigen::Index i = 1; i < k; ++i)
                    if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(worst))) worst = i;
                const Vec c = es.eigenvectors().col(worst);
                Vec x = ks.zx * c, y = ks.zy * c;
                const double scale = std::max(x.norm(), y.norm());
                rep.witness_x = Vec(x / scale);
                rep.witness_y = Vec(y / scale);
                rep.status = SearchStatus::refuted_with_witness;
                rep.note = "Gram mismatch on a sign-pattern kernel";
                return rep;
            }
        } else if (k == d) {
            const Mat w = ks.zy * ks.zx.inverse();
            if (is_isometry(w, norm_exp, tol).isometry) certified = true;
        }
        if (!certified) {
            // sampling fallback; a violation refutes, silence is inconclusive
            bool violated = false;
            for (int t = 0; t < 64 && !violated; ++t) {
                Vec c(k);
                if (t < k)
                    c = Vec::Unit(k, t);
                else
                    for (Eigen::Index i = 0; i < k; ++i) c[i] = rng.normal();
                Vec x = ks.zx * c, y = ks.zy * c;
                const double nx = p_norm(x, norm_exp), ny = p_norm(y, norm_exp);
                if (std::abs(nx - ny) > tol * std::max(1.0, std::max(nx, ny))) {
                    const double scale = std::max(x.norm(), y.norm());
                    rep.witness_x = Vec(x / scale);
                    rep.witness_y = Vec(y / scale);
                    rep.status = SearchStatus::refuted_with_witness;
                    rep.note = "sampled norm mismatch on a sign-pattern kernel";
                    violated = true;
                }
            }
            if (violated) return rep;
            inconclusive = true;
        }
    }

    rep.status = inconclusive ? SearchStatus::exhausted_inconclusive
                              : SearchStatus::holds_with_witness;
    return rep;
}

}  // namespace pasf
