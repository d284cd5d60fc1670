#include "pasf/op_norm.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pasf/parallel.hpp"
#include "pasf/rng.hpp"

namespace pasf {

std::string to_string(NormMethod m) {
    switch (m) {
        case NormMethod::exact_diagonal: return "exact-diagonal";
        case NormMethod::exact_p1: return "exact-p1";
        case NormMethod::exact_spectral: return "exact-spectral";
        case NormMethod::boyd_multistart: return "boyd-multistart";
    }
    return "?";
}

double norm_ratio(const Mat& a, const Vec& x, Exponent r_in, Exponent r_out) {
    const double den = p_norm(x, r_in);
    if (den == 0.0) throw std::invalid_argument("norm_ratio: zero witness");
    return p_norm(Vec(a * x), r_out) / den;
}

namespace {

void check_nonempty(const Mat& a, const char* who) {
    if (a.rows() == 0 || a.cols() == 0)
        throw std::invalid_argument(std::string(who) + ": empty matrix");
}

bool is_diagonal_matrix(const Mat& a) {
    if (a.rows() != a.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j && a(i, j) != 0.0) return false;
    return true;
}

// sign(v_i) * (|v_i|/max)^e, the direction of the l^q duality map; scale free
Vec power_direction(const Vec& v, double e) {
    const double m = v.cwiseAbs().maxCoeff();
    Vec u = Vec::Zero(v.size());
    if (m == 0.0) return u;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double av = std::abs(v[i]);
        if (av == 0.0) continue;
        const double t = (e == 0.0) ? 1.0 : std::pow(av / m, e);
        u[i] = v[i] > 0 ? t : -t;
    }
    return u;
}

Eigen::Index argmax_abs(const Vec& v) {
    Eigen::Index k = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[k])) k = i;
    return k;
}

// unit-l^q maximizer of <x, w>
Vec holder_extremal(const Vec& w, Exponent q) {
    const Eigen::Index n = w.size();
    Vec x = Vec::Zero(n);
    if (w.cwiseAbs().maxCoeff() == 0.0) {
        x[0] = 1.0;
        return x;
    }
    if (q.is_one()) {
        const Eigen::Index k = argmax_abs(w);
        x[k] = w[k] >= 0 ? 1.0 : -1.0;
        return x;
    }
    if (q.is_inf()) {
        for (Eigen::Index i = 0; i < n; ++i) x[i] = w[i] > 0 ? 1.0 : (w[i] < 0 ? -1.0 : 0.0);
        if (x.cwiseAbs().maxCoeff() == 0.0) x[0] = 1.0;
        return x;
    }
    const double qd = dual_exponent(q).value();
    x = power_direction(w, qd - 1.0);
    const double nx = p_norm(x, q);
    return Vec(x / nx);
}

double op_1_norm(const Mat& a) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        best = std::max(best, a.col(j).cwiseAbs().sum());
    return best;
}

double op_inf_norm(const Mat& a) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        best = std::max(best, a.row(i).cwiseAbs().sum());
    return best;
}

double sigma_max(const Mat& a) {
    return Eigen::JacobiSVD<Mat>(a).singularValues()(0);
}

// Riesz-Thorin style upper bound for ||A||_{r->r}, r in (1, inf): interpolate
// the (1,1)/(inf,inf) endpoints, and sharpen through the exact 2-norm.
double interpolation_upper(const Mat& a, double r) {
    const double n1 = op_1_norm(a);
    const double ninf = op_inf_norm(a);
    const double th = 1.0 - 1.0 / r;
    double u = std::pow(n1, 1.0 - th) * std::pow(ninf, th);
    const double s2 = sigma_max(a);
    if (r <= 2.0)
        u = std::min(u, std::pow(n1, 2.0 / r - 1.0) * std::pow(s2, 2.0 - 2.0 / r));
    else
        u = std::min(u, std::pow(s2, 2.0 / r) * std::pow(ninf, 1.0 - 2.0 / r));
    return u;
}

struct BoydResult {
    double value = 0.0;
    Vec witness;
};

// One ascent run of the fixed-point iteration for sup ||Ax||_q / ||x||_p.
BoydResult boyd_ascend(const Mat& a, Exponent p, Exponent q, Vec x,
                       const OpNormOptions& opts) {
    const double nx = p_norm(x, p);
    if (nx == 0.0) return {};
    x /= nx;
    double best = p_norm(Vec(a * x), q);
    Vec best_x = x;
    for (int it = 0; it < opts.max_iters; ++it) {
        Vec y = a * x;
        const double f = p_norm(y, q);
        if (f == 0.0) break;
        Vec z;
        if (q.is_one()) {
            z = power_direction(y, 0.0);
        } else if (q.is_inf()) {
            z = Vec::Zero(y.size());
            const Eigen::Index k = argmax_abs(y);
            z[k] = y[k] >= 0 ? 1.0 : -1.0;
        } else {
            z = power_direction(y, q.value() - 1.0);
        }
        Vec w = a.transpose() * z;
        Vec xn = holder_extremal(w, p);
        const double fn = p_norm(Vec(a * xn), q);
        if (fn > best) {
            best = fn;
            best_x = xn;
        }
        if (fn <= f * (1.0 + opts.tol)) break;
        x = xn;
    }
    return {best, best_x};
}

std::vector<Vec> multistart_points(Eigen::Index dim, Exponent r_in,
                                   const OpNormOptions& opts) {
    std::vector<Vec> starts;
    for (Eigen::Index j = 0; j < dim; ++j) {
        Vec e = Vec::Zero(dim);
        e[j] = 1.0;
        starts.push_back(e);
        starts.push_back(Vec(-e));
    }
    Rng rng(opts.seed);
    while (static_cast<int>(starts.size()) < std::max<int>(opts.multistarts, 2 * dim)) {
        Vec v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.normal();
        const double n = p_norm(v, r_in);
        if (n == 0.0) continue;
        starts.push_back(Vec(v / n));
    }
    return starts;
}

OperatorNormEstimate finish_exact(const Mat& a, Exponent r_in, Exponent r_out,
                                  double value, Vec witness, NormMethod method) {
    OperatorNormEstimate est;
    est.witness = std::move(witness);
    est.lower = norm_ratio(a, est.witness, r_in, r_out);
    est.upper = std::max(value, est.lower);
    est.method = method;
    est.certified = true;
    return est;
}

}  // namespace

OperatorNormEstimate op_norm(const Mat& a, Exponent r_in, Exponent r_out,
                             const OpNormOptions& opts) {
    check_nonempty(a, "op_norm");
    const Eigen::Index m = a.rows(), n = a.cols();

    if (is_diagonal_matrix(a) && r_in == r_out) {
        Eigen::Index k = 0;
        for (Eigen::Index i = 1; i < n; ++i)
            if (std::abs(a(i, i)) > std::abs(a(k, k))) k = i;
        Vec e = Vec::Zero(n);
        e[k] = 1.0;
        return finish_exact(a, r_in, r_out, std::abs(a(k, k)), std::move(e),
                            NormMethod::exact_diagonal);
    }

    // ||A||_{1 -> Y} = max_j ||col_j||_Y; a single column behaves the same
    if (r_in.is_one() || n == 1) {
        Eigen::Index k = 0;
        double best = -1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double c = col_p_norm(a, j, r_out);
            if (c > best) {
                best = c;
                k = j;
            }
        }
        Vec e = Vec::Zero(n);
        e[k] = 1.0;
        return finish_exact(a, r_in, r_out, best, std::move(e), NormMethod::exact_p1);
    }

    // ||A||_{X -> inf} = max_i ||row_i||_{X*}; a single row behaves the same
    if (r_out.is_inf() || m == 1) {
        const Exponent dual_in = dual_exponent(r_in);
        Eigen::Index k = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double c = row_p_norm(a, i, dual_in);
            if (c > best) {
                best = c;
                k = i;
            }
        }
        Vec row = a.row(k).transpose();
        Vec w = holder_extremal(row, r_in);
        return finish_exact(a, r_in, r_out, best, std::move(w), NormMethod::exact_p1);
    }

    if (r_in.is_two() && r_out.is_two()) {
        Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinV);
        Vec v = svd.matrixV().col(0);
        return finish_exact(a, r_in, r_out, svd.singularValues()(0), std::move(v),
                            NormMethod::exact_spectral);
    }

    // general case: Boyd fixed-point iteration from many starts
    const std::vector<Vec> starts = multistart_points(n, r_in, opts);
    std::vector<BoydResult> results(starts.size());
    best_index_parallel(starts.size(), /*minimize=*/false, [&](std::size_t i) {
        results[i] = boyd_ascend(a, r_in, r_out, starts[i], opts);
        return results[i].value;
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].value > results[best].value) best = i;

    OperatorNormEstimate est;
    est.method = NormMethod::boyd_multistart;
    est.starts = static_cast<int>(starts.size());
    est.seed = opts.seed;
    est.witness = results[best].witness;
    if (est.witness.size() == 0 || p_norm(est.witness, r_in) == 0.0) {
        est.witness = Vec::Zero(n);
        est.witness[0] = 1.0;
    }
    est.lower = norm_ratio(a, est.witness, r_in, r_out);
    if (r_in == r_out && !r_in.is_one() && !r_in.is_inf()) {
        est.upper = std::max(est.lower, interpolation_upper(a, r_in.value()));
        est.certified = true;
    } else {
        est.upper = est.lower * 1.05;
        est.certified = false;
    }
    return est;
}

namespace {

// deterministic projected descent for inf ||Ax||_{r_out} on the unit r_in sphere
BoydResult gain_descend(const Mat& a, Exponent r_in, Exponent r_out, Vec x,
                        int iters) {
    const double nx = p_norm(x, r_in);
    if (nx == 0.0) return {};
    x /= nx;
    double best = p_norm(Vec(a * x), r_out);
    Vec best_x = x;
    double step = 0.5;
    for (int it = 0; it < iters; ++it) {
        Vec y = a * x;
        Vec z = r_out.is_inf() ? Vec() : power_direction(y, r_out.is_one() ? 0.0 : r_out.value() - 1.0);
        if (r_out.is_inf()) {
            z = Vec::Zero(y.size());
            const Eigen::Index k = argmax_abs(y);
            z[k] = y[k] >= 0 ? 1.0 : -1.0;
        }
        Vec g = a.transpose() * z;  // ascent direction of the numerator
        const double gn = g.norm();
        if (gn == 0.0) break;
        Vec xn = x - (step / gn) * g;
        const double nn = p_norm(xn, r_in);
        if (nn == 0.0) {
            step *= 0.5;
            continue;
        }
        xn /= nn;
        const double fn = p_norm(Vec(a * xn), r_out);
        if (fn < best) {
            best = fn;
            best_x = xn;
            x = xn;
        } else {
            step *= 0.5;
            if (step < 1e-12) break;
        }
    }
    return {best, best_x};
}

OperatorNormEstimate kernel_estimate(const Mat& a, Exponent r_in, Exponent r_out,
                                     Vec kvec) {
    OperatorNormEstimate est;
    const double n = p_norm(kvec, r_in);
    est.witness = Vec(kvec / n);
    est.lower = 0.0;
    est.upper = norm_ratio(a, est.witness, r_in, r_out);
    est.method = NormMethod::exact_spectral;
    est.certified = true;
    return est;
}

}  // namespace

OperatorNormEstimate gain_lower_bound(const Mat& a, Exponent r_in, Exponent r_out,
                                      const OpNormOptions& opts) {
    check_nonempty(a, "gain_lower_bound");
    const Eigen::Index n = a.cols();

    for (Eigen::Index j = 0; j < n; ++j) {
        if (a.col(j).cwiseAbs().maxCoeff() == 0.0) {
            Vec e = Vec::Zero(n);
            e[j] = 1.0;
            return kernel_estimate(a, r_in, r_out, std::move(e));
        }
    }

    if (n == 1) {
        // single column: the ratio is constant, so inf = sup = ||col||_{r_out}
        OperatorNormEstimate est;
        est.witness = Vec::Ones(1);
        est.lower = norm_ratio(a, est.witness, r_in, r_out);
        est.upper = est.lower;
        est.method = NormMethod::exact_p1;
        est.certified = true;
        return est;
    }

    // dropping identically zero rows changes no norm of Ax
    std::vector<Eigen::Index> live;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        if (a.row(i).cwiseAbs().maxCoeff() != 0.0) live.push_back(i);
    Mat b(static_cast<Eigen::Index>(live.size()), n);
    for (Eigen::Index i = 0; i < b.rows(); ++i) b.row(i) = a.row(live[i]);

    Eigen::JacobiSVD<Mat> svd(b, Eigen::ComputeThinV);
    const Vec sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    const bool rank_deficient = b.rows() < n || smin <= 1e-13 * std::max(1.0, smax);
    if (rank_deficient) {
        Vec kvec;
        if (b.rows() < n) {
            Eigen::FullPivLU<Mat> lu(b);
            lu.setThreshold(1e-12);
            Mat ker = lu.kernel();
            kvec = ker.col(0);
        } else {
            kvec = svd.matrixV().col(sv.size() - 1);
        }
        return kernel_estimate(a, r_in, r_out, std::move(kvec));
    }

    if (b.rows() == n) {
        // invertible: inf ||Ax||/||x|| = 1 / sup ||A^{-1}y||_{r_in}/||y||_{r_out}
        Mat inv = b.inverse();
        OperatorNormEstimate ie = op_norm(inv, r_out, r_in, opts);
        OperatorNormEstimate est;
        est.lower = 1.0 / ie.upper;
        est.upper = 1.0 / ie.lower;
        Vec x = inv * ie.witness;
        est.witness = Vec(x / p_norm(x, r_in));
        est.method = ie.method;
        est.starts = ie.starts;
        est.seed = ie.seed;
        est.certified = ie.certified;
        return est;
    }

    // tall, full column rank: norm-equivalence floor plus achieved descent value
    const Eigen::Index m = b.rows();
    double c_out = 1.0;
    if (r_out.is_inf())
        c_out = std::pow(static_cast<double>(m), -0.5);
    else if (r_out.value() > 2.0)
        c_out = std::pow(static_cast<double>(m), 1.0 / r_out.value() - 0.5);
    double c_in = 1.0;
    if (!r_in.is_inf() && r_in.value() < 2.0)
        c_in = std::pow(static_cast<double>(n), 0.5 - 1.0 / r_in.value());

    std::vector<Vec> starts;
    starts.push_back(svd.matrixV().col(sv.size() - 1));
    for (Eigen::Index j = 0; j < n; ++j) {
        Vec e = Vec::Zero(n);
        e[j] = 1.0;
        starts.push_back(e);
    }
    Rng rng(opts.seed);
    while (static_cast<int>(starts.size()) < std::max<int>(opts.multistarts, static_cast<int>(n) + 1)) {
        Vec v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
        if (p_norm(v, r_in) == 0.0) continue;
        starts.push_back(v);
    }
    std::vector<BoydResult> results(starts.size());
    best_index_parallel(starts.size(), /*minimize=*/true, [&](std::size_t i) {
        results[i] = gain_descend(b, r_in, r_out, starts[i], 200);
        return results[i].value;
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].value < results[best].value) best = i;

    OperatorNormEstimate est;
    est.method = NormMethod::boyd_multistart;
    est.starts = static_cast<int>(starts.size());
    est.seed = opts.seed;
    est.witness = results[best].witness;
    est.upper = norm_ratio(a, est.witness, r_in, r_out);
    est.lower = std::min(est.upper, c_out * c_in * smin);
    est.certified = true;
    return est;
}

IsometryResult is_isometry(const Mat& a, Exponent r, double tol) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("is_isometry: matrix must be square");
    const Eigen::Index d = a.rows();
    IsometryResult res;

    if (r.is_two()) {
        Mat g = a.transpose() * a - Mat::Identity(d, d);
        res.defect = g.cwiseAbs().maxCoeff();
        if (res.defect <= tol) {
            res.isometry = true;
            return res;
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(Mat(a.transpose() * a));
        const Vec ev = es.eigenvalues();
        Eigen::Index k = 0;
        for (Eigen::Index i = 1; i < d; ++i)
            if (std::abs(ev[i] - 1.0) > std::abs(ev[k] - 1.0)) k = i;
        res.witness = es.eigenvectors().col(k);
        res.defect = std::abs(norm_ratio(a, res.witness, r, r) - 1.0);
        return res;
    }

    // r != 2: isometries of l^r_d are exactly the signed permutations
    bool structural = true;
    for (Eigen::Index j = 0; j < d && structural; ++j) {
        int big = 0;
        for (Eigen::Index i = 0; i < d; ++i) {
            const double v = std::abs(a(i, j));
            if (v > tol) {
                if (std::abs(v - 1.0) <= tol)
                    ++big;
                else
                    structural = false;
            }
        }
        if (big != 1) structural = false;
    }
    for (Eigen::Index i = 0; i < d && structural; ++i) {
        int big = 0;
        for (Eigen::Index j = 0; j < d; ++j)
            if (std::abs(a(i, j)) > tol) ++big;
        if (big != 1) structural = false;
    }
    if (structural) {
        res.isometry = true;
        res.defect = 0.0;
        return res;
    }

    // violating witness: basis vectors, pair sums, then a few random probes
    std::vector<Vec> cands;
    for (Eigen::Index j = 0; j < d; ++j) {
        Vec e = Vec::Zero(d);
        e[j] = 1.0;
        cands.push_back(e);
    }
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) {
            Vec u = Vec::Zero(d);
            u[i] = 1.0;
            u[j] = 1.0;
            cands.push_back(u);
            u[j] = -1.0;
            cands.push_back(u);
        }
    Rng rng(kDefaultSeed);
    for (int t = 0; t < 32; ++t) {
        Vec v(d);
        for (Eigen::Index i = 0; i < d; ++i) v[i] = rng.normal();
        cands.push_back(v);
    }
    double worst = -1.0;
    for (const Vec& x : cands) {
        if (p_norm(x, r) == 0.0) continue;
        const double dev = std::abs(norm_ratio(a, x, r, r) - 1.0);
        if (dev > worst) {
            worst = dev;
            res.witness = x;
        }
    }
    res.defect = worst;
    res.isometry = false;
    return res;
}

SignedPermutations::SignedPermutations(int d) : d_(d) {
    if (d < 1) throw std::invalid_argument("signed_permutations: d must be >= 1");
    if (d > 8) throw std::invalid_argument("signed_permutations: d > 8 exceeds enumeration budget");
    reset();
}

void SignedPermutations::reset() {
    perm_.resize(d_);
    std::iota(perm_.begin(), perm_.end(), 0);
    mask_ = 0;
    done_ = false;
}

std::optional<Mat> SignedPermutations::next() {
    if (done_) return std::nullopt;
    Mat q = Mat::Zero(d_, d_);
    for (int j = 0; j < d_; ++j)
        q(perm_[j], j) = (mask_ >> j) & 1u ? -1.0 : 1.0;
    if (++mask_ == (1u << d_)) {
        mask_ = 0;
        if (!std::next_permutation(perm_.begin(), perm_.end())) done_ = true;
    }
    return q;
}

std::uint64_t SignedPermutations::count(int d) {
    std::uint64_t c = 1;
    for (int i = 2; i <= d; ++i) c *= static_cast<std::uint64_t>(i);
    return c << d;
}

std::vector<Mat> all_signed_permutations(int d) {
    SignedPermutations gen(d);
    std::vector<Mat> out;
    out.reserve(SignedPermutations::count(d));
    while (auto q = gen.next()) out.push_back(std::move(*q));
    return out;
}

}  // namespace pasf
