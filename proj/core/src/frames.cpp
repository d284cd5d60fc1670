#include "pasf/frames.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pasf/rng.hpp"

namespace pasf {

namespace {

void validate(const Pasf& P) {
    if (P.functionals.rows() < 1 || P.vectors.cols() < 1)
        throw std::invalid_argument("pasf: need at least one frame element");
    if (P.functionals.cols() != P.vectors.rows() || P.functionals.rows() != P.vectors.cols())
        throw std::invalid_argument("pasf: functional/vector dimension mismatch");
    if (!P.functionals.allFinite() || !P.vectors.allFinite())
        throw std::invalid_argument("pasf: non-finite entries");
}

double cond_2(const Mat& s) {
    Eigen::JacobiSVD<Mat> svd(s);
    const Vec sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

Mat submatrix_rows(const Mat& f, const std::vector<int>& idx) {
    Mat out(static_cast<Eigen::Index>(idx.size()), f.cols());
    for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = f.row(idx[k]);
    return out;
}

Mat submatrix_cols(const Mat& t, const std::vector<int>& idx) {
    Mat out(t.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = t.col(idx[k]);
    return out;
}

void check_index_set(const Pasf& P, const std::vector<int>& idx, const char* who) {
    if (idx.empty()) throw std::invalid_argument(std::string(who) + ": empty index set");
    for (int j : idx)
        if (j < 0 || j >= P.size())
            throw std::out_of_range(std::string(who) + ": index out of range");
}

}  // namespace

std::string to_string(FrameClassTag t) {
    switch (t) {
        case FrameClassTag::rejected: return "not-bessel-model";
        case FrameClassTag::bessel_only: return "bessel-only";
        case FrameClassTag::asf: return "asf";
        case FrameClassTag::tight: return "tight";
        case FrameClassTag::parseval: return "parseval";
        case FrameClassTag::riesz_basis: return "riesz-basis";
        case FrameClassTag::p_orthonormal_basis: return "p-orthonormal-basis";
    }
    return "?";
}

std::vector<int> full_index_set(const Pasf& P) {
    std::vector<int> idx(static_cast<std::size_t>(P.size()));
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

Pasf make_explicit(Mat functionals, Mat vectors, Exponent p, Exponent r,
                   std::string label) {
    Pasf P{std::move(functionals), std::move(vectors), p, r, std::move(label)};
    validate(P);
    return P;
}

Pasf make_standard(int d, Exponent p, Exponent r) {
    if (d < 1) throw std::invalid_argument("make_standard: d must be >= 1");
    return {Mat::Identity(d, d), Mat::Identity(d, d), p, r, "standard-d" + std::to_string(d)};
}

Pasf make_duplicated_standard(int d, int k, Exponent p, Exponent r) {
    if (d < 1 || k < 1) throw std::invalid_argument("make_duplicated_standard: d, k must be >= 1");
    const int n = d * k;
    Mat f = Mat::Zero(n, d);
    Mat t = Mat::Zero(d, n);
    for (int j = 0; j < d; ++j)
        for (int c = 0; c < k; ++c) {
            const int col = j * k + c;
            t(j, col) = 1.0;
            f(col, j) = 1.0 / static_cast<double>(k);
        }
    return {std::move(f), std::move(t), p, r,
            "dup-standard-d" + std::to_string(d) + "-k" + std::to_string(k)};
}

Pasf make_random(int d, int n, Exponent p, Exponent r, std::uint64_t seed) {
    if (d < 1 || n < 1) throw std::invalid_argument("make_random: d, n must be >= 1");
    Rng rng(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        Mat f(n, d), t(d, n);
        for (Eigen::Index i = 0; i < f.rows(); ++i)
            for (Eigen::Index j = 0; j < f.cols(); ++j) f(i, j) = rng.uniform_pm1();
        for (Eigen::Index i = 0; i < t.rows(); ++i)
            for (Eigen::Index j = 0; j < t.cols(); ++j) t(i, j) = rng.uniform_pm1();
        if (cond_2(t * f) <= 1e6)
            return {std::move(f), std::move(t), p, r,
                    "random-d" + std::to_string(d) + "-n" + std::to_string(n) + "-s" +
                        std::to_string(seed)};
    }
    throw std::runtime_error("make_random: condition cap 1e6 exceeded after 100 redraws");
}

Mat frame_operator(const Pasf& P) {
    validate(P);
    return P.vectors * P.functionals;
}

FrameBounds frame_bounds(const Pasf& P) {
    const Mat s = frame_operator(P);
    FrameBounds fb;
    fb.b_cert = op_norm(s, P.r, P.r);
    fb.a_cert = gain_lower_bound(s, P.r, P.r);
    fb.b = fb.b_cert.upper;
    fb.a = fb.a_cert.lower;
    return fb;
}

FrameClass classify(const Pasf& P, double tol) {
    const Mat s = frame_operator(P);
    const Eigen::Index d = P.dim();
    FrameClass fc;

    const FrameBounds fb = frame_bounds(P);
    fc.evidence.push_back({"lower-frame-bound", fb.a > tol, fb.a, "certified a"});
    if (fb.a <= tol) {
        fc.tag = FrameClassTag::bessel_only;
        return fc;
    }
    fc.tag = FrameClassTag::asf;

    const double lambda = s.trace() / static_cast<double>(d);
    bool tight = false;
    if (std::abs(lambda) > tol) {
        const double defect = op_norm(Mat(s - lambda * Mat::Identity(d, d)), P.r, P.r).upper;
        tight = defect <= tol * std::abs(lambda);
        fc.evidence.push_back({"tight", tight, defect, "||S - lambda I|| with lambda = trace/d"});
        if (tight) {
            fc.tight_lambda = lambda;
            fc.tag = FrameClassTag::tight;
            if (std::abs(lambda - 1.0) <= tol) {
                fc.tag = FrameClassTag::parseval;
                fc.evidence.push_back({"parseval", true, std::abs(lambda - 1.0), "lambda = 1"});
            }
        }
    }

    const RieszBasisResult rb = is_riesz_basis(P, tol);
    fc.evidence.push_back({"riesz-basis", rb.is_riesz, rb.defect, "||F S^-1 T - I||_{p->p}"});
    if (rb.is_riesz) fc.tag = FrameClassTag::riesz_basis;

    if (P.size() == d) {
        const POrthonormalResult po = is_p_orthonormal(P, full_index_set(P), OrthoMode::basis, tol);
        fc.evidence.push_back({"p-orthonormal-basis", po.ok, 0.0, ""});
        if (po.ok) fc.tag = FrameClassTag::p_orthonormal_basis;
    }
    return fc;
}

POrthonormalResult is_p_orthonormal(const Pasf& P, const std::vector<int>& index_set,
                                    OrthoMode mode, double tol) {
    check_index_set(P, index_set, "is_p_orthonormal");
    if (mode == OrthoMode::basis) {
        if (static_cast<Eigen::Index>(index_set.size()) != P.size() || P.size() != P.dim())
            throw std::invalid_argument("is_p_orthonormal: basis mode needs the full set and n == d");
    }

    POrthonormalResult res;
    res.ok = true;
    auto fail = [&](std::string check, double value, std::string detail) {
        res.ok = false;
        res.diagnostics.push_back({std::move(check), false, value, std::move(detail)});
    };
    auto pass = [&](std::string check, double value, std::string detail = {}) {
        res.diagnostics.push_back({std::move(check), true, value, std::move(detail)});
    };

    const Exponent dual_r = dual_exponent(P.r);
    const Mat fi = submatrix_rows(P.functionals, index_set);
    const Mat ti = submatrix_cols(P.vectors, index_set);
    const Eigen::Index k = static_cast<Eigen::Index>(index_set.size());

    // necessary unit-norm consequences, reported first for readable diagnostics
    for (Eigen::Index j = 0; j < k; ++j) {
        const double tn = col_p_norm(ti, j, P.r);
        if (std::abs(tn - 1.0) > tol)
            fail("unit-vector-norm", tn,
                 "||tau_" + std::to_string(index_set[j] + 1) + "|| = " + std::to_string(tn) + " != 1");
        const double fn = row_p_norm(fi, j, dual_r);
        if (std::abs(fn - 1.0) > tol)
            fail("unit-functional-norm", fn,
                 "||f_" + std::to_string(index_set[j] + 1) + "|| = " + std::to_string(fn) + " != 1");
    }

    const Mat gram = fi * ti;
    const double biorth = (gram - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
    if (biorth > tol)
        fail("biorthogonality", biorth, "f_n(tau_m) != delta_nm");
    else
        pass("biorthogonality", biorth);

    // analysis contraction ||theta_f||_{r->p} <= 1, with equality in basis mode
    bool analysis_done = false;
    if (P.r == P.p) {
        // disjoint functional supports certify the contraction exactly:
        // sum |f_n(x)|^p splits over the support blocks by Holder
        bool disjoint_rows = true;
        for (Eigen::Index col = 0; col < fi.cols() && disjoint_rows; ++col) {
            int hits = 0;
            for (Eigen::Index row = 0; row < k; ++row)
                if (std::abs(fi(row, col)) > tol) ++hits;
            if (hits > 1) disjoint_rows = false;
        }
        if (disjoint_rows) {
            double worst = 0.0;
            for (Eigen::Index row = 0; row < k; ++row)
                worst = std::max(worst, row_p_norm(fi, row, dual_exponent(P.p)));
            if (worst <= 1.0 + tol) {
                pass("analysis-contraction", worst, "disjoint functional supports");
                analysis_done = true;
            }
        }
    }
    if (!analysis_done) {
        const OperatorNormEstimate ana = op_norm(fi, P.r, P.p);
        if (ana.lower > 1.0 + tol)
            fail("analysis-contraction", ana.lower, "achieved ratio exceeds 1");
        else
            pass("analysis-contraction", ana.lower,
                 ana.upper <= 1.0 + tol ? "" : "upper bracket inconclusive, achieved ratio shown");
        if (mode == OrthoMode::basis && ana.lower < 1.0 - tol)
            fail("analysis-equality", ana.lower, "basis mode needs ||theta_f|| = 1");
    }

    // synthesis isometry onto the range
    const bool structural = P.r == P.p && !P.p.is_two();
    bool disjoint = structural;
    if (structural) {
        for (Eigen::Index i = 0; i < ti.rows() && disjoint; ++i) {
            int hits = 0;
            for (Eigen::Index j = 0; j < k; ++j)
                if (std::abs(ti(i, j)) > tol) ++hits;
            if (hits > 1) disjoint = false;
        }
    }
    if (structural && disjoint) {
        bool cols_ok = true;
        for (Eigen::Index j = 0; j < k; ++j)
            if (std::abs(col_p_norm(ti, j, P.p) - 1.0) > tol) cols_ok = false;
        if (cols_ok)
            pass("synthesis-isometry", 0.0, "disjoint supports, unit l^p columns");
        else
            fail("synthesis-isometry", 0.0, "disjoint supports but column p-norms != 1");
    } else if (P.r == P.p && P.p.is_two()) {
        const double gdef = (ti.transpose() * ti - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
        if (gdef <= tol)
            pass("synthesis-isometry", gdef, "T_I^T T_I = I");
        else
            fail("synthesis-isometry", gdef, "T_I^T T_I != I");
    } else {
        const OperatorNormEstimate up = op_norm(ti, P.p, P.r);
        const OperatorNormEstimate lo = gain_lower_bound(ti, P.p, P.r);
        const bool iso = std::abs(up.lower - 1.0) <= tol && std::abs(lo.upper - 1.0) <= tol;
        if (iso)
            pass("synthesis-isometry", std::max(std::abs(up.lower - 1.0), std::abs(lo.upper - 1.0)),
                 "op/gain certificates at 1");
        else
            fail("synthesis-isometry", up.lower, "synthesis op/gain away from 1");
    }

    if (mode == OrthoMode::basis) {
        Eigen::FullPivLU<Mat> lu(ti);
        lu.setThreshold(1e-12);
        if (!lu.isInvertible()) fail("spanning", 0.0, "synthesis matrix not invertible");
    }
    return res;
}

RieszBasisResult is_riesz_basis(const Pasf& P, double tol) {
    const Mat s = frame_operator(P);
    const Eigen::Index n = P.size();
    RieszBasisResult res;

    const OperatorNormEstimate gain = gain_lower_bound(s, P.r, P.r);
    if (gain.lower <= tol) {
        res.is_riesz = false;
        res.defect = std::numeric_limits<double>::infinity();
        return res;
    }
    const Mat g = P.functionals * s.partialPivLu().solve(P.vectors);
    res.defect = op_norm(Mat(g - Mat::Identity(n, n)), P.p, P.p).upper;
    res.is_riesz = res.defect <= tol;

    if (P.size() == P.dim()) {
        // the characterization's recovered operators against the standard
        // reference pair (g, omega): U = theta_omega theta_f, V = theta_tau theta_g
        const Mat synth_std = Mat::Identity(P.dim(), n);
        const Mat analysis_std = Mat::Identity(n, P.dim());
        res.u = synth_std * P.functionals;
        res.v = P.vectors * analysis_std;
        res.has_intertwiners = true;
    }
    return res;
}

RieszSequenceResult riesz_sequence_bounds(const Pasf& P, const std::vector<int>& index_set,
                                          double tol) {
    check_index_set(P, index_set, "riesz_sequence_bounds");
    std::vector<int> idx = index_set;
    std::sort(idx.begin(), idx.end());

    const Mat ti = submatrix_cols(P.vectors, idx);
    RieszSequenceResult res;
    res.bounds.upper_cert = op_norm(ti, P.p, P.r);
    res.bounds.lower_cert = gain_lower_bound(ti, P.p, P.r);
    res.bounds.upper = res.bounds.upper_cert.upper;
    res.bounds.lower = res.bounds.lower_cert.lower;
    res.bounds.index_set = idx;
    res.is_riesz = res.bounds.lower > tol;

    // restricted pair on W = span{tau_j : j in I}, coordinates in an
    // l^2-orthonormal basis of W
    Eigen::JacobiSVD<Mat> svd(ti, Eigen::ComputeThinU);
    const Vec sv = svd.singularValues();
    Eigen::Index w = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-12 * std::max(1.0, sv(0))) ++w;
    if (w == static_cast<Eigen::Index>(idx.size())) {
        const Mat basis = svd.matrixU().leftCols(w);
        const Mat fi = submatrix_rows(P.functionals, idx);
        Pasf restricted{Mat(fi * basis), Mat(basis.transpose() * ti), P.p, P.r,
                        P.label + "|restricted"};
        const RieszBasisResult rb = is_riesz_basis(restricted, tol);
        res.restricted_pair_riesz = rb.is_riesz;
        res.restricted_defect = rb.defect;
    } else {
        res.restricted_pair_riesz = false;
        res.restricted_defect = std::numeric_limits<double>::infinity();
    }
    return res;
}

EpsRieszResult is_eps_riesz(const Pasf& P, const std::vector<int>& index_set,
                            double eps, double tol) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("is_eps_riesz: eps must lie in (0,1)");
    check_index_set(P, index_set, "is_eps_riesz");

    EpsRieszResult res;
    const Exponent dual_r = dual_exponent(P.r);
    res.unit_norm_ok = true;
    for (int j : index_set) {
        const double tn = col_p_norm(P.vectors, j, P.r);
        const double fn = row_p_norm(P.functionals, j, dual_r);
        const double pairing = std::abs(P.functionals.row(j).dot(P.vectors.col(j)));
        if (std::abs(tn - 1.0) > tol || std::abs(fn - 1.0) > tol || std::abs(pairing - 1.0) > tol)
            res.unit_norm_ok = false;
    }
    const RieszSequenceResult rs = riesz_sequence_bounds(P, index_set, tol);
    res.lower = rs.bounds.lower;
    res.upper = rs.bounds.upper;
    res.ok = res.unit_norm_ok && res.lower >= 1.0 - eps - tol && res.upper <= 1.0 + eps + tol;
    return res;
}

IntertwinerResult recover_intertwiner(const Pasf& B1, const Pasf& B2, double tol) {
    if (B1.dim() != B2.dim())
        throw std::invalid_argument("recover_intertwiner: dimension mismatch");
    const POrthonormalResult a = is_p_orthonormal(B1, full_index_set(B1), OrthoMode::basis, tol);
    const POrthonormalResult b = is_p_orthonormal(B2, full_index_set(B2), OrthoMode::basis, tol);
    if (!a.ok || !b.ok)
        throw std::invalid_argument("recover_intertwiner: input is not a p-orthonormal basis");

    IntertwinerResult res;
    res.v = B2.vectors * B1.vectors.inverse();
    const double dev_t = (res.v * B1.vectors - B2.vectors).cwiseAbs().maxCoeff();
    const Mat f_mapped = B1.functionals * res.v.inverse();
    const double dev_f = (f_mapped - B2.functionals).cwiseAbs().maxCoeff();
    res.deviation = std::max(dev_t, dev_f);
    if (res.deviation > tol)
        throw std::runtime_error("recover_intertwiner: intertwining identities fail");
    res.isometry = is_isometry(res.v, B1.r, tol).isometry;
    return res;
}

}  // namespace pasf
