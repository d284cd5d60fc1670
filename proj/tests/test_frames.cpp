#include <doctest.h>

#include <cmath>

#include <pasf/frames.hpp>
#include <pasf/op_norm.hpp>
#include <pasf/rng.hpp>

using namespace pasf;

namespace {

bool same_matrix(const Mat& a, const Mat& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a - b).cwiseAbs().maxCoeff() == 0.0;
}

Pasf two_copies_e1() {
    Mat f(2, 2), t(2, 2);
    f << 1, 0, 1, 0;
    t << 1, 1, 0, 0;
    return make_explicit(f, t, Exponent(2), Exponent(2), "copies-e1");
}

}  // namespace

TEST_CASE("make_pasf factories") {
    const Pasf s3 = make_standard(3, Exponent(2), Exponent(2));
    CHECK(same_matrix(frame_operator(s3), Mat::Identity(3, 3)));

    const Pasf dup = make_duplicated_standard(2, 2, Exponent(2), Exponent(2));
    CHECK(dup.size() == 4);
    CHECK(same_matrix(frame_operator(dup), Mat::Identity(2, 2)));
    CHECK(classify(dup).tag == FrameClassTag::parseval);

    const Pasf r1 = make_random(3, 5, Exponent(2), Exponent(2), 7);
    const Pasf r2 = make_random(3, 5, Exponent(2), Exponent(2), 7);
    CHECK(same_matrix(r1.functionals, r2.functionals));
    CHECK(same_matrix(r1.vectors, r2.vectors));
    CHECK(gain_lower_bound(frame_operator(r1), Exponent(2), Exponent(2)).lower > 0.0);

    Mat bad_f(2, 3), bad_t(2, 2);
    bad_f.setZero();
    bad_t.setZero();
    CHECK_THROWS_AS(make_explicit(bad_f, bad_t, Exponent(2), Exponent(2)),
                    std::invalid_argument);
}

TEST_CASE("frame_operator values and rank-one sum oracle") {
    CHECK(same_matrix(frame_operator(make_standard(2, Exponent(2), Exponent(2))),
                      Mat::Identity(2, 2)));

    Mat f(3, 2), t(2, 3);
    f << 1, 0, 1, 0, 0, 1;
    t << 1, 1, 0, 0, 0, 1;
    Mat expect(2, 2);
    expect << 2, 0, 0, 1;
    CHECK(same_matrix(frame_operator(make_explicit(f, t, Exponent(2), Exponent(2))), expect));

    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + static_cast<int>(rng.below(4));
        const int n = d + static_cast<int>(rng.below(4));
        const Pasf P = make_random(d, n, Exponent(2), Exponent(2), 100 + trial);
        Mat sum = Mat::Zero(d, d);
        for (int j = 0; j < n; ++j) sum += P.vectors.col(j) * P.functionals.row(j);
        CHECK((frame_operator(P) - sum).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("frame_bounds closed values and spectral oracle") {
    const FrameBounds ident = frame_bounds(make_standard(4, Exponent(2), Exponent(2)));
    CHECK(ident.a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ident.b == doctest::Approx(1.0).epsilon(1e-12));

    Mat diag13 = Mat::Zero(2, 2);
    diag13(0, 0) = 1;
    diag13(1, 1) = 3;
    for (double r : {1.0, 2.0, 3.0}) {
        const Pasf P = make_explicit(Mat::Identity(2, 2), diag13, Exponent(2), Exponent(r));
        const FrameBounds fb = frame_bounds(P);
        CHECK(fb.a == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fb.b == doctest::Approx(3.0).epsilon(1e-12));
    }

    for (int t = 0; t < 10; ++t) {
        const Pasf P = make_random(3, 5, Exponent(2), Exponent(2), 40 + t);
        const Mat s = frame_operator(P);
        const FrameBounds fb = frame_bounds(P);
        const double inv2 = op_norm(Mat(s.inverse()), Exponent(2), Exponent(2)).lower;
        CHECK(fb.a * inv2 == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("classify hierarchy") {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        const Pasf s = make_standard(3, Exponent(p), Exponent(p));
        CHECK(classify(s).tag == FrameClassTag::p_orthonormal_basis);
    }
    CHECK(classify(two_copies_e1()).tag == FrameClassTag::bessel_only);

    // square invertible but not tight: the Riesz tag wins
    Mat t(2, 2);
    t << 1, 1, 0, 1;
    const Pasf riesz = make_explicit(Mat::Identity(2, 2), t, Exponent(2), Exponent(2));
    CHECK(classify(riesz).tag == FrameClassTag::riesz_basis);

    // tall tight frame stays tight (no Riesz identity on the coefficient space)
    const Pasf dup3 = make_duplicated_standard(3, 2, Exponent(2), Exponent(2));
    Pasf scaled = dup3;
    scaled.functionals *= 2.0;  // S = 2I
    const FrameClass fc = classify(scaled);
    CHECK(fc.tag == FrameClassTag::tight);
    CHECK(fc.tight_lambda == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("is_p_orthonormal modes and diagnostics") {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        const Pasf s = make_standard(3, Exponent(p), Exponent(p));
        CHECK(is_p_orthonormal(s, full_index_set(s), OrthoMode::basis).ok);
        CHECK(is_p_orthonormal(s, {0}, OrthoMode::sequence).ok);
        CHECK_THROWS_AS(is_p_orthonormal(s, {0}, OrthoMode::basis), std::invalid_argument);
    }

    Pasf scaled = make_standard(2, Exponent(2), Exponent(2));
    scaled.vectors(0, 0) = 2.0;  // tau_1 scaled by 2
    const POrthonormalResult res =
        is_p_orthonormal(scaled, full_index_set(scaled), OrthoMode::basis);
    CHECK_FALSE(res.ok);
    bool cited = false;
    for (const auto& d : res.diagnostics)
        if (d.check == "unit-vector-norm" && !d.passed && d.value == doctest::Approx(2.0))
            cited = true;
    CHECK(cited);

    // disjoint-support columns with unit p-norm: a genuine non-permutation
    // p-orthonormal sequence for p != 2
    const double p = 3.0;
    const double half = std::pow(0.5, 1.0 / p);
    Mat t(3, 2), f(2, 3);
    t << half, 0, half, 0, 0, 1;
    const double dualw = std::pow(0.5, 1.0 / dual_exponent(Exponent(p)).value());
    f << dualw, dualw, 0, 0, 0, 1;
    const Pasf seq = make_explicit(f, t, Exponent(p), Exponent(p), "split-support");
    CHECK(is_p_orthonormal(seq, {0, 1}, OrthoMode::sequence).ok);
}

TEST_CASE("is_riesz_basis characterization and recovered intertwiners") {
    const Pasf sq = make_random(4, 4, Exponent(2), Exponent(2), 11);
    const RieszBasisResult rb = is_riesz_basis(sq);
    CHECK(rb.is_riesz);
    CHECK(rb.defect <= 1e-12);
    REQUIRE(rb.has_intertwiners);
    CHECK(same_matrix(rb.u, sq.functionals));
    CHECK(same_matrix(rb.v, sq.vectors));

    const Pasf dup = make_duplicated_standard(2, 2, Exponent(2), Exponent(2));
    const RieszBasisResult rd = is_riesz_basis(dup);
    CHECK_FALSE(rd.is_riesz);
    CHECK(rd.defect >= 1.0 - 1e-9);
    const Mat g = dup.functionals * frame_operator(dup).inverse() * dup.vectors;
    Eigen::JacobiSVD<Mat> svd(g);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10) ++rank;
    CHECK(rank == 2);

    CHECK_FALSE(is_riesz_basis(two_copies_e1()).is_riesz);
    CHECK(std::isinf(is_riesz_basis(two_copies_e1()).defect));

    for (double p : {1.0, 1.5, 2.0, 3.0})
        for (int t = 0; t < 10; ++t) {
            const int d = 2 + t % 5;
            const Pasf P = make_random(d, d, Exponent(p), Exponent(2), 500 + t);
            CHECK(is_riesz_basis(P).defect <= 1e-10);
        }
}

TEST_CASE("riesz_sequence_bounds") {
    for (double p : {1.0, 2.0, 3.0}) {
        const Pasf s = make_standard(4, Exponent(p), Exponent(p));
        const RieszSequenceResult rs = riesz_sequence_bounds(s, {0, 1});
        CHECK(rs.bounds.lower == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rs.bounds.upper == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rs.is_riesz);
        CHECK(rs.restricted_pair_riesz);
    }

    const RieszSequenceResult repeated = riesz_sequence_bounds(two_copies_e1(), {0, 1});
    CHECK(repeated.bounds.lower == 0.0);
    CHECK_FALSE(repeated.is_riesz);
    const Vec w = repeated.bounds.lower_cert.witness;
    CHECK(std::abs(w[0] + w[1]) <= 1e-9);  // proportional to (1, -1)

    // delta perturbation against the spectral oracle
    Mat f(2, 2), t(2, 2);
    t << 1, 1, 0, 0.1;
    f = t.inverse().eval();
    const Pasf pert = make_explicit(f.transpose(), t, Exponent(2), Exponent(2));
    const RieszSequenceResult rs = riesz_sequence_bounds(pert, {0, 1});
    Eigen::JacobiSVD<Mat> svd(t);
    CHECK(rs.bounds.upper == doctest::Approx(svd.singularValues()(0)).epsilon(1e-9));
    CHECK(rs.bounds.lower == doctest::Approx(svd.singularValues()(1)).epsilon(1e-9));

    CHECK_THROWS_AS(riesz_sequence_bounds(pert, {}), std::invalid_argument);
    CHECK_THROWS_AS(riesz_sequence_bounds(pert, {5}), std::out_of_range);
}

TEST_CASE("is_eps_riesz") {
    const Pasf s = make_standard(3, Exponent(2), Exponent(2));
    for (double eps : {0.05, 0.5, 0.99})
        CHECK(is_eps_riesz(s, full_index_set(s), eps).ok);

    const int d = 4;
    Mat t = Mat::Identity(d, d);
    for (int j = 0; j < d; ++j) t((j + 1) % d, j) = 0.01;
    for (int j = 0; j < d; ++j) t.col(j) /= t.col(j).norm();
    const Pasf pert = make_explicit(t.transpose(), t, Exponent(2), Exponent(2));
    const EpsRieszResult ok = is_eps_riesz(pert, full_index_set(pert), 0.1);
    CHECK(ok.unit_norm_ok);
    CHECK(ok.ok);

    CHECK_FALSE(is_eps_riesz(two_copies_e1(), {0, 1}, 0.9).ok);
    CHECK_THROWS_AS(is_eps_riesz(s, full_index_set(s), 1.5), std::invalid_argument);
}

TEST_CASE("recover_intertwiner") {
    for (double p : {1.5, 3.0}) {
        const Pasf base = make_standard(3, Exponent(p), Exponent(p));
        SignedPermutations gen(3);
        int checked = 0;
        while (auto q = gen.next()) {
            if (++checked > 10) break;
            const Pasf image = make_explicit(Mat(base.functionals * q->transpose()),
                                             Mat(*q * base.vectors), base.p, base.r);
            const IntertwinerResult res = recover_intertwiner(base, image);
            CHECK((res.v - *q).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK(res.isometry);
        }
        const IntertwinerResult self = recover_intertwiner(base, base);
        CHECK(same_matrix(self.v, Mat::Identity(3, 3)));
    }

    Pasf bad = make_standard(2, Exponent(2), Exponent(2));
    bad.vectors(0, 0) = 2.0;
    CHECK_THROWS_AS(recover_intertwiner(make_standard(2, Exponent(2), Exponent(2)), bad),
                    std::invalid_argument);
}

TEST_CASE("signed-permutation closure of the basis predicate") {
    for (double p : {1.0, 3.0}) {
        const Pasf base = make_standard(2, Exponent(p), Exponent(p));
        SignedPermutations gen(2);
        while (auto q = gen.next()) {
            const Pasf image = make_explicit(Mat(base.functionals * q->transpose()),
                                             Mat(*q * base.vectors), base.p, base.r);
            CHECK(is_p_orthonormal(image, full_index_set(image), OrthoMode::basis).ok);
        }
    }
}

TEST_CASE("observation: subset sums of a p-orthonormal basis") {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        for (int d = 1; d <= 5; ++d) {
            const Pasf s = make_standard(d, Exponent(p), Exponent(p));
            for (unsigned mask = 1; mask < (1u << d); ++mask) {
                Vec sum = Vec::Zero(d);
                int count = 0;
                for (int j = 0; j < d; ++j)
                    if (mask & (1u << j)) {
                        sum += s.vectors.col(j);
                        ++count;
                    }
                CHECK(std::abs(p_norm(sum, s.r) - std::pow(count, 1.0 / p)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("singleton riesz bounds are exactly the element norm") {
    Rng rng(97);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        Vec tau(3);
        for (int i = 0; i < 3; ++i) tau[i] = rng.uniform_pm1();
        tau /= p_norm(tau, Exponent(p));
        Mat t(3, 2), f(2, 3);
        t.col(0) = tau;
        t.col(1) = Vec::Unit(3, 2);
        f.setZero();
        f(0, 0) = 1;
        f(1, 2) = 1;
        const Pasf P = make_explicit(f, t, Exponent(p), Exponent(p));
        const RieszSequenceResult rs = riesz_sequence_bounds(P, {0});
        CHECK(std::abs(rs.bounds.lower - 1.0) <= 1e-12);
        CHECK(std::abs(rs.bounds.upper - 1.0) <= 1e-12);
    }
}
