#include <doctest.h>

#include <cmath>

#include <pasf/reconstruct.hpp>
#include <pasf/rng.hpp>

using namespace pasf;

namespace {

// random pair with symmetric positive definite frame operator: F = T^T / s
Pasf random_spd_frame(int d, int n, std::uint64_t seed) {
    Rng rng(seed);
    for (;;) {
        Mat t(d, n);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < n; ++j) t(i, j) = rng.uniform_pm1();
        const Mat s = t * t.transpose();
        Eigen::JacobiSVD<Mat> svd(s);
        if (svd.singularValues()(d - 1) > 1e-4)
            return make_explicit(Mat(t.transpose()), t, Exponent(2), Exponent(2), "spd");
    }
}

}  // namespace

TEST_CASE("algorithm condition closed cases") {
    const Pasf parseval = make_standard(3, Exponent(2), Exponent(2));
    const AlgorithmCondition c0 = check_algorithm_condition(parseval);
    CHECK(c0.condition_value <= 1e-12);
    CHECK(c0.ratio_bound == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c0.holds);

    Mat diag13 = Mat::Zero(2, 2);
    diag13(0, 0) = 1;
    diag13(1, 1) = 3;
    const Pasf pd = make_explicit(Mat::Identity(2, 2), diag13, Exponent(2), Exponent(2));
    const AlgorithmCondition c1 = check_algorithm_condition(pd);
    CHECK(c1.condition_value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(c1.ratio_bound == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(c1.holds);

    Mat shear(2, 2);
    shear << 1, 10, 0, 1;
    const Pasf ps = make_explicit(Mat::Identity(2, 2), shear, Exponent(2), Exponent(2));
    const AlgorithmCondition c2 = check_algorithm_condition(ps);
    CHECK(c2.condition_value > c2.ratio_bound);
    CHECK_FALSE(c2.holds);

    CHECK_THROWS_AS(check_algorithm_condition(make_explicit(
                        Mat::Zero(2, 2).eval(), Mat::Zero(2, 2).eval(), Exponent(2), Exponent(2))),
                    std::invalid_argument);
}

TEST_CASE("one-step exactness on Parseval frames") {
    Rng rng(3);
    for (int d = 1; d <= 8; ++d)
        for (double pr : {1.0, 2.0, 3.0}) {
            const Pasf P = make_standard(d, Exponent(pr), Exponent(pr));
            Vec x(d);
            for (int i = 0; i < d; ++i) x[i] = rng.uniform_pm1();
            const Vec coeffs = P.functionals * x;
            const ReconstructionTrace tr = duffin_schaeffer(P, coeffs, 5, 1e-13, x);
            CHECK(tr.ratio_bound <= 1e-12);
            REQUIRE(tr.errors.size() >= 2);
            CHECK(tr.errors[1] <= 1e-12);
            CHECK(tr.converged);
        }
}

TEST_CASE("geometric error decay on diag(1,3)") {
    Mat diag13 = Mat::Zero(2, 2);
    diag13(0, 0) = 1;
    diag13(1, 1) = 3;
    const Pasf P = make_explicit(Mat::Identity(2, 2), diag13, Exponent(2), Exponent(2));
    Vec x(2);
    x << 1, 1;
    const ReconstructionTrace tr = duffin_schaeffer(P, Vec(P.functionals * x), 60, 1e-14, x);
    for (std::size_t k = 1; k < tr.errors.size(); ++k) {
        if (tr.errors[k - 1] <= 1e-12) break;  // machine floor
        CHECK(tr.errors[k] <= 0.5 * tr.errors[k - 1] + 1e-15);
    }
}

TEST_CASE("noisy measurements plateau at the noise floor") {
    const Pasf P = random_spd_frame(3, 5, 17);
    Rng rng(18);
    Vec x(3);
    for (int i = 0; i < 3; ++i) x[i] = rng.uniform_pm1();
    Vec noise(5);
    for (int i = 0; i < 5; ++i) noise[i] = rng.uniform_pm1();
    noise *= 1e-3 / noise.norm();
    const Vec coeffs = P.functionals * x + noise;
    const ReconstructionTrace tr = duffin_schaeffer(P, coeffs, 300, 1e-9, x);
    CHECK_FALSE(tr.converged);
    const double plateau = tr.errors.back();
    CHECK(plateau > 1e-6);
    CHECK(plateau < 1e-1);
    // the last steps no longer improve
    CHECK(tr.errors[tr.errors.size() - 2] <= plateau * 2.0);
}

TEST_CASE("per-step ratio bounded by (b-a)/(b+a) on random frames") {
    for (int t = 0; t < 20; ++t) {
        const Pasf P = random_spd_frame(3, 6, 900 + t);
        const AlgorithmCondition cond = check_algorithm_condition(P);
        REQUIRE(cond.holds);
        Rng rng(1000 + t);
        Vec x(3);
        for (int i = 0; i < 3; ++i) x[i] = rng.uniform_pm1();
        const ReconstructionTrace tr = duffin_schaeffer(P, Vec(P.functionals * x), 80, 1e-14, x);
        for (std::size_t k = 1; k < tr.errors.size(); ++k) {
            if (tr.errors[k - 1] <= 1e-12 * p_norm(x, P.r)) break;
            CHECK(tr.errors[k] <= (cond.ratio_bound + 1e-9) * tr.errors[k - 1] + 1e-15);
        }
    }
}

TEST_CASE("iteration is linear in the coefficients") {
    const Pasf P = random_spd_frame(3, 5, 23);
    Rng rng(24);
    Vec c1(5), c2(5);
    for (int i = 0; i < 5; ++i) {
        c1[i] = rng.uniform_pm1();
        c2[i] = rng.uniform_pm1();
    }
    const double alpha = 0.7, beta = -1.3;
    const ReconstructionTrace t1 = duffin_schaeffer(P, c1, 12, 0.0);
    const ReconstructionTrace t2 = duffin_schaeffer(P, c2, 12, 0.0);
    const ReconstructionTrace tc = duffin_schaeffer(P, Vec(alpha * c1 + beta * c2), 12, 0.0);
    for (std::size_t k = 0; k < tc.iterates.size(); ++k) {
        const Vec combo = alpha * t1.iterates[k] + beta * t2.iterates[k];
        CHECK((tc.iterates[k] - combo).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("coefficient length mismatch") {
    const Pasf P = make_standard(3, Exponent(2), Exponent(2));
    CHECK_THROWS_AS(duffin_schaeffer(P, Vec::Ones(4), 5, 1e-9), std::invalid_argument);
}
