#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include <pasf/conjectures.hpp>
#include <pasf/io.hpp>
#include <pasf/rng.hpp>

using namespace pasf;

namespace {

// independent partition oracle: recursive enumeration (element-by-element
// placement), unrelated to the restricted-growth-string search path
int brute_force_min_parts(int n, const std::function<bool(const std::vector<int>&)>& pass) {
    int best = n + 1;
    std::vector<std::vector<int>> parts;
    std::function<void(int)> place = [&](int i) {
        if (static_cast<int>(parts.size()) >= best) return;
        if (i == n) {
            for (const auto& part : parts)
                if (!pass(part)) return;
            best = std::min(best, static_cast<int>(parts.size()));
            return;
        }
        for (std::size_t k = 0; k < parts.size(); ++k) {  // indices survive reallocation
            parts[k].push_back(i);
            place(i + 1);
            parts[k].pop_back();
        }
        parts.push_back({i});
        place(i + 1);
        parts.pop_back();
    };
    place(0);
    return best;
}

Pasf unscaled_duplicated(int d, int k, double p = 2.0, double r = 2.0) {
    Pasf P = make_duplicated_standard(d, k, Exponent(p), Exponent(r));
    P.functionals *= static_cast<double>(k);  // S = k I, unit norms both sides
    return P;
}

}  // namespace

TEST_CASE("feichtinger_search on the standard basis and duplicated basis") {
    const SearchReport std4 = feichtinger_search(make_standard(4, Exponent(2), Exponent(2)), 0.5, 4);
    CHECK(std4.status == SearchStatus::holds_with_witness);
    CHECK(*std4.minimal_m == 1);
    CHECK(std4.conjecture == "Conjecture FB");
    REQUIRE(std4.certificate.has_value());
    CHECK(std4.certificate->per_part_bounds[0].lower == doctest::Approx(1.0).epsilon(1e-10));

    const Pasf dup = make_duplicated_standard(2, 2, Exponent(2), Exponent(2));
    const SearchReport rep = feichtinger_search(dup, 0.5, 4);
    CHECK(rep.status == SearchStatus::holds_with_witness);
    CHECK(*rep.minimal_m == 2);
    REQUIRE(rep.certificate.has_value());
    // distinct copies split across the two parts: {1,3} and {2,4} one-based
    CHECK(rep.certificate->parts[0] == std::vector<int>{0, 2});
    CHECK(rep.certificate->parts[1] == std::vector<int>{1, 3});
    CHECK(verify_certificate(*rep.certificate, dup));

    Mat f(2, 2), t(2, 2);
    f << 1, 0, 0, 1;
    t << 1, 0, 0, 0;  // second vector is zero
    const Pasf zero_vec = make_explicit(f, t, Exponent(2), Exponent(2));
    CHECK_THROWS_AS(feichtinger_search(zero_vec, 0.5, 2), std::invalid_argument);
}

TEST_CASE("feichtinger exhaustive minimum matches the brute-force oracle") {
    std::vector<Pasf> corpus;
    corpus.push_back(make_standard(4, Exponent(2), Exponent(2)));
    corpus.push_back(make_duplicated_standard(2, 2, Exponent(2), Exponent(2)));
    corpus.push_back(make_duplicated_standard(2, 3, Exponent(2), Exponent(2)));
    corpus.push_back(make_duplicated_standard(3, 2, Exponent(1.5), Exponent(1.5)));
    corpus.push_back(make_random(2, 5, Exponent(2), Exponent(2), 3));
    corpus.push_back(make_random(3, 6, Exponent(2), Exponent(2), 9));
    const double a_min = 0.3;
    for (const Pasf& P : corpus) {
        const int n = static_cast<int>(P.size());
        const SearchReport rep = feichtinger_search(P, a_min, n, {});
        const int oracle = brute_force_min_parts(n, [&](const std::vector<int>& part) {
            return riesz_sequence_bounds(P, part).bounds.lower >= a_min;
        });
        if (oracle > n) {  // infeasible at this threshold: both sides must agree
            CHECK(rep.status == SearchStatus::exhausted_inconclusive);
        } else {
            REQUIRE(rep.status == SearchStatus::holds_with_witness);
            CHECK(*rep.minimal_m == oracle);
        }
    }
}

TEST_CASE("greedy strategy stays consistent on larger duplicated frames") {
    const Pasf big = make_duplicated_standard(7, 2, Exponent(2), Exponent(2));  // n = 14
    const SearchReport rep = feichtinger_search(big, 0.5, 5);
    CHECK(rep.strategy == SearchStrategy::greedy);
    REQUIRE(rep.status == SearchStatus::holds_with_witness);
    CHECK(*rep.minimal_m == 2);  // never below the exhaustive minimum
    CHECK(verify_certificate(*rep.certificate, big));
}

TEST_CASE("weaver_search desk-scale instances") {
    const Pasf dup3 = unscaled_duplicated(3, 2);  // S = 2I, b = 2
    const SearchReport rep = weaver_search(dup3, 2.0, 1.0, 2);
    CHECK(rep.status == SearchStatus::holds_with_witness);
    CHECK(rep.objective == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.conjecture == "Conjecture 12");
    REQUIRE(rep.certificate.has_value());
    for (double norm : rep.certificate->per_part_norms)
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(verify_certificate(*rep.certificate, dup3));

    // single element: the only partition is the whole set
    Mat f1(1, 1), t1(1, 1);
    f1 << 0.5;
    t1 << 1;
    const Pasf single = make_explicit(f1, t1, Exponent(2), Exponent(2));
    const SearchReport rs = weaver_search(single, 2.0, 1.0, 1);
    CHECK(rs.status == SearchStatus::holds_with_witness);
    CHECK(rs.objective == doctest::Approx(0.5).epsilon(1e-12));

    // adversarial: eps so large that even the best partition fails
    Mat fa(1, 1), ta(1, 1);
    fa << 1;
    ta << 1;
    const Pasf adv = make_explicit(fa, ta, Exponent(2), Exponent(2));  // ||S|| = 1
    const SearchReport ra = weaver_search(adv, 1.0, 0.9999, 1);
    CHECK(ra.status == SearchStatus::refuted_with_witness);
    CHECK(ra.objective > 1.0 - 0.9999);
}

TEST_CASE("weaver flags and preconditions") {
    const Pasf dup3 = unscaled_duplicated(3, 2);
    // tight + unit-norm variant: S = 2I is tight, all elements unit
    const SearchReport strong =
        weaver_search(dup3, 2.0, 1.0, 2, WeaverFlags{true, true, true});
    CHECK(strong.status == SearchStatus::holds_with_witness);
    CHECK(strong.conjecture == "Conjecture 12.3.4");

    Pasf too_big = dup3;
    too_big.vectors *= 2.0;  // ||tau_j|| = 2 violates the norm cap
    CHECK_THROWS_AS(weaver_search(too_big, 8.0, 1.0, 2), std::invalid_argument);

    // subadditive-consistency of the objective on the returned partition
    const Mat s = frame_operator(dup3);
    double sum = 0.0;
    for (const auto& part : strong.certificate->parts) {
        Mat sk = Mat::Zero(3, 3);
        for (int j : part) sk += dup3.vectors.col(j) * dup3.functionals.row(j);
        sum += op_norm(sk, dup3.r, dup3.r).upper;
    }
    CHECK(op_norm(s, dup3.r, dup3.r).lower <= sum + 1e-9);
}

TEST_CASE("r_eps_search minimal M with oracle comparison") {
    const SearchReport std3 = r_eps_search(make_standard(3, Exponent(2), Exponent(2)), 0.5, 3);
    CHECK(std3.status == SearchStatus::holds_with_witness);
    CHECK(*std3.minimal_m == 1);
    CHECK(std3.conjecture == "Conjecture 11");

    // normalized delta = 0.3 mixing at p = r = 2 with f = tau^T
    const int d = 4;
    Mat t = Mat::Identity(d, d);
    for (int j = 0; j < d; ++j) t((j + 1) % d, j) = 0.3;
    for (int j = 0; j < d; ++j) t.col(j) /= t.col(j).norm();
    const Pasf pert = make_explicit(Mat(t.transpose()), t, Exponent(2), Exponent(2));
    const double eps = 0.05;
    const SearchReport rep = r_eps_search(pert, eps, d);
    REQUIRE(rep.status == SearchStatus::holds_with_witness);
    const int oracle =
        brute_force_min_parts(d, [&](const std::vector<int>& part) {
            return is_eps_riesz(pert, part, eps).ok;
        });
    CHECK(*rep.minimal_m == oracle);
    CHECK(verify_certificate(*rep.certificate, pert));

    Pasf nonunit = make_standard(3, Exponent(2), Exponent(2));
    nonunit.vectors *= 1.5;
    CHECK_THROWS_AS(r_eps_search(nonunit, 0.5, 3), std::invalid_argument);
}

TEST_CASE("akemann_weaver_search endpoints and the duplicated frame") {
    const Pasf dup = make_duplicated_standard(2, 2, Exponent(2), Exponent(2));  // Bessel 1

    const SearchReport zeros = akemann_weaver_search(dup, {0, 0, 0, 0});
    CHECK(zeros.subset.empty());
    CHECK(zeros.objective == doctest::Approx(0.0).epsilon(1e-14));

    const SearchReport ones = akemann_weaver_search(dup, {1, 1, 1, 1});
    CHECK(ones.subset == std::vector<int>{0, 1, 2, 3});
    CHECK(ones.objective == doctest::Approx(0.0).epsilon(1e-14));

    const SearchReport half = akemann_weaver_search(dup, {0.5, 0.5, 0.5, 0.5});
    CHECK(half.objective == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(half.subset == std::vector<int>{0, 2});  // one copy of each direction

    CHECK_THROWS_AS(akemann_weaver_search(dup, {0.5, 0.5, 0.5, 1.5}), std::invalid_argument);
    const Pasf big = unscaled_duplicated(2, 2);  // Bessel 2 > 1
    CHECK_THROWS_AS(akemann_weaver_search(big, {0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("fundamental inequality and majorization arithmetic") {
    NormProfile p1;
    p1.a = {1, 1, 1};
    p1.b = p1.a;
    p1.c = p1.a;
    CHECK(fundamental_inequality_check(p1, 2).combined);

    NormProfile p2;
    p2.a = {2, 1, 1};
    p2.b = {1, 1, 1};
    p2.c = {1, 1, 1};
    const InequalityResult r2 = fundamental_inequality_check(p2, 2);
    CHECK_FALSE(r2.a_ok);
    CHECK(r2.b_ok);
    CHECK_FALSE(r2.combined);

    // Hilbert sanity: all families duplicate a with exponent 2
    NormProfile hs;
    hs.a = {1.2, 0.9, 0.8, 0.4};
    hs.b = hs.a;
    hs.c = hs.a;
    double total = 0, worst = 0;
    for (double x : hs.a) {
        total += x * x;
        worst = std::max(worst, x * x);
    }
    CHECK(fundamental_inequality_check(hs, 2).combined == (worst <= total / 2.0));
    CHECK_THROWS_AS(fundamental_inequality_check(hs, 5), std::invalid_argument);

    NormProfile m1;
    m1.a = {std::sqrt(1.5), std::sqrt(1.5)};
    m1.b = m1.a;
    m1.c = m1.a;
    CHECK(majorization_check(m1, {2.0, 1.0}).combined);

    NormProfile m2;
    m2.a = {std::sqrt(2.5), std::sqrt(0.5)};
    m2.b = m2.a;
    m2.c = m2.a;
    CHECK_FALSE(majorization_check(m2, {2.0, 1.0}).combined);

    NormProfile m3;  // exact prefix equality at every step
    m3.a = {std::sqrt(2.0), std::sqrt(1.0)};
    m3.b = m3.a;
    m3.c = m3.a;
    CHECK(majorization_check(m3, {2.0, 1.0}).combined);
    CHECK_THROWS_AS(majorization_check(m3, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(majorization_check(m3, {2.0, 0.0}), std::invalid_argument);
}

TEST_CASE("scaling_solve") {
    const ScalingResult parseval = scaling_solve(make_standard(3, Exponent(2), Exponent(2)));
    CHECK(parseval.scalable);
    CHECK(parseval.residual <= 1e-12);
    for (int j = 0; j < 3; ++j) CHECK(parseval.scalars[j] == doctest::Approx(1.0).epsilon(1e-12));

    Mat f(3, 2), t(2, 3);
    f << 1, 0, 1, 0, 0, 1;
    t << 1, 1, 0, 0, 0, 1;
    const ScalingResult sc = scaling_solve(make_explicit(f, t, Exponent(2), Exponent(2)));
    CHECK(sc.scalable);
    CHECK(sc.scalars[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sc.scalars[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sc.scalars[2] == doctest::Approx(1.0).epsilon(1e-12));

    Mat f2(2, 2), t2(2, 2);
    f2 << 1, 0, 1, 0;
    t2 << 1, 1, 0, 0;
    const ScalingResult rank_obstructed = scaling_solve(make_explicit(f2, t2, Exponent(2), Exponent(2)));
    CHECK_FALSE(rank_obstructed.scalable);
    CHECK(rank_obstructed.residual >= 1.0 - 1e-9);

    // applying the returned scalars yields a Parseval pair
    for (int trial = 0; trial < 5; ++trial) {
        Rng rng(300 + trial);
        Mat t0(2, 4);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 4; ++j) t0(i, j) = rng.uniform_pm1();
        const Mat f0 = t0.transpose() * (t0 * t0.transpose()).inverse();
        Pasf unscaled = make_explicit(f0, t0, Exponent(2), Exponent(2));
        for (int j = 0; j < 4; ++j) {
            const double aj = 0.5 + rng.uniform(), bj = 0.5 + rng.uniform();
            unscaled.functionals.row(j) /= aj;
            unscaled.vectors.col(j) /= bj;
        }
        const ScalingResult res = scaling_solve(unscaled);
        REQUIRE(res.scalable);
        Pasf rescaled = unscaled;
        for (int j = 0; j < 4; ++j) {
            rescaled.functionals.row(j) *= res.a_scalars[j];
            rescaled.vectors.col(j) *= res.b_scalars[j];
        }
        CHECK(classify(rescaled, 1e-8).tag == FrameClassTag::parseval);
    }
}

TEST_CASE("retrieval_check certifications and refutations") {
    Mat f3(3, 2);
    f3 << 1, 0, 0, 1, 1, 1;
    const Pasf spanning = make_explicit(f3, Mat(f3.transpose()), Exponent(2), Exponent(2));
    const SearchReport phase_ok = retrieval_check(spanning, RetrievalSide::vector, RetrievalKind::phase);
    CHECK(phase_ok.status == SearchStatus::holds_with_witness);

    const Pasf eye = make_standard(2, Exponent(2), Exponent(2));
    const SearchReport phase_no = retrieval_check(eye, RetrievalSide::vector, RetrievalKind::phase);
    REQUIRE(phase_no.status == SearchStatus::refuted_with_witness);
    const Vec x = *phase_no.witness_x, y = *phase_no.witness_y;
    const Vec ax = eye.functionals * x, ay = eye.functionals * y;
    for (int i = 0; i < 2; ++i) CHECK(std::abs(std::abs(ax[i]) - std::abs(ay[i])) <= 1e-12);
    CHECK((x - y).norm() > 1e-6);
    CHECK((x + y).norm() > 1e-6);

    for (double r : {1.0, 2.0, 3.0}) {
        const Pasf eyer = make_standard(2, Exponent(2), Exponent(r));
        CHECK(retrieval_check(eyer, RetrievalSide::vector, RetrievalKind::norm).status ==
              SearchStatus::holds_with_witness);
    }

    // functional side mirrors the vector side through T^T
    CHECK(retrieval_check(spanning, RetrievalSide::functional, RetrievalKind::phase).status ==
          SearchStatus::holds_with_witness);
    CHECK(retrieval_check(eye, RetrievalSide::functional, RetrievalKind::phase).status ==
          SearchStatus::refuted_with_witness);

    const Pasf too_big = make_random(2, 21, Exponent(2), Exponent(2), 1);
    CHECK_THROWS_AS(retrieval_check(too_big, RetrievalSide::vector, RetrievalKind::phase),
                    std::invalid_argument);
}

TEST_CASE("dynamical_build") {
    Mat swap(2, 2);
    swap << 0, 1, 1, 0;
    Mat gen_f(1, 2), gen_tau(2, 1);
    gen_f << 1, 0;
    gen_tau << 1, 0;
    const Pasf swap_pair = dynamical_build(gen_f, gen_tau, swap, swap, 2, Exponent(2), Exponent(2));
    CHECK(swap_pair.size() == 2);
    CHECK(classify(swap_pair).tag == FrameClassTag::p_orthonormal_basis);

    // Mercedes-Benz: rotation by 2pi/3, scaled generators, M = 3
    const double ang = 2.0 * 3.14159265358979323846 / 3.0;
    Mat rot(2, 2);
    rot << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
    const double scale = std::sqrt(2.0 / 3.0);
    Mat gf(1, 2), gt(2, 1);
    gf << scale, 0;
    gt << scale, 0;
    const Pasf mb = dynamical_build(gf, gt, Mat(rot.transpose()), rot, 3, Exponent(2), Exponent(2));
    CHECK(mb.size() == 3);
    CHECK(classify(mb, 1e-9).tag == FrameClassTag::parseval);

    const Pasf dead = dynamical_build(gen_f, gen_tau, swap, Mat(Mat::Zero(2, 2)), 2,
                                      Exponent(2), Exponent(2));
    CHECK(classify(dead).tag == FrameClassTag::bessel_only);

    // permuting generators permutes elements without changing the tag
    Mat gf2(2, 2), gt2(2, 2);
    gf2 << 1, 0, 0, 1;
    gt2 << 1, 0, 0, 1;
    Mat gf2_swapped(2, 2), gt2_swapped(2, 2);
    gf2_swapped << 0, 1, 1, 0;
    gt2_swapped << 0, 1, 1, 0;
    const Pasf order_a = dynamical_build(gf2, gt2, swap, swap, 2, Exponent(2), Exponent(2));
    const Pasf order_b =
        dynamical_build(gf2_swapped, gt2_swapped, swap, swap, 2, Exponent(2), Exponent(2));
    CHECK(classify(order_a).tag == classify(order_b).tag);

    CHECK_THROWS_AS(dynamical_build(gen_f, gen_tau, Mat(Mat::Zero(3, 3)), swap, 2,
                                    Exponent(2), Exponent(2)),
                    std::invalid_argument);
}

TEST_CASE("decomposition_search") {
    // T = I: one term
    const Pasf eye3 = make_standard(2, Exponent(3), Exponent(3));
    const SearchReport one = decomposition_search(eye3, DecompositionMode::lin_comb, 2);
    CHECK(one.status == SearchStatus::holds_with_witness);
    CHECK(one.witness_mats.size() == 1);
    CHECK(one.witness_coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));

    // T = [[1,1],[-1,1]] at p = r = 3: I plus the rotation-like signed permutation
    Mat t(2, 2);
    t << 1, 1, -1, 1;
    const Pasf pair = make_explicit(Mat(t.inverse()), t, Exponent(3), Exponent(3));
    const SearchReport two = decomposition_search(pair, DecompositionMode::lin_comb, 2);
    REQUIRE(two.status == SearchStatus::holds_with_witness);
    REQUIRE(two.witness_mats.size() == 2);
    Mat recon = Mat::Zero(2, 2);
    for (std::size_t i = 0; i < two.witness_mats.size(); ++i)
        recon += two.witness_coeffs[i] * two.witness_mats[i];
    CHECK((recon - t).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(two.conjecture == "Conjecture 13");

    // T = 3I: multiple of a single basis
    const Pasf tri = make_explicit(Mat(Mat::Identity(2, 2) / 3.0), Mat(3.0 * Mat::Identity(2, 2)),
                                   Exponent(3), Exponent(3));
    const SearchReport mul = decomposition_search(tri, DecompositionMode::multiple_of_sum, 2);
    REQUIRE(mul.status == SearchStatus::holds_with_witness);
    CHECK(mul.witness_mats.size() == 1);
    CHECK(mul.witness_coeffs[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(mul.conjecture == "Conjecture 14");

    const SearchReport onb = decomposition_search(pair, DecompositionMode::onb_plus_riesz, 1);
    REQUIRE(onb.status == SearchStatus::holds_with_witness);
    REQUIRE(onb.witness_mats.size() == 2);
    const Mat q = onb.witness_mats[0], rem = onb.witness_mats[1];
    const double mu = onb.witness_coeffs[0];
    CHECK((mu * (q + rem) - t).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(rem.determinant()) > 1e-10);
    CHECK(onb.conjecture == "Conjecture 141");

    // r = p = 2: Procrustes route, polar seeding
    Mat t2(2, 2);
    t2 << 2, 0, 0, 2;
    const Pasf sq2 = make_explicit(Mat(t2.inverse()), t2, Exponent(2), Exponent(2));
    const SearchReport orth = decomposition_search(sq2, DecompositionMode::lin_comb, 2);
    CHECK(orth.status == SearchStatus::holds_with_witness);

    CHECK_THROWS_AS(decomposition_search(make_duplicated_standard(2, 2, Exponent(3), Exponent(3)),
                                         DecompositionMode::lin_comb, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(decomposition_search(make_standard(5, Exponent(3), Exponent(3)),
                                         DecompositionMode::lin_comb, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(r_eps_search(make_standard(2, Exponent(2), Exponent(2)), 1.2, 2),
                    std::invalid_argument);
}

TEST_CASE("kothe_lorch_check raw conditions") {
    const KotheLorchReport ok = kothe_lorch_check(make_standard(3, Exponent(2), Exponent(2)));
    CHECK(ok.riesz.is_riesz);
    CHECK(ok.expansion_ok);
    CHECK(ok.sandwich_ok);

    Mat diag12 = Mat::Zero(2, 2);
    diag12(0, 0) = 1;
    diag12(1, 1) = 2;
    const KotheLorchReport mixed =
        kothe_lorch_check(make_explicit(Mat::Identity(2, 2), diag12, Exponent(2), Exponent(2)));
    CHECK(mixed.riesz.is_riesz);
    CHECK_FALSE(mixed.expansion_ok);
    CHECK(mixed.expansion_defect == doctest::Approx(1.0).epsilon(1e-10));

    Mat f(2, 2), t(2, 2);
    f << 1, 0, 0, 0;  // zero functional
    t << 1, 0, 0, 1;
    const KotheLorchReport zero_f = kothe_lorch_check(make_explicit(f, t, Exponent(2), Exponent(2)));
    CHECK_FALSE(zero_f.sandwich_ok);
    CHECK(zero_f.f_min <= 1e-12);
}

TEST_CASE("verify_certificate structural and threshold failures") {
    const Pasf dup = make_duplicated_standard(2, 2, Exponent(2), Exponent(2));
    const SearchReport rep = feichtinger_search(dup, 0.5, 4);
    REQUIRE(rep.certificate.has_value());
    CHECK(verify_certificate(*rep.certificate, dup));

    PartitionCertificate broken = *rep.certificate;
    broken.parts[0].push_back(broken.parts[1][0]);  // breaks disjointness
    CHECK_FALSE(verify_certificate(broken, dup));

    PartitionCertificate harsher = *rep.certificate;
    harsher.a_min = 1.5;  // above the achieved lower bound
    CHECK_FALSE(verify_certificate(harsher, dup));

    PartitionCertificate out_of_range = *rep.certificate;
    out_of_range.parts[0][0] = 9;
    CHECK_THROWS_AS(verify_certificate(out_of_range, dup), std::out_of_range);
}

TEST_CASE("inverse_design_search witnesses") {
    NormProfile all_ones;
    all_ones.a = {1, 1, 1};
    all_ones.b = {1, 1, 1};
    all_ones.c = {1, 1, 1};
    const SearchReport tight = inverse_design_search(
        DesignMode::tight_with_norms, 3, 3, all_ones, std::nullopt, Exponent(2), Exponent(2));
    CHECK(tight.status == SearchStatus::holds_with_witness);
    CHECK(tight.objective <= 1e-10);

    Mat starget(2, 2);
    starget << 2, 0, 0, 1;
    NormProfile free;
    const SearchReport op = inverse_design_search(
        DesignMode::frame_operator_with_norms, 2, 3, free, starget, Exponent(2), Exponent(2));
    REQUIRE(op.status == SearchStatus::holds_with_witness);
    const Mat s = *op.witness_t * *op.witness_f;
    CHECK((s - starget).cwiseAbs().maxCoeff() <= 1e-8);

    // infeasible Hilbert-case targets: max a^2 > (1/d) sum a^2 with c = a*b
    NormProfile infeasible;
    infeasible.a = {2, 1, 1};
    infeasible.b = {2, 1, 1};
    infeasible.c = {4, 1, 1};
    Budget small;
    small.max_nodes = 20000;
    const SearchReport fail = inverse_design_search(
        DesignMode::tight_with_norms, 2, 3, infeasible, std::nullopt, Exponent(2), Exponent(2), small);
    CHECK(fail.status == SearchStatus::exhausted_inconclusive);
    CHECK(fail.objective > 1e-3);

    CHECK_THROWS_AS(inverse_design_search(DesignMode::tight_with_norms, 3, 2, all_ones,
                                          std::nullopt, Exponent(2), Exponent(2)),
                    std::invalid_argument);
}

TEST_CASE("search reports are deterministic") {
    const Pasf dup = make_duplicated_standard(2, 2, Exponent(2), Exponent(2));
    const Json a = report_to_json(feichtinger_search(dup, 0.5, 4));
    const Json b = report_to_json(feichtinger_search(dup, 0.5, 4));
    CHECK(a.dump() == b.dump());

    const Pasf dup3 = unscaled_duplicated(3, 2);
    const Json w1 = report_to_json(weaver_search(dup3, 2.0, 1.0, 2));
    const Json w2 = report_to_json(weaver_search(dup3, 2.0, 1.0, 2));
    CHECK(w1.dump() == w2.dump());
}
