#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "soq/holonomy.hpp"

using namespace soq;

namespace {
Mask mask_of(std::initializer_list<int> xs) { return indices_to_mask(std::vector<int>(xs)); }

Mask full_mask(int n) {
    Mask X = 0;
    for (int i = 1; i <= n; ++i) X |= Mask(1) << i;
    return X;
}
}  // namespace

TEST_CASE("counter rng is reproducible and splittable") {
    CounterRng a(42, 7), b(42, 7), c(42, 8);
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.next_u64() != c.next_u64());
    CounterRng d(42, 7);
    for (int i = 0; i < 100; ++i) {
        double u = d.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("kappa lands in SO(2n+1) and is a homomorphism") {
    CounterRng rng(3, 0);
    for (int n : {1, 2, 3}) {
        Eigen::MatrixXcd U = random_unitary(n, rng);
        OrthMatrix K = kappa(U);
        CHECK(K.rows() == 2 * n + 1);
        CHECK((K * K.transpose() - OrthMatrix::Identity(2 * n + 1, 2 * n + 1)).norm() < 1e-12);
        CHECK(std::abs(K.determinant() - 1.0) < 1e-12);
        CHECK(kappa_residual(n, 50, 11) < 1e-12);
    }
}

TEST_CASE("torus elements round-trip through angle extraction") {
    std::vector<double> angles{0.3, 1.7, -2.5};
    OrthMatrix T = torus_element(angles);
    auto got = torus_angles(T, 1e-12);
    REQUIRE(got.has_value());
    for (int i = 0; i < 3; ++i) CHECK(std::abs((*got)[i] - angles[i]) < 1e-12);
    CHECK(is_generic_torus(T, 1e-9));
    // a rational relation kills genericity: theta1 - theta2 = 0
    CHECK_FALSE(is_generic_torus(torus_element({0.4, 0.4}), 1e-9));
    // theta1 + theta2 in 2 pi Z
    CHECK_FALSE(is_generic_torus(torus_element({1.0, 2 * M_PI - 1.0}), 1e-9));
    // non-torus matrices yield no angles
    CounterRng rng(5, 1);
    CHECK_FALSE(torus_angles(kappa(random_unitary(2, rng)), 1e-9).has_value());
}

TEST_CASE("sampled forms zero exactly their associated sections") {
    for (int n : {2, 3}) {
        std::vector<FormSpec> specs{FormSpec{FormSpec::Kind::plusmat}};
        for (const Block& B : enumerate_blocks(full_mask(n)))
            specs.push_back(FormSpec{FormSpec::Kind::minusmat, B});
        for (const FormSpec& spec : specs) {
            OrthMatrix M = sample_form(spec, n, 99, 0);
            for (const SectionEmission& s : zero_sections(spec, n)) {
                auto [plus, minus] = section_values(M, s.i, s.j);
                double v = std::abs(s.sign == Sign::plus ? plus : minus);
                CAPTURE(spec.name());
                CHECK(v < 1e-12);
            }
        }
    }
}

TEST_CASE("duality: perturbation revives the zeroed section") {
    FormSpec spec{FormSpec::Kind::minusmat, Block{mask_of({1}), full_mask(2)}};
    DualityReport r = check_duality(spec, 2, 100, 1e-3, 7);
    CHECK(r.max_zero_section < 1e-12);
    CHECK(r.min_perturbed_section > 1e-6);
}

TEST_CASE("commutator products avoid generic torus elements") {
    StressReport r = stress_lemma(FormSpec{FormSpec::Kind::plusmat}, 2, 1, 500, 1e-9, 42);
    CHECK(r.violations == 0);
    CHECK(r.angle_sum_failures == 0);
    StressReport rm = stress_lemma(
        FormSpec{FormSpec::Kind::minusmat, Block{mask_of({1}), full_mask(2)}}, 2, 1, 500, 1e-9,
        42, 2);
    CHECK(rm.violations == 0);
}

TEST_CASE("swap conjugation links the two structured forms") {
    Block B{mask_of({1}), full_mask(2)};
    OrthMatrix E = swap_matrix(B.V, 2);
    CHECK((E * E - OrthMatrix::Identity(5, 5)).norm() == 0);
    OrthMatrix Mp = sample_form(FormSpec{FormSpec::Kind::plusmat}, 2, 13, 5);
    OrthMatrix Mm = E * Mp * E;
    // the conjugate zeroes s-_12 wherever the original zeroed s+_12
    auto [p0, m0] = section_values(Mp, 1, 2);
    auto [p1, m1] = section_values(Mm, 1, 2);
    CHECK(std::abs(p0) < 1e-12);
    CHECK(std::abs(m1) < 1e-12);
}
