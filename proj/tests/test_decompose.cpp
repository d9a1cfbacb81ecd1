#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "soq/decompose.hpp"
#include "soq/diag.hpp"
#include "soq/oracle.hpp"
#include "soq/poly.hpp"

using namespace soq;

namespace {

Mask full_mask(int n) {
    Mask X = 0;
    for (int i = 1; i <= n; ++i) X |= Mask(1) << i;
    return X;
}

// uniformly random monomial of the given degree over {1..n}
Monomial random_monomial(int n, int d, std::mt19937& rng) {
    Monomial m;
    std::uniform_int_distribution<int> pick_i(1, n);
    std::uniform_int_distribution<int> pick_s(0, 1);
    for (int t = 0; t < d; ++t) {
        int i = pick_i(rng), j = pick_i(rng);
        Sign s = pick_s(rng) ? Sign::plus : Sign::minus;
        if (i == j) s = Sign::plus;
        m.mul_var(s, std::min(i, j), std::max(i, j), 1);
    }
    return m;
}

}  // namespace

TEST_CASE("block products fold to canonical variables") {
    Block B{Mask(1) << 1, full_mask(2)};
    CHECK(block_sign_product(B, Sign::minus, 2).str() == "y-12^2");
    CHECK(block_both_product(B, 1).str() == "y-12*y+12");
    // eps product at odd exponent carries the fold sign of disordered pairs
    Block C{Mask(1) << 2, full_mask(2)};
    Monomial e = block_eps_product(B, C, 1, 1);
    CHECK(normal_form(e).is_zero() == false);
}

TEST_CASE("n=1 decomposition divides by the good power") {
    Monomial p = parse_monomial("5*y+11^7");
    Decomposition dec = decompose_full(p, full_mask(1), 2);
    REQUIRE(dec.terms.size() == 1);
    CHECK(dec.terms[0].good.mono.str() == "y+11^4");
    CHECK(dec.terms[0].theta.str() == "5*y+11^3");
    CHECK(verify_decomposition(dec, p, full_mask(1), 2));
}

TEST_CASE("so5 basis decomposition reproduces the input in R") {
    for (const char* text : {"y+11^8", "y-12^8", "y+12^3*y-12^2*y+22^3", "y+11^2*y+22^6"}) {
        Monomial p = parse_monomial(text);
        auto terms = so5_decompose(p, 1);
        Polynomial recon;
        for (const auto& t : terms) {
            Monomial m = t.multiplier;
            Monomial b = t.basis.monomial();
            m.coeff = m.coeff * b.coeff;
            for (const auto& [v, e] : b.exps) m.mul_var(v.sign, v.i, v.j, e);
            recon.add_term(m);
        }
        CHECK(equal_in_R(recon, p.as_poly()));
    }
}

TEST_CASE("full decomposition verifies at n=2") {
    Mask X = full_mask(2);
    for (const char* text : {"y+11^8", "y-12^8", "y+12^4*y-12^4", "y+11*y+12^3*y-12^2*y+22^2",
                             "7/3*y-12*y+12*y+22^6"}) {
        Monomial p = parse_monomial(text);
        Decomposition dec = decompose_full(p, X, 1);
        CHECK(verify_decomposition(dec, p, X, 1));
    }
}

TEST_CASE("full decomposition verifies at n=2 genus 2") {
    Mask X = full_mask(2);
    Monomial p = parse_monomial("y+12^10*y-12^6");
    Decomposition dec = decompose_full(p, X, 2);
    CHECK(verify_decomposition(dec, p, X, 2));
}

TEST_CASE("full decomposition verifies at n=3") {
    Mask X = full_mask(3);
    Monomial p = parse_monomial("y+12^7*y-13^6*y+23^6");
    Decomposition dec = decompose_full(p, X, 1);
    CHECK(dec.terms.size() > 0);
    CHECK(verify_decomposition(dec, p, X, 1));
}

TEST_CASE("randomized decompositions all verify") {
    std::mt19937 rng(20260826);
    struct Case {
        int n, g;
    };
    for (Case c : {Case{2, 1}, Case{2, 2}, Case{3, 1}}) {
        Mask X = full_mask(c.n);
        int d = 2 * c.g * c.n * c.n + (c.n - 1) * (c.n - 2) / 2;
        for (int t = 0; t < 25; ++t) {
            Monomial p = random_monomial(c.n, d, rng);
            CAPTURE(p.str());
            Decomposition dec = decompose_full(p, X, c.g);
            CHECK(verify_decomposition(dec, p, X, c.g));
        }
    }
}

TEST_CASE("verification rejects a corrupted certificate") {
    Mask X = full_mask(2);
    Monomial p = parse_monomial("y-12^8");
    Decomposition dec = decompose_full(p, X, 1);
    REQUIRE(verify_decomposition(dec, p, X, 1));
    Decomposition bad = dec;
    for (auto& [e, c] : bad.terms[0].theta.terms) c += 1;
    CHECK_FALSE(verify_decomposition(bad, p, X, 1));
    Decomposition bad2 = dec;
    bad2.terms[0].good.mono.coeff = bad2.terms[0].good.mono.coeff * 2;
    CHECK_FALSE(verify_decomposition(bad2, p, X, 1));
}

TEST_CASE("core reduction reproduces its input class") {
    Mask X = full_mask(3);
    Monomial p = parse_monomial("y+12^4*y-13^5*y+23^4");
    auto terms = core_reduce(p, X, 1);
    CHECK(terms.size() > 0);
    Polynomial recon;
    for (const CoreTerm& t : terms) {
        Monomial base;
        if (t.family == CoreTerm::Family::pairs) {
            base = block_both_product(*t.block, 2);
        } else {
            base.coeff = 1;
            for (int i = 1; i <= 3; ++i)
                for (int j = i + 1; j <= 3; ++j)
                    base.mul_var(eps_of(t.block, i, j) > 0 ? Sign::minus : Sign::plus, i, j, 2);
        }
        Monomial m = t.cofactor;
        m.coeff = m.coeff * base.coeff;
        for (const auto& [v, e] : base.exps) m.mul_var(v.sign, v.i, v.j, e);
        recon.add_term(m);
    }
    CHECK(equal_in_R(recon, p.as_poly()));
}
