#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

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
}  // namespace

TEST_CASE("graded basis has the right dimension") {
    // dim of degree-d forms in n variables = C(d+n-1, n-1)
    CHECK(graded_basis(full_mask(1), 5).size() == 1);
    CHECK(graded_basis(full_mask(2), 5).size() == 6);
    CHECK(graded_basis(full_mask(3), 4).size() == 15);
    CHECK(graded_basis(full_mask(3), 19).size() == 210);
}

TEST_CASE("span membership finds exact certificates") {
    EnumCaps caps{.max_blocks_per_slot = 2, .max_split_depth = 2};
    auto goods = enumerate_good(2, 1, caps);
    Mask X = full_mask(2);
    DiagonalPolynomial target;
    target.add(DExp{{1, 8}}, 1);  // d1^8
    auto cert = span_membership(target, goods, X, 8);
    REQUIRE(cert.has_value());
    // recombine and compare exactly
    DiagonalPolynomial sum;
    for (const auto& [gi, cof] : cert->combination) sum += cof * normal_form(goods[gi].mono);
    CHECK((sum - target).is_zero());
}

TEST_CASE("membership fails below the theorem degree") {
    EnumCaps caps{.max_blocks_per_slot = 2, .max_split_depth = 2};
    auto goods = enumerate_good(2, 1, caps);
    // the good monomials have degree 8; degree-4 targets cannot be multiples
    DiagonalPolynomial low;
    low.add(DExp{{1, 4}}, 1);
    CHECK_FALSE(span_membership(low, goods, full_mask(2), 4).has_value());
}

TEST_CASE("theorem verification at small sizes") {
    EnumCaps caps{.max_blocks_per_slot = 2, .max_split_depth = 2};
    SUBCASE("one variable") {
        for (int g : {1, 2, 3}) {
            TheoremReport r = verify_theorem(1, g, 2 * g, caps);
            CHECK(r.all_certified());
            CHECK(r.monomials.size() == 1);
        }
    }
    SUBCASE("two variables, genus one") {
        TheoremReport r = verify_theorem(2, 1, 8, caps);
        CHECK(r.all_certified());
        CHECK(r.monomials.size() == 9);
        CHECK(r.goods_used == 7);
    }
    SUBCASE("two variables, genus two") {
        TheoremReport r = verify_theorem(2, 2, 16, caps);
        CHECK(r.all_certified());
        CHECK(r.monomials.size() == 17);
    }
    SUBCASE("multithreaded run agrees") {
        TheoremReport a = verify_theorem(2, 1, 9, caps, 1);
        TheoremReport b = verify_theorem(2, 1, 9, caps, 4);
        REQUIRE(a.monomials.size() == b.monomials.size());
        for (size_t i = 0; i < a.monomials.size(); ++i)
            CHECK(a.monomials[i].certified == b.monomials[i].certified);
    }
}

TEST_CASE("block lemma suite is exhaustive and green") {
    SuiteReport r = check_block_lemmas(5);
    CHECK(r.all_hold());
    CHECK(r.total_cases() == 5516);
    for (const auto& e : r.entries) CHECK(e.cases > 0);
}

TEST_CASE("pigeonhole lemma suite is green") {
    SuiteReport r = check_pigeonhole_lemmas(6, 2);
    CHECK(r.all_hold());
    bool found = false;
    for (const auto& e : r.entries)
        if (e.name == "z-free-remainder") found = true;
    CHECK(found);
}
