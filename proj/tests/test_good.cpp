#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "soq/diag.hpp"
#include "soq/good.hpp"
#include "soq/poly.hpp"

using namespace soq;

namespace {
Mask mask_of(std::initializer_list<int> xs) { return indices_to_mask(std::vector<int>(xs)); }
}

TEST_CASE("q_n with no block emits the full plus-product on every slot") {
    Mask X = mask_of({1, 2});
    GoodCollection c = q_n(X, std::nullopt, {BlockUnion{}, BlockUnion{}}, 1);
    CHECK(c.slots.size() == 2);
    Monomial a = alpha(c);
    CHECK(a.str() == "y+11^2*y+12^4*y+22^2");
}

TEST_CASE("q_n with a block flips cross pairs to the minus family") {
    Mask X = mask_of({1, 2});
    Block B{mask_of({1}), X};
    GoodCollection c = q_n(X, B, {BlockUnion{}, BlockUnion{}}, 1);
    Monomial a = alpha(c);
    CHECK(a.str() == "y+11^2*y-12^4*y+22^2");
}

TEST_CASE("D-slot unions flip their pairs back per generator") {
    Mask X = mask_of({1, 2, 3});
    Block B{mask_of({1}), X};
    Block D0{mask_of({2}), X};
    GoodCollection c = q_n(X, B, {BlockUnion{D0}, BlockUnion{}}, 1);
    Monomial a = alpha(c);
    // slot 0 follows eps_{D0} on pairs covered by D0, the complementary sign
    // elsewhere; slot 1 follows eps_B throughout
    const auto exps = a.exps;
    int total = 0;
    for (const auto& [v, e] : exps) total += e;
    CHECK(total == 18);  // (6 ordered + 3 diagonal) pairs x 2 generators
    CHECK(normal_form(a).is_zero() == false);
}

TEST_CASE("split_collection relabels the inner collection over the larger set") {
    Mask inner = mask_of({1, 2});
    GoodCollection child = q_n(inner, std::nullopt, {BlockUnion{}, BlockUnion{}}, 1);
    GoodCollection whole = split_collection(child, mask_of({3}));
    CHECK(whole.X == mask_of({1, 2, 3}));
    Monomial a = alpha(whole);
    // inner pairs keep their signs; cross pairs all emit the minus family
    CHECK(a.exps.count(VarId{Sign::minus, 1, 3}) == 1);
    CHECK(a.exps.count(VarId{Sign::minus, 2, 3}) == 1);
    CHECK(a.exps.count(VarId{Sign::plus, 1, 2}) == 1);
    CHECK(whole.provenance);
    CHECK(whole.provenance->kind == GoodNode::Kind::split);
}

TEST_CASE("enumeration counts are stable") {
    EnumCaps caps{.max_blocks_per_slot = 2, .max_split_depth = 2};
    CHECK(enumerate_good(1, 1, caps).size() == 1);
    CHECK(enumerate_good(2, 1, caps).size() == 7);
    CHECK(enumerate_good(2, 2, caps).size() == 11);
    CHECK(enumerate_good(3, 1, caps).size() == 66);
}

TEST_CASE("enumeration deduplicates by normal form") {
    EnumCaps caps{.max_blocks_per_slot = 2, .max_split_depth = 2};
    auto goods = enumerate_good(2, 1, caps);
    std::set<DiagonalPolynomial> nfs;
    for (const auto& gm : goods) {
        Monomial m = gm.mono;
        m.coeff = 1;
        CHECK(nfs.insert(normal_form(m)).second);
    }
}

TEST_CASE("every enumerated good carries consistent provenance") {
    EnumCaps caps{.max_blocks_per_slot = 2, .max_split_depth = 2};
    for (const auto& gm : enumerate_good(3, 1, caps)) {
        REQUIRE(gm.coll.provenance);
        Monomial a = alpha(gm.coll);
        CHECK(a.exps == gm.mono.exps);
        CHECK(a.coeff == gm.mono.coeff);
        CHECK((int)gm.coll.slots.size() == 2 * gm.coll.g);
    }
}
