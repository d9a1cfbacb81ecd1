#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "soq/blocks.hpp"

using namespace soq;

namespace {
Mask mask_of(std::initializer_list<int> xs) { return indices_to_mask(std::vector<int>(xs)); }

std::set<std::pair<int, int>> pair_set(const Block& b) {
    auto ps = block_pairs(b);
    return {ps.begin(), ps.end()};
}
}  // namespace

TEST_CASE("block basics") {
    Block b{mask_of({1, 3}), mask_of({1, 2, 3, 4})};
    CHECK(b.valid());
    CHECK(b.pair_count() == 4);
    CHECK(pair_set(b) == std::set<std::pair<int, int>>{{1, 2}, {1, 4}, {3, 2}, {3, 4}});
    CHECK(bar(b).V == mask_of({2, 4}));
    CHECK_FALSE(Block{0, mask_of({1, 2})}.valid());
    CHECK_FALSE(Block{mask_of({1, 2}), mask_of({1, 2})}.valid());
}

TEST_CASE("eps is the crossing indicator") {
    Block b{mask_of({1}), mask_of({1, 2, 3})};
    CHECK(eps_block(b, 1, 2) == 1);
    CHECK(eps_block(b, 2, 1) == 1);
    CHECK(eps_block(b, 2, 3) == -1);
    CHECK(eps_block(b, 1, 3) == 1);
    CHECK(eps_side(b, 1) == 1);
    CHECK(eps_side(b, 2) == -1);
    // bar flips sides but not crossings
    CHECK(eps_block(bar(b), 1, 2) == 1);
    CHECK(eps_side(bar(b), 1) == -1);
}

TEST_CASE("enumerate_blocks lists every proper bipartition") {
    CHECK(enumerate_blocks(mask_of({1, 2})).size() == 2);
    CHECK(enumerate_blocks(mask_of({1, 2, 3})).size() == 6);
    CHECK(enumerate_blocks(mask_of({1, 2, 3, 4})).size() == 14);
    for (const Block& b : enumerate_blocks(mask_of({2, 5, 7}))) CHECK(b.valid());
}

TEST_CASE("sym_diff covers exactly the pairs crossing one of the two") {
    Mask X = mask_of({1, 2, 3, 4});
    Block b{mask_of({1, 2}), X};
    Block c{mask_of({1, 3}), X};
    auto d = sym_diff(b, c);
    REQUIRE(d.has_value());
    std::set<std::pair<int, int>> want;
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j)
            if (eps_block(b, i, j) * eps_block(c, i, j) < 0) want.insert({i, j});
    std::set<std::pair<int, int>> got;
    for (auto [i, j] : block_pairs(*d)) got.insert(i < j ? std::pair{i, j} : std::pair{j, i});
    for (auto [i, j] : block_pairs(bar(*d)))
        got.insert(i < j ? std::pair{i, j} : std::pair{j, i});
    CHECK(got == want);
    // degenerate when the partitions agree up to bar
    CHECK_FALSE(sym_diff(b, b).has_value());
    CHECK_FALSE(sym_diff(b, bar(b)).has_value());
}

TEST_CASE("restrict_block drops one index") {
    Mask X = mask_of({1, 2, 3});
    Block b{mask_of({1, 2}), X};
    auto r = restrict_block(b, 2);
    REQUIRE(r.has_value());
    CHECK(r->V == mask_of({1}));
    CHECK(r->X == mask_of({1, 3}));
    // side collapse
    Block c{mask_of({3}), X};
    CHECK_FALSE(restrict_block(c, 3).has_value());
}

TEST_CASE("extend_through_z keeps pairs inside the union") {
    Mask X = mask_of({1, 2, 3, 4});
    Block b{mask_of({1}), mask_of({1, 2, 3})};          // over X \ {4}
    Block c{mask_of({2, 4}), mask_of({2, 3, 4})};       // over Vc(b) u {4}
    Block d = extend_through_z(b, c, 4);
    CHECK(d.valid());
    CHECK(d.X == X);
    std::set<std::pair<int, int>> allowed;
    for (const Block* src : {&b, &c}) {
        for (auto [i, j] : block_pairs(*src)) {
            allowed.insert({i, j});
            allowed.insert({j, i});
        }
    }
    for (auto [i, j] : block_pairs(d)) CHECK(allowed.count({i, j}) == 1);
}

TEST_CASE("combine_two_sides sandwiches the pair sets") {
    Mask X = mask_of({1, 2, 3, 4, 5});
    const int z = 5;
    Block b{mask_of({1, 2}), X & ~mask_of({z})};  // over X \ {z}
    Block c{mask_of({1}), b.V | mask_of({z})};    // over V(b) u {z}
    Block e{mask_of({3, z}), b.Vc() | mask_of({z})};  // over Vc(b) u {z}
    CombineResult res = combine_two_sides(b, c, e, z);
    CHECK(res.A.valid());
    auto pa = pair_set(res.A);
    for (auto [i, j] : block_pairs(c)) CHECK(pa.count({i, j}) == 1);
    const Block ep = res.used_bar_E ? bar(e) : e;
    for (auto [i, j] : block_pairs(ep)) CHECK(pa.count({i, j}) == 1);
    std::set<std::pair<int, int>> outer;
    for (auto [i, j] : block_pairs(b)) outer.insert({i, j});
    for (auto [i, j] : block_pairs(bar(b))) outer.insert({i, j});
    for (auto [i, j] : block_pairs(c)) outer.insert({i, j});
    for (auto [i, j] : block_pairs(ep)) outer.insert({i, j});
    for (auto [i, j] : pa) CHECK(outer.count({i, j}) == 1);
}
