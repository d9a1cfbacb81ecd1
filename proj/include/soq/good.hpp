#pragma once

// Good collections of sections and their variable images.
//
// A base collection over X is parametrized by an optional block B and a
// 2g-tuple D of block unions: each generator slot emits, for every ordered
// pair (i,j) in X x X, both signs when (i,j) lies in D_l, nothing when it
// lies only in bar(D_l), and the sign -eps_B(i,j) otherwise (eps of the empty
// block is -1 everywhere, so diagonals always contribute s+ii). A split
// collection augments a collection over an inner set with both-sign cross
// sections towards the outer set in every slot. Emissions are folded to
// canonical i <= j variables with the global sign tracked.

#include "soq/blocks.hpp"
#include "soq/diag.hpp"
#include "soq/poly.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace soq {

using BlockUnion = std::vector<Block>;  // pair-set union of the parts

bool union_contains_pair(const BlockUnion& u, int i, int j);

struct GoodNode {
    enum class Kind { base, split };
    Kind kind = Kind::base;
    Mask X = 0;

    // base
    std::optional<Block> B;
    std::vector<BlockUnion> D;  // one union per generator slot (2g entries)

    // split
    Mask inner = 0;
    Mask outer = 0;
    std::shared_ptr<const GoodNode> child;
};

struct SectionEmission {
    Sign sign;
    int i;
    int j;
};

struct GoodCollection {
    int g = 1;
    Mask X = 0;
    std::vector<std::vector<SectionEmission>> slots;  // size 2g
    std::shared_ptr<const GoodNode> provenance;
};

GoodCollection q_n(Mask X, const std::optional<Block>& B, const std::vector<BlockUnion>& D,
                   int g);

// child lives over its own X (the inner set); outer must be disjoint.
GoodCollection split_collection(const GoodCollection& child, Mask outer);

// Forgets slots and generator labels: the product of the emitted variables.
Monomial alpha(const GoodCollection& c);

struct GoodMonomial {
    Monomial mono;
    GoodCollection coll;
};

struct EnumCaps {
    int max_blocks_per_slot = 1;
    int max_split_depth = 1;
};

// Deterministic enumeration over the ambient set X, deduplicated by the
// normal form of the (sign-normalized) monomial.
std::vector<GoodMonomial> enumerate_good_over(Mask X, int g, const EnumCaps& caps);
inline std::vector<GoodMonomial> enumerate_good(int n, int g, const EnumCaps& caps) {
    Mask X = 0;
    for (int i = 1; i <= n; ++i) X |= Mask(1) << i;
    return enumerate_good_over(X, g, caps);
}

}  // namespace soq
