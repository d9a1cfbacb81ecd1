#include "soq/good.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace soq {

bool union_contains_pair(const BlockUnion& u, int i, int j) {
    for (const Block& b : u)
        if (block_contains_pair(b, i, j)) return true;
    return false;
}

GoodCollection q_n(Mask X, const std::optional<Block>& B, const std::vector<BlockUnion>& D,
                   int g) {
    if (g < 1) throw std::invalid_argument("g must be positive");
    if (static_cast<int>(D.size()) != 2 * g) throw std::invalid_argument("D needs 2g entries");
    if (B && (!B->valid() || B->X != X)) throw std::invalid_argument("B must be a block over X");
    for (const auto& u : D)
        for (const Block& b : u)
            if (!b.valid() || b.X != X) throw std::invalid_argument("D parts must be blocks over X");

    GoodCollection c;
    c.g = g;
    c.X = X;
    const auto idx = mask_to_indices(X);
    for (int l = 0; l < 2 * g; ++l) {
        std::vector<SectionEmission> slot;
        for (int i : idx) {
            for (int j : idx) {
                const bool in_D =
                    union_contains_pair(D[l], i, j) || union_contains_pair(D[l], j, i);
                if (in_D && i < j) {
                    slot.push_back({Sign::plus, i, j});
                    slot.push_back({Sign::minus, i, j});
                } else if (in_D) {
                    // the i < j visit already emitted both signs for this pair
                } else {
                    const int eps = B ? eps_block(*B, i, j) : -1;
                    slot.push_back({eps > 0 ? Sign::minus : Sign::plus, i, j});
                }
            }
        }
        c.slots.push_back(std::move(slot));
    }
    auto node = std::make_shared<GoodNode>();
    node->kind = GoodNode::Kind::base;
    node->X = X;
    node->B = B;
    node->D = D;
    c.provenance = std::move(node);
    return c;
}

GoodCollection split_collection(const GoodCollection& child, Mask outer) {
    if (outer == 0 || (child.X & outer)) throw std::invalid_argument("outer must be disjoint and nonempty");
    GoodCollection c;
    c.g = child.g;
    c.X = child.X | outer;
    c.slots = child.slots;
    for (auto& slot : c.slots) {
        for (int i : mask_to_indices(child.X)) {
            for (int j : mask_to_indices(outer)) {
                slot.push_back({Sign::plus, i, j});
                slot.push_back({Sign::minus, i, j});
            }
        }
    }
    auto node = std::make_shared<GoodNode>();
    node->kind = GoodNode::Kind::split;
    node->X = c.X;
    node->inner = child.X;
    node->outer = outer;
    node->child = child.provenance;
    c.provenance = node;
    return c;
}

Monomial alpha(const GoodCollection& c) {
    Monomial m;
    for (const auto& slot : c.slots)
        for (const auto& e : slot) m.mul_var(e.sign, e.i, e.j);
    return m;
}

namespace {

// Distinct block unions of at most max_parts blocks over X, by pair set.
std::vector<BlockUnion> enumerate_unions(Mask X, int max_parts) {
    const auto blocks = enumerate_blocks(X);
    std::vector<BlockUnion> out;
    std::set<std::set<std::pair<int, int>>> seen;
    std::vector<Block> cur;

    auto emit = [&] {
        std::set<std::pair<int, int>> pairset;
        for (const Block& b : cur)
            for (auto pr : block_pairs(b)) pairset.insert(pr);
        if (seen.insert(pairset).second) out.push_back(cur);
    };
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        emit();
        if (static_cast<int>(cur.size()) == max_parts) return;
        for (std::size_t k = from; k < blocks.size(); ++k) {
            cur.push_back(blocks[k]);
            rec(k + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

void enumerate_over(Mask X, int g, const EnumCaps& caps, int depth,
                    std::vector<GoodCollection>& out) {
    const auto blocks = enumerate_blocks(X);
    const auto unions = enumerate_unions(X, caps.max_blocks_per_slot);

    // Base collections: slots commute, so D-tuples are taken non-decreasing.
    std::vector<std::size_t> pick(2 * g, 0);
    std::vector<std::optional<Block>> bchoices;
    bchoices.emplace_back(std::nullopt);
    for (const Block& b : blocks) bchoices.emplace_back(b);
    std::function<void(int, std::size_t, const std::optional<Block>&)> rec_tuple =
        [&](int slot, std::size_t from, const std::optional<Block>& B) {
            if (slot == 2 * g) {
                std::vector<BlockUnion> D;
                for (std::size_t u : pick) D.push_back(unions[u]);
                out.push_back(q_n(X, B, D, g));
                return;
            }
            for (std::size_t u = from; u < unions.size(); ++u) {
                pick[slot] = u;
                rec_tuple(slot + 1, u, B);
            }
        };
    for (const auto& B : bchoices) rec_tuple(0, 0, B);

    // Split collections.
    if (depth < caps.max_split_depth && mask_size(X) >= 2) {
        const auto idx = mask_to_indices(X);
        const int n = static_cast<int>(idx.size());
        for (Mask s = 1; s + 1 < (Mask(1) << n); ++s) {
            Mask inner = 0;
            for (int b = 0; b < n; ++b)
                if ((s >> b) & 1u) inner |= Mask(1) << idx[b];
            std::vector<GoodCollection> children;
            enumerate_over(inner, g, caps, depth + 1, children);
            for (auto& ch : children) out.push_back(split_collection(ch, X & ~inner));
        }
    }
}

}  // namespace

std::vector<GoodMonomial> enumerate_good_over(Mask X, int g, const EnumCaps& caps) {
    std::vector<GoodCollection> colls;
    enumerate_over(X, g, caps, 0, colls);
    std::vector<GoodMonomial> out;
    std::set<DiagonalPolynomial> seen;
    for (auto& c : colls) {
        Monomial m = alpha(c);
        Monomial key = m;
        key.coeff = 1;  // dedupe up to the folding sign
        if (seen.insert(normal_form(key)).second) out.push_back(GoodMonomial{m, std::move(c)});
    }
    return out;
}

}  // namespace soq
