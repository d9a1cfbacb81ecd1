#include "soq/blocks.hpp"

#include <stdexcept>

namespace soq {

std::vector<int> mask_to_indices(Mask m) {
    std::vector<int> out;
    for (int i = 0; i < 64; ++i)
        if (mask_has(m, i)) out.push_back(i);
    return out;
}

Mask indices_to_mask(const std::vector<int>& xs) {
    Mask m = 0;
    for (int x : xs) {
        if (x < 0 || x >= 64) throw std::invalid_argument("index out of range for mask");
        m |= Mask(1) << x;
    }
    return m;
}

int eps_block(const Block& b, int i, int j) {
    if (!mask_has(b.X, i) || !mask_has(b.X, j)) throw std::invalid_argument("index outside block ambient set");
    return mask_has(b.V, i) == mask_has(b.V, j) ? -1 : +1;
}

int eps_side(const Block& b, int i) {
    if (!mask_has(b.X, i)) throw std::invalid_argument("index outside block ambient set");
    return mask_has(b.V, i) ? +1 : -1;
}

std::vector<std::pair<int, int>> block_pairs(const Block& b) {
    std::vector<std::pair<int, int>> out;
    for (int i : mask_to_indices(b.V))
        for (int j : mask_to_indices(b.Vc())) out.emplace_back(i, j);
    return out;
}

bool block_contains_pair(const Block& b, int i, int j) {
    return mask_has(b.V, i) && mask_has(b.Vc(), j);
}

std::vector<Block> enumerate_blocks(Mask X) {
    std::vector<Block> out;
    const auto idx = mask_to_indices(X);
    const int n = static_cast<int>(idx.size());
    for (Mask s = 1; s + 1 < (Mask(1) << n); ++s) {
        Mask V = 0;
        for (int b = 0; b < n; ++b)
            if ((s >> b) & 1u) V |= Mask(1) << idx[b];
        out.push_back(Block{V, X});
    }
    return out;
}

std::optional<Block> sym_diff(const Block& B, const Block& C) {
    if (B.X != C.X) throw std::invalid_argument("sym_diff needs a common ambient set");
    if (!B.valid() || !C.valid()) throw std::invalid_argument("invalid block");
    const Mask V = (B.V & C.V) | (B.Vc() & C.Vc());
    if (V == 0 || V == B.X) return std::nullopt;  // partitions agree or oppose
    return Block{V, B.X};
}

std::optional<Block> restrict_block(const Block& B, int z) {
    if (!mask_has(B.X, z)) throw std::invalid_argument("z outside ambient set");
    const Mask zbit = Mask(1) << z;
    Block r{B.V & ~zbit, B.X & ~zbit};
    if (!r.valid()) return std::nullopt;
    return r;
}

Block extend_through_z(const Block& B, const Block& C, int z) {
    if (!B.valid() || !C.valid()) throw std::invalid_argument("invalid block");
    const Mask zbit = Mask(1) << z;
    if (B.X & zbit) throw std::invalid_argument("B must avoid z");
    if (C.X != (B.Vc() | zbit)) throw std::invalid_argument("C must live on B.Vc u {z}");
    const Mask S = mask_has(C.V, z) ? C.V : C.Vc();  // side of C holding z
    Block D{B.V | S, B.X | zbit};
    if (!D.valid()) throw std::logic_error("degenerate extension");
    return D;
}

CombineResult combine_two_sides(const Block& B, const Block& C, const Block& E, int z) {
    if (!B.valid() || !C.valid() || !E.valid()) throw std::invalid_argument("invalid block");
    const Mask zbit = Mask(1) << z;
    if (B.X & zbit) throw std::invalid_argument("B must avoid z");
    if (C.X != (B.V | zbit)) throw std::invalid_argument("C must live on B.V u {z}");
    if (E.X != (B.Vc() | zbit)) throw std::invalid_argument("E must live on B.Vc u {z}");
    const bool z_in_CV = mask_has(C.V, z);
    Block Ep = E;
    bool used_bar = false;
    if (mask_has(Ep.V, z) != z_in_CV) {
        Ep = bar(Ep);
        used_bar = true;
    }
    Block A{C.V | Ep.V, B.X | zbit};
    if (!A.valid()) throw std::logic_error("degenerate combination");
    return CombineResult{A, used_bar};
}

}  // namespace soq
