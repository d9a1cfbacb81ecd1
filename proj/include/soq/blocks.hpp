#pragma once

// Block calculus on a finite index set X (natural numbers < 64, held as
// bitmasks). A block is an ordered bipartition B = V x V^c of X with V a
// proper nonempty subset; its pair set is { (i,j) : i in V, j in V^c }.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace soq {

using Mask = std::uint64_t;

inline bool mask_has(Mask m, int i) { return (m >> i) & 1u; }
inline int mask_size(Mask m) { return __builtin_popcountll(m); }
std::vector<int> mask_to_indices(Mask m);
Mask indices_to_mask(const std::vector<int>& xs);

struct Block {
    Mask V = 0;  // first side
    Mask X = 0;  // ambient index set

    Mask Vc() const { return X & ~V; }
    bool valid() const { return (V & ~X) == 0 && V != 0 && V != X; }
    int pair_count() const { return mask_size(V) * mask_size(Vc()); }

    friend bool operator==(const Block&, const Block&) = default;
    friend auto operator<=>(const Block& a, const Block& b) {
        if (auto c = a.X <=> b.X; c != 0) return c;
        return a.V <=> b.V;
    }
};

inline Block bar(const Block& b) { return Block{b.Vc(), b.X}; }

// +1 if i and j lie on opposite sides of B, -1 if on the same side.
int eps_block(const Block& b, int i, int j);
// +1 if i in V, -1 otherwise.
int eps_side(const Block& b, int i);

// Ordered pair set V x V^c, lexicographic.
std::vector<std::pair<int, int>> block_pairs(const Block& b);
bool block_contains_pair(const Block& b, int i, int j);

// All 2^|X| - 2 blocks, by ascending V mask.
std::vector<Block> enumerate_blocks(Mask X);

// Up-to-bar "symmetric difference": the block D with D u bar(D) covering the
// pairs crossing exactly one of B, C. Degenerate (the two partitions agree or
// are opposite) yields nullopt; that is a signal, not an error.
std::optional<Block> sym_diff(const Block& B, const Block& C);

// Restriction to X \ {z}; nullopt when a side becomes empty.
std::optional<Block> restrict_block(const Block& B, int z);

// B is a block over X \ {z} and C a block over B.Vc u {z}. Returns a block D
// over X whose pair set lies inside B u C u bar(C): D = (B.V u S) x T where S
// is the side of C containing z and T the other side.
Block extend_through_z(const Block& B, const Block& C, int z);

// B over X \ {z}, C over B.V u {z}, E over B.Vc u {z}. Produces a block A
// over X with C u E' inside A inside C u E' u B u bar(B), where E' is E or
// bar(E) depending on which side of E holds z. used_bar_E reports the case.
struct CombineResult {
    Block A;
    bool used_bar_E;
};
CombineResult combine_two_sides(const Block& B, const Block& C, const Block& E, int z);

}  // namespace soq
