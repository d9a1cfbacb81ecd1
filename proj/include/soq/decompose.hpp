#pragma once

// Constructive decomposition of high-degree classes into multiples of good
// monomials, with exact certificates. Every lemma-level operation checks its
// own output against the input by normal form and throws TheoremViolation on
// mismatch or when a guaranteed branch is unavailable; results are never
// silently patched.

#include "soq/blocks.hpp"
#include "soq/diag.hpp"
#include "soq/good.hpp"
#include "soq/poly.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace soq {

struct TheoremViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LemmaStep {
    std::string rule;
    std::string detail;
};
using LemmaTrace = std::vector<LemmaStep>;

// ---- products used as decomposition targets ----------------------------

// prod over ordered (i,j) in B of (y^sign_ij)^a, folded. eps=+1 gives the
// crossing-sign variable of C at each pair.
Monomial block_sign_product(const Block& B, Sign sign, int a);
Monomial block_eps_product(const Block& B, const std::optional<Block>& C, int sign_of_eps, int a);
// prod over (i,j) in B of (y+ij y-ij)^a.
Monomial block_both_product(const Block& B, int a);

// The sign of the crossing variable of C at (i,j): y^{eps_C(i,j)}_ij, where
// the empty collection of zeros has eps = -1 everywhere.
Sign eps_sign(const std::optional<Block>& C, int i, int j);
int eps_of(const std::optional<Block>& C, int i, int j);
int side_of(const std::optional<Block>& C, int i);  // +1 on V, -1 off

// ---- certified graded linear solves ------------------------------------

// For homogeneous p in Q[Y-(X)] with deg p >= m(m-1)a/2 - m + 2 (m = |X|),
// finds per-block cofactors phi_B with [p] = sum_B phi_B prod_B (y-ij)^a.
std::vector<std::pair<Block, Polynomial>> decompose_su_style(const Polynomial& p, Mask X, int a);

// The block-flip ring involution f_B.
Polynomial flip_iso(const Polynomial& p, const Block& B);

// Flipped variant: p in Q[Y^-_C(X)] (crossing-sign variables of C), same
// bound; [p] = sum_B phi_B prod_B (y^{eps_C}_ij)^a. C = nullopt is the plain
// case. Implemented by conjugating with flip_iso.
std::vector<std::pair<Block, Polynomial>> decompose_flipped(const Polynomial& p,
                                                            const std::optional<Block>& C, Mask X,
                                                            int a);

// ---- branch predicates (pigeonhole lemmas) ------------------------------

enum class BranchChoice { first, second };
// deg p_h >= 2gh(h+1)-h  or  deg p_w >= 2gw(w+1)-w
BranchChoice branch_two_sided_independent(int deg_h, int deg_w, int h, int w, int g);
// deg q >= 2g  or  deg r >= n(n-1)g-n+2
BranchChoice branch_scalar_or_solvable(int deg_q, int deg_r, int n, int g);
// deg q >= 2gw(w+1)-w  or  deg r >= h(h+1)g-(h+1)+2
BranchChoice branch_independent_or_solvable(int deg_q, int deg_r, int h, int w, int g);
// deg p_w >= 2gw^2 + (w-1)(w-2)/2  or  deg p_h >= 2gh^2 + (h-1)(h-2)/2
BranchChoice branch_square_split(int deg_w, int deg_h, int h, int w, int g);

// ---- structural steps ----------------------------------------------------

// The index z in X maximizing the z-free degree of the monomial (smallest
// index on ties). Checks the guaranteed bound deg q_z >= 2g(m-1)(m-2)-m+2.
int select_z(const Monomial& p, Mask X, int g);
// Splits a monomial into (z-free part, part touching z).
std::pair<Monomial, Monomial> split_by_z(const Monomial& p, int z);

// z-row reduction towards the block pattern of C extended by z on the
// complement side (C may be empty). Each output term q*r has q over the
// crossing-sign variables of the extended pattern and r over the z-row
// generators u_i = y^{-side(i)}_iz; either deg q >= m(m-1)g-m+2 (q_big) or
// r is divisible by prod_i u_i^{2g}.
struct ZrowTerm {
    Monomial q;
    Monomial r;
    bool q_big = false;
};
std::vector<ZrowTerm> zrow_reduce(const Monomial& p, const std::optional<Block>& C, Mask X, int z,
                                  int g);

// Change of generators isolating the diagonal y+ii: output terms are
// (y+ii)^k * r with r over the crossing-sign variables of C.
std::vector<std::pair<int, Monomial>> change_generators_diag(const Monomial& p,
                                                             const std::optional<Block>& C, Mask X,
                                                             int i);

// ---- the main reductions -------------------------------------------------

// [p] = sum(family1: cof * prod_B (y+ y-)^{2g})
//     + sum(family2: cof * prod_C (y-)^{2g} * prod_{i<j not in C u bar C} (y+)^{2g})
struct CoreTerm {
    enum class Family { pairs, pattern } family;
    std::optional<Block> block;  // pairs: the full block; pattern: C (nullopt = empty)
    Monomial cofactor;
};
std::vector<CoreTerm> core_reduce(const Monomial& p, Mask X, int g);

// Iterative rewrite of a monomial over the crossing-sign variables of C into
// the two families of the generator-tracked form. Counters are recorded in
// the trace (block count b never decreases; (deg(alpha beta), -d) advances).
struct ProcedureOutput {
    // family 1: theta * prod_B (y^{eps_C})^{2g}
    std::vector<std::pair<Block, Monomial>> family1;
    // family 2: phi * prod_m [ prod_{D_m} y^{eps_C} * prod_{i<j not in D_m u bar} y^{-eps_C} ]
    std::vector<std::pair<std::vector<BlockUnion>, Monomial>> family2;
    LemmaTrace trace;
};
ProcedureOutput procedure_reduce(const Monomial& p, const std::optional<Block>& C, Mask X, int g);

// ---- full decomposition ----------------------------------------------------

struct DecompTerm {
    Polynomial theta;  // homogeneous cofactor
    GoodMonomial good;
};
struct Decomposition {
    std::vector<DecompTerm> terms;
    LemmaTrace trace;
};

// For a monomial of degree >= 2gn^2 + (n-1)(n-2)/2 over X (|X| = n), writes
// [p] as a combination of good monomials with homogeneous cofactors.
Decomposition decompose_full(const Monomial& p, Mask X, int g);

// The explicit rank-2 decomposition onto the basis z1, z2, y+-m.
struct So5Basis {
    enum class Kind { z1, z2, y_plus, y_minus } kind;
    int m = 0;  // for y_plus / y_minus
    int g = 1;
    Monomial monomial() const;  // over indices {1,2}
    std::string name() const;
};
struct So5Term {
    Monomial multiplier;
    So5Basis basis;
};
std::vector<So5Term> so5_decompose(const Monomial& p, int g);

}  // namespace soq
