#include "soq/decompose.hpp"

#include "solver.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

// Every reduction below is linear in its cofactor, so the internal pipeline
// carries grouped polynomial cofactors per structural object (block, pattern,
// exponent) and performs one graded solve per group. Recursive reductions on
// unit monomials are memoized globally; all identities are still checked by
// normal form at every grouped call.

namespace soq {

namespace {

const Rational kHalf(1, 2);

Polynomial poly_pow(const Polynomial& base, int e) {
    Polynomial out = Polynomial::constant(1);
    for (int t = 0; t < e; ++t) out *= base;
    return out;
}

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
    return r;
}

void require_vars_within(const Monomial& p, Mask X, const char* ctx) {
    for (const auto& [v, e] : p.exps) {
        (void)e;
        if (!mask_has(X, v.i) || !mask_has(X, v.j))
            throw std::invalid_argument(std::string(ctx) + ": variable outside the index set");
    }
}

Monomial must_divide(const Monomial& num, const Monomial& den, const char* ctx) {
    auto q = num.divide_by(den);
    if (!q)
        throw TheoremViolation(std::string(ctx) +
                               ": accumulated factors not divisible by the target product");
    return *q;
}

Polynomial poly_divide(const Polynomial& p, const Monomial& den, const char* ctx) {
    Polynomial out;
    for (const Monomial& m : p.monomials()) out.add_term(must_divide(m, den, ctx));
    return out;
}

void check_equal(const Polynomial& got, const Polynomial& want, const char* ctx) {
    if (!equal_in_R(got, want))
        throw TheoremViolation(std::string(ctx) + ": output does not reproduce the input class");
}

// Replaces every variable the predicate rejects by (D(i) + sigma D(j)) / 2,
// where D(t) expresses the diagonal class d_t in the kept generators. Valid
// for diagonals too (i == j with sign +).
Polynomial substitute_via_d(const Polynomial& p, const std::function<bool(const VarId&)>& keep,
                            const std::function<Polynomial(int)>& D) {
    return p.substitute([&](const VarId& v) -> std::optional<Polynomial> {
        if (keep(v)) return std::nullopt;
        Polynomial e = D(v.i);
        if (v.sign == Sign::plus)
            e += D(v.j);
        else
            e -= D(v.j);
        e *= kHalf;
        return e;
    });
}

// prod over i < j in X of (y^{-eps_C}_ij)^a: the off-diagonal part of the
// pattern base monomial of C.
Monomial pattern_product(const std::optional<Block>& C, Mask X, int a) {
    Monomial m;
    const auto idx = mask_to_indices(X);
    for (std::size_t s = 0; s < idx.size(); ++s)
        for (std::size_t t = s + 1; t < idx.size(); ++t)
            m.mul_var(eps_of(C, idx[s], idx[t]) > 0 ? Sign::minus : Sign::plus, idx[s], idx[t], a);
    return m;
}

bool union_has_unordered(const BlockUnion& u, int i, int j) {
    return union_contains_pair(u, i, j) || union_contains_pair(u, j, i);
}

// prod over slots m of [ prod_{pairs of U_m} y^{eps_C} * prod_{other pairs} y^{-eps_C} ].
Monomial form_from_parts(const std::vector<BlockUnion>& parts, const std::optional<Block>& C,
                         Mask X) {
    Monomial m;
    const auto idx = mask_to_indices(X);
    for (const BlockUnion& u : parts)
        for (std::size_t s = 0; s < idx.size(); ++s)
            for (std::size_t t = s + 1; t < idx.size(); ++t) {
                const int e = eps_of(C, idx[s], idx[t]);
                const int want = union_has_unordered(u, idx[s], idx[t]) ? e : -e;
                m.mul_var(want > 0 ? Sign::plus : Sign::minus, idx[s], idx[t]);
            }
    return m;
}

void mul_canonical(Monomial& m, const VarId& v, int e) {
    if (e > 0) m.exps[v] += e;
}

// Shared memo table; recursive builds run unlocked, so a value may be
// computed twice but is only stored once.
template <class K, class V>
class Memo {
  public:
    std::shared_ptr<const V> find(const K& k) {
        std::scoped_lock lock(mu_);
        auto it = map_.find(k);
        return it == map_.end() ? nullptr : it->second;
    }
    std::shared_ptr<const V> store(const K& k, V v) {
        std::scoped_lock lock(mu_);
        auto [it, fresh] = map_.emplace(k, nullptr);
        if (fresh) it->second = std::make_shared<const V>(std::move(v));
        return it->second;
    }

  private:
    std::mutex mu_;
    std::map<K, std::shared_ptr<const V>> map_;
};

}  // namespace

// ---- products and signs ---------------------------------------------------

Monomial block_sign_product(const Block& B, Sign sign, int a) {
    Monomial m;
    for (auto [i, j] : block_pairs(B)) m.mul_var(sign, i, j, a);
    return m;
}

Monomial block_eps_product(const Block& B, const std::optional<Block>& C, int sign_of_eps, int a) {
    Monomial m;
    for (auto [i, j] : block_pairs(B)) {
        const int s = eps_of(C, i, j) * sign_of_eps;
        m.mul_var(s > 0 ? Sign::plus : Sign::minus, i, j, a);
    }
    return m;
}

Monomial block_both_product(const Block& B, int a) {
    Monomial m;
    for (auto [i, j] : block_pairs(B)) {
        m.mul_var(Sign::plus, i, j, a);
        m.mul_var(Sign::minus, i, j, a);
    }
    return m;
}

int side_of(const std::optional<Block>& C, int i) {
    return C && mask_has(C->V, i) ? +1 : -1;
}

int eps_of(const std::optional<Block>& C, int i, int j) {
    return side_of(C, i) == side_of(C, j) ? -1 : +1;
}

Sign eps_sign(const std::optional<Block>& C, int i, int j) {
    return eps_of(C, i, j) > 0 ? Sign::plus : Sign::minus;
}

// ---- certified graded solves ----------------------------------------------

namespace {

struct SuBasis {
    std::vector<Block> blocks;
    std::vector<std::pair<std::size_t, Monomial>> cols;  // (block index, mu)
    SpanSolver solver;
};

void monos_of_degree(const std::vector<VarId>& vars, std::size_t k, int d, Monomial& cur,
                     const std::function<void(const Monomial&)>& emit) {
    if (k + 1 == vars.size()) {
        Monomial m = cur;
        mul_canonical(m, vars[k], d);
        emit(m);
        return;
    }
    for (int e = 0; e <= d; ++e) {
        Monomial m = cur;
        mul_canonical(m, vars[k], e);
        monos_of_degree(vars, k + 1, d - e, m, emit);
    }
}

const SuBasis& su_basis(Mask X, int a, int d) {
    static std::mutex mu;
    static std::map<std::tuple<Mask, int, int>, std::unique_ptr<SuBasis>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[{X, a, d}];
    if (slot) return *slot;

    auto basis = std::make_unique<SuBasis>();
    basis->blocks = enumerate_blocks(X);
    const int m = mask_size(X);
    const auto idx = mask_to_indices(X);
    std::vector<VarId> vars;
    for (std::size_t s = 0; s < idx.size(); ++s)
        for (std::size_t t = s + 1; t < idx.size(); ++t)
            vars.push_back(VarId{Sign::minus, idx[s], idx[t]});

    // Every normal form of a monomial over the y- variables is a polynomial
    // in the pairwise differences of the d_i, so the reachable space has the
    // dimension of degree-d polynomials in m-1 variables.
    const long long full = binomial(d + m - 2, m - 2);
    std::size_t colid = 0;
    for (std::size_t bi = 0; bi < basis->blocks.size(); ++bi) {
        const Block& B = basis->blocks[bi];
        const int rest = d - a * B.pair_count();
        if (rest < 0) continue;
        const Monomial base = block_sign_product(B, Sign::minus, a);
        Monomial cur;
        monos_of_degree(vars, 0, rest, cur, [&](const Monomial& mono) {
            if (basis->solver.rank() >= static_cast<std::size_t>(full)) return;
            if (basis->solver.add(normal_form(mono * base), colid))
                basis->cols.resize(colid + 1);
            if (basis->cols.size() == colid + 1) basis->cols[colid] = {bi, mono};
            ++colid;
        });
        if (basis->solver.rank() >= static_cast<std::size_t>(full)) break;
    }
    return *(slot = std::move(basis));
}

}  // namespace

std::vector<std::pair<Block, Polynomial>> decompose_su_style(const Polynomial& p, Mask X, int a) {
    const int m = mask_size(X);
    if (m < 2) throw std::invalid_argument("decompose_su_style: need at least two indices");
    if (p.is_zero() || !p.is_homogeneous())
        throw std::invalid_argument("decompose_su_style: need a nonzero homogeneous input");
    for (const auto& [e, c] : p.terms) {
        (void)c;
        for (const auto& [v, k] : e) {
            (void)k;
            if (v.sign != Sign::minus || !mask_has(X, v.i) || !mask_has(X, v.j))
                throw std::invalid_argument(
                    "decompose_su_style: input not over the y- variables of X");
        }
    }
    const int d = p.degree();
    if (d < m * (m - 1) * a / 2 - m + 2)
        throw TheoremViolation("decompose_su_style: degree below the solvable threshold");

    const SuBasis& basis = su_basis(X, a, d);
    auto comb = basis.solver.solve(normal_form(p));
    if (!comb)
        throw TheoremViolation("decompose_su_style: class not in the span of the block multiples");

    std::map<std::size_t, Polynomial> per_block;
    for (const auto& [col, c] : *comb) {
        Monomial t = basis.cols[col].second;
        t.coeff *= c;
        per_block[basis.cols[col].first].add_term(t);
    }
    std::vector<std::pair<Block, Polynomial>> out;
    Polynomial acc;
    for (auto& [bi, phi] : per_block) {
        if (phi.is_zero()) continue;
        acc += phi * Polynomial(block_sign_product(basis.blocks[bi], Sign::minus, a));
        out.emplace_back(basis.blocks[bi], std::move(phi));
    }
    check_equal(acc, p, "decompose_su_style");
    return out;
}

Polynomial flip_iso(const Polynomial& p, const Block& B) {
    return p.substitute([&](const VarId& v) -> std::optional<Polynomial> {
        const bool iv = mask_has(B.V, v.i);
        const bool jv = mask_has(B.V, v.j);
        if (!iv && !jv) return std::nullopt;
        if (iv && jv) return Polynomial::var(v.sign, v.i, v.j) * Rational(-1);
        Polynomial q = Polynomial::var(opposite(v.sign), v.i, v.j);
        if (iv) q *= Rational(-1);
        return q;
    });
}

std::vector<std::pair<Block, Polynomial>> decompose_flipped(const Polynomial& p,
                                                            const std::optional<Block>& C, Mask X,
                                                            int a) {
    if (!C) return decompose_su_style(p, X, a);
    auto res = decompose_su_style(flip_iso(p, *C), X, a);
    std::vector<std::pair<Block, Polynomial>> out;
    Polynomial acc;
    for (auto& [B, phi] : res) {
        Polynomial phi2 = flip_iso(phi, *C);
        const Monomial base = block_eps_product(B, C, +1, a);
        const Polynomial fb = flip_iso(Polynomial(block_sign_product(B, Sign::minus, a)), *C);
        const Monomial fbm = fb.monomials().front();
        auto ratio = fbm.divide_by(base);
        if (!ratio || !ratio->exps.empty())
            throw std::logic_error("decompose_flipped: flipped base is not a multiple of the eps base");
        phi2 *= ratio->coeff;
        acc += phi2 * Polynomial(base);
        out.emplace_back(B, std::move(phi2));
    }
    check_equal(acc, p, "decompose_flipped");
    return out;
}

// ---- branch predicates ------------------------------------------------------

BranchChoice branch_two_sided_independent(int deg_h, int deg_w, int h, int w, int g) {
    if (deg_h >= 2 * g * h * (h + 1) - h) return BranchChoice::first;
    if (deg_w >= 2 * g * w * (w + 1) - w) return BranchChoice::second;
    throw TheoremViolation("branch_two_sided_independent: neither factor reaches its guaranteed degree");
}

BranchChoice branch_scalar_or_solvable(int deg_q, int deg_r, int n, int g) {
    if (deg_q >= 2 * g) return BranchChoice::first;
    if (deg_r >= n * (n - 1) * g - n + 2) return BranchChoice::second;
    throw TheoremViolation("branch_scalar_or_solvable: neither factor reaches its guaranteed degree");
}

BranchChoice branch_independent_or_solvable(int deg_q, int deg_r, int h, int w, int g) {
    if (deg_q >= 2 * g * w * (w + 1) - w) return BranchChoice::first;
    if (deg_r >= h * (h + 1) * g - (h + 1) + 2) return BranchChoice::second;
    throw TheoremViolation("branch_independent_or_solvable: neither factor reaches its guaranteed degree");
}

BranchChoice branch_square_split(int deg_w, int deg_h, int h, int w, int g) {
    if (deg_w >= 2 * g * w * w + (w - 1) * (w - 2) / 2) return BranchChoice::first;
    if (deg_h >= 2 * g * h * h + (h - 1) * (h - 2) / 2) return BranchChoice::second;
    throw TheoremViolation("branch_square_split: neither factor reaches its guaranteed degree");
}

// ---- structural steps -------------------------------------------------------

int select_z(const Monomial& p, Mask X, int g) {
    const int m = mask_size(X);
    int best = -1, best_deg = -1;
    for (int z : mask_to_indices(X)) {
        int deg = 0;
        for (const auto& [v, e] : p.exps)
            if (v.i != z && v.j != z) deg += e;
        if (deg > best_deg) {
            best = z;
            best_deg = deg;
        }
    }
    if (best_deg < 2 * g * (m - 1) * (m - 2) - m + 2)
        throw TheoremViolation("select_z: no index leaves a large enough remainder");
    return best;
}

std::pair<Monomial, Monomial> split_by_z(const Monomial& p, int z) {
    Monomial q(p.coeff), r;
    for (const auto& [v, e] : p.exps)
        mul_canonical(v.i == z || v.j == z ? r : q, v, e);
    return {q, r};
}

// ---- z-row reduction ----------------------------------------------------------

namespace {

struct ZrowGroup {
    Monomial r;    // z-row part, divisible by the stage prefix
    Polynomial q;  // summed cofactors sharing r
    bool q_big;
};

std::vector<ZrowGroup> zrow_grouped(const Polynomial& p, const std::optional<Block>& C, Mask X,
                                    int z, int g) {
    const Mask zbit = Mask(1) << z;
    if (!mask_has(X, z)) throw std::invalid_argument("zrow_reduce: z not in X");
    if (C && (!C->valid() || C->X != (X & ~zbit)))
        throw std::invalid_argument("zrow_reduce: C must be a block over X minus z");
    const Mask V = C ? C->V : 0;
    const auto xs = mask_to_indices(X & ~zbit);
    const int m = mask_size(X);
    const int qbound = m * (m - 1) * g - m + 2;

    // Sides of the z-extended pattern (z joins the complement of V).
    auto side = [&](int t) { return mask_has(V, t) ? +1 : -1; };
    auto epsx = [&](int i, int j) { return side(i) == side(j) ? -1 : +1; };
    auto u_vid = [&](int t) {
        return fold_var(side(t) > 0 ? Sign::minus : Sign::plus, t, z).first;
    };

    std::vector<ZrowGroup> out;
    Monomial prefix;
    Polynomial cur = p;
    for (std::size_t k = 0; k < xs.size() && !cur.is_zero(); ++k) {
        const int xk = xs[k];
        const VarId uk = u_vid(xk);
        // Generators at this stage: the crossing-sign variables of the
        // extended pattern plus the opposite z-row variable of x_k.
        auto keep = [&](const VarId& v) {
            if (v == uk) return true;
            return v.i != v.j && v.sign == (epsx(v.i, v.j) > 0 ? Sign::plus : Sign::minus);
        };
        const Polynomial U =
            Monomial().mul_var(side(xk) > 0 ? Sign::minus : Sign::plus, xk, z).as_poly();
        const Polynomial Vk =
            Monomial().mul_var(side(xk) > 0 ? Sign::plus : Sign::minus, xk, z).as_poly();
        const Polynomial Dxk = U + Vk;
        auto D = [&](int t) -> Polynomial {
            if (t == xk) return Dxk;
            if (t == z) return (Vk - U) * Rational(side(xk));
            const int e = epsx(t, xk);
            return Polynomial::var(e > 0 ? Sign::plus : Sign::minus, t, xk) * Rational(2) -
                   Dxk * Rational(e);
        };
        std::map<int, Polynomial> big_by_d, stop_by_d;
        Polynomial next;
        for (const Monomial& t : substitute_via_d(cur, keep, D).monomials()) {
            Monomial q = t;
            int dk = 0;
            if (auto jt = q.exps.find(uk); jt != q.exps.end()) {
                dk = jt->second;
                q.exps.erase(jt);
            }
            if (q.degree() >= qbound) {
                big_by_d[dk].add_term(q);
            } else if (dk < 2 * g) {
                throw TheoremViolation("zrow_reduce: small factor misses its z-row divisibility");
            } else if (k + 1 < xs.size()) {
                mul_canonical(q, uk, dk - 2 * g);
                next.add_term(q);
            } else {
                stop_by_d[dk].add_term(q);
            }
        }
        for (auto& [dk, qpoly] : big_by_d) {
            Monomial r = prefix;
            mul_canonical(r, uk, dk);
            out.push_back({r, std::move(qpoly), true});
        }
        for (auto& [dk, qpoly] : stop_by_d) {
            Monomial r = prefix;
            mul_canonical(r, uk, dk);
            out.push_back({r, std::move(qpoly), false});
        }
        mul_canonical(prefix, uk, 2 * g);
        cur = std::move(next);
    }
    Polynomial acc;
    for (const auto& grp : out) acc += grp.q * Polynomial(grp.r);
    check_equal(acc, p, "zrow_reduce");
    return out;
}

}  // namespace

std::vector<ZrowTerm> zrow_reduce(const Monomial& p, const std::optional<Block>& C, Mask X, int z,
                                  int g) {
    require_vars_within(p, X, "zrow_reduce");
    std::vector<ZrowTerm> out;
    for (const ZrowGroup& grp : zrow_grouped(p.as_poly(), C, X, z, g))
        for (const Monomial& q : grp.q.monomials()) out.push_back({q, grp.r, grp.q_big});
    return out;
}

// ---- diagonal change of generators --------------------------------------------

namespace {

std::map<int, Polynomial> change_generators_grouped(const Polynomial& p,
                                                    const std::optional<Block>& C, Mask X, int i) {
    if (!mask_has(X, i)) throw std::invalid_argument("change_generators_diag: i not in X");
    const VarId dii{Sign::plus, i, i};
    auto keep = [&](const VarId& v) {
        if (v == dii) return true;
        return v.i != v.j && v.sign == eps_sign(C, v.i, v.j);
    };
    const Polynomial Di = Polynomial::var(Sign::plus, i, i);
    auto D = [&](int t) -> Polynomial {
        if (t == i) return Di;
        const int e = eps_of(C, t, i);
        return Polynomial::var(e > 0 ? Sign::plus : Sign::minus, t, i) * Rational(2) -
               Di * Rational(e);
    };
    std::map<int, Polynomial> out;
    Polynomial acc;
    for (const Monomial& t : substitute_via_d(p, keep, D).monomials()) {
        Monomial r = t;
        int a = 0;
        if (auto jt = r.exps.find(dii); jt != r.exps.end()) {
            a = jt->second;
            r.exps.erase(jt);
        }
        out[a].add_term(r);
        Monomial full = r;
        mul_canonical(full, dii, a);
        acc.add_term(full);
    }
    check_equal(acc, p, "change_generators_diag");
    return out;
}

}  // namespace

std::vector<std::pair<int, Monomial>> change_generators_diag(const Monomial& p,
                                                             const std::optional<Block>& C, Mask X,
                                                             int i) {
    require_vars_within(p, X, "change_generators_diag");
    std::vector<std::pair<int, Monomial>> out;
    for (const auto& [a, rpoly] : change_generators_grouped(p.as_poly(), C, X, i))
        for (const Monomial& r : rpoly.monomials()) out.emplace_back(a, r);
    return out;
}

// ---- the main reduction -----------------------------------------------------

namespace {

struct TermKey {
    int family;  // 0 = pairs, 1 = pattern
    bool has_block;
    Block block;

    friend auto operator<=>(const TermKey&, const TermKey&) = default;
};

using Grouped = std::map<TermKey, Polynomial>;

TermKey key_pairs(const Block& B) { return {0, true, B}; }
TermKey key_pattern(const std::optional<Block>& C) {
    return {1, C.has_value(), C ? *C : Block{}};
}
std::optional<Block> key_opt(const TermKey& k) {
    return k.has_block ? std::optional<Block>(k.block) : std::nullopt;
}

void grouped_add(Grouped& out, const TermKey& key, const Polynomial& cof) {
    if (!cof.is_zero()) out[key] += cof;
}

Grouped core_grouped(const Polynomial& p, Mask X, int g);

const Grouped& core_memo(const ExpMap& exps, Mask X, int g) {
    static Memo<std::tuple<ExpMap, Mask, int>, Grouped> memo;
    const std::tuple<ExpMap, Mask, int> key{exps, X, g};
    if (auto hit = memo.find(key)) return *hit;
    Monomial m;
    m.exps = exps;
    return *memo.store(key, core_grouped(m.as_poly(), X, g));
}

// Factorization of a polynomial over amb (containing z) through the
// generators { crossing-sign variables of D } u { y+zz }: summed cofactors
// per power of y+zz.
std::map<int, Polynomial> diag_z_grouped(const Polynomial& chi, const std::optional<Block>& D,
                                         Mask amb, int z) {
    const VarId dzz{Sign::plus, z, z};
    auto keep = [&](const VarId& v) {
        if (v == dzz) return true;
        return v.i != v.j && v.sign == eps_sign(D, v.i, v.j);
    };
    const Polynomial Dz = Polynomial::var(Sign::plus, z, z);
    auto Dfun = [&](int t) -> Polynomial {
        if (t == z) return Dz;
        const int e = eps_of(D, t, z);
        return Polynomial::var(e > 0 ? Sign::plus : Sign::minus, t, z) * Rational(2) -
               Dz * Rational(e);
    };
    std::map<int, Polynomial> out;
    Polynomial acc;
    for (const Monomial& t : substitute_via_d(chi, keep, Dfun).monomials()) {
        Monomial a = t;
        int k = 0;
        if (auto jt = a.exps.find(dzz); jt != a.exps.end()) {
            k = jt->second;
            a.exps.erase(jt);
        }
        out[k].add_term(a);
        Monomial full = a;
        mul_canonical(full, dzz, k);
        acc.add_term(full);
    }
    check_equal(acc, chi, "diag_z_factorize");
    return out;
}

// Lifts a block found over one side (plus z) to a block over X, using the
// side-crossing block of Cb whose complement carries that side.
Block extend_ambient(const Block& Cb, const Block& blk, bool side_is_V, int z) {
    const Block B = side_is_V ? bar(Cb) : Cb;
    return extend_through_z(B, blk, z);
}

std::optional<Block> combine_patterns(const Block& Cb, const std::optional<Block>& D,
                                      const std::optional<Block>& F, bool inner_is_V, int z) {
    if (!D && !F) return std::nullopt;
    if (D && !F) return extend_ambient(Cb, *D, inner_is_V, z);
    if (!D && F) return extend_ambient(Cb, *F, !inner_is_V, z);
    const Block B = inner_is_V ? Cb : bar(Cb);
    return combine_two_sides(B, *D, *F, z).A;
}

void core_cross_stage(const Block& Cb, bool inner_is_V, const std::optional<Block>& Dp,
                    const Polynomial& chi, const Polynomial& outer_poly, Mask inner_amb,
                    Mask outer_amb, const Monomial& avail0, Mask X, int z, int g, Grouped& out);

// Family-1 feedback at the top level: Cb is a block over X minus z and cof
// the summed cofactors over X multiplying prod_Cb (y+ y-)^{2g}.
void core_pairs_stage(const Block& Cb, const Polynomial& cof, Mask X, int z, int g, Grouped& out) {
    const Mask Vm = Cb.V, Wm = Cb.Vc();
    const int h = mask_size(Vm), w = mask_size(Wm);
    const Mask zbit = Mask(1) << z;
    const Monomial avail0 = block_both_product(Cb, 2 * g);

    // Split every variable crossing the two sides through z:
    // y+ab = y+az + y-bz and y-ab = y-az - y-bz.
    const Polynomial split =
        cof.substitute([&](const VarId& v) -> std::optional<Polynomial> {
            const bool cross = (mask_has(Vm, v.i) && mask_has(Wm, v.j)) ||
                               (mask_has(Wm, v.i) && mask_has(Vm, v.j));
            if (!cross) return std::nullopt;
            if (v.sign == Sign::plus)
                return Monomial().mul_var(Sign::plus, v.i, z).as_poly() +
                       Monomial().mul_var(Sign::minus, v.j, z).as_poly();
            return Monomial().mul_var(Sign::minus, v.i, z).as_poly() -
                   Monomial().mul_var(Sign::minus, v.j, z).as_poly();
        });

    // Group by the chosen side and the inner factor; the outer factors sum.
    std::map<std::pair<bool, ExpMap>, Polynomial> groups;
    for (const Monomial& t : split.monomials()) {
        Monomial ph, pw;
        for (const auto& [v, e] : t.exps) {
            const Mask touched = (Mask(1) << v.i) | (Mask(1) << v.j);
            if ((touched & ~(Vm | zbit)) == 0)
                mul_canonical(ph, v, e);
            else if ((touched & ~(Wm | zbit)) == 0)
                mul_canonical(pw, v, e);
            else
                throw std::logic_error("core: unsplit crossing variable");
        }
        const bool inner_is_V =
            branch_two_sided_independent(ph.degree(), pw.degree(), h, w, g) == BranchChoice::first;
        Monomial outer = inner_is_V ? pw : ph;
        outer.coeff = t.coeff;
        groups[{inner_is_V, inner_is_V ? ph.exps : pw.exps}].add_term(outer);
    }
    for (const auto& [gk, outer_poly] : groups) {
        const bool inner_is_V = gk.first;
        const Mask inner_amb = (inner_is_V ? Vm : Wm) | zbit;
        const Mask outer_amb = (inner_is_V ? Wm : Vm) | zbit;
        for (const auto& [skey, scof] : core_memo(gk.second, inner_amb, g)) {
            if (skey.family == 0) {
                const Block A = extend_ambient(Cb, skey.block, inner_is_V, z);
                const Polynomial avail =
                    (scof * outer_poly) *
                    Polynomial(avail0 * block_both_product(skey.block, 2 * g));
                grouped_add(out, key_pairs(A),
                            poly_divide(avail, block_both_product(A, 2 * g), "core"));
            } else {
                core_cross_stage(Cb, inner_is_V, key_opt(skey), scof, outer_poly, inner_amb,
                               outer_amb, avail0, X, z, g, out);
            }
        }
    }
}

// An inner pattern Dp over one side (plus z): factor its cofactor through the
// z diagonal and resolve the interaction with the other side.
void core_cross_stage(const Block& Cb, bool inner_is_V, const std::optional<Block>& Dp,
                    const Polynomial& chi, const Polynomial& outer_poly, Mask inner_amb,
                    Mask outer_amb, const Monomial& avail0, Mask X, int z, int g, Grouped& out) {
    const Monomial pat_inner = pattern_product(Dp, inner_amb, 2 * g);
    const int h = mask_size(inner_amb) - 1;
    const int w = mask_size(outer_amb) - 1;
    for (const auto& [k, ain] : diag_z_grouped(chi, Dp, inner_amb, z)) {
        const int deg_aout = outer_poly.degree() + k;
        if (branch_independent_or_solvable(deg_aout, ain.degree(), h, w, g) == BranchChoice::first) {
            for (const Monomial& om : outer_poly.monomials()) {
                Monomial aout = om;
                aout.mul_var(Sign::plus, z, z, k);
                for (const auto& [skey, scof] : core_memo(aout.exps, outer_amb, g)) {
                    const Polynomial piece = scof * (ain * om.coeff);
                    if (skey.family == 0) {
                        const Block A = extend_ambient(Cb, skey.block, !inner_is_V, z);
                        const Polynomial avail =
                            piece *
                            Polynomial(avail0 * pat_inner *
                                       block_both_product(skey.block, 2 * g));
                        grouped_add(out, key_pairs(A),
                                    poly_divide(avail, block_both_product(A, 2 * g), "core"));
                    } else {
                        const auto F = key_opt(skey);
                        const auto A = combine_patterns(Cb, Dp, F, inner_is_V, z);
                        const Polynomial avail =
                            piece * Polynomial(avail0 * pat_inner *
                                               pattern_product(F, outer_amb, 2 * g));
                        grouped_add(out, key_pattern(A),
                                    poly_divide(avail, pattern_product(A, X, 2 * g), "core"));
                    }
                }
            }
        } else {
            for (const auto& [E, phi] : decompose_flipped(ain, Dp, inner_amb, 2 * g)) {
                const Block A = extend_ambient(Cb, E, inner_is_V, z);
                Monomial fixed = avail0 * pat_inner * block_eps_product(E, Dp, +1, 2 * g);
                fixed.mul_var(Sign::plus, z, z, k);
                const Polynomial avail = (phi * outer_poly) * Polynomial(fixed);
                grouped_add(out, key_pairs(A),
                            poly_divide(avail, block_both_product(A, 2 * g), "core"));
            }
        }
    }
}

// Family-2 feedback at the top level: Cp a pattern over X minus z.
void core_pattern_stage(const std::optional<Block>& Cp, const Polynomial& cof, Mask X, int z, int g,
                 Grouped& out) {
    const Mask zbit = Mask(1) << z;
    const Monomial avail0 = pattern_product(Cp, X & ~zbit, 2 * g);
    const std::optional<Block> Ct = Cp ? std::optional<Block>(Block{Cp->V, X}) : std::nullopt;
    for (const ZrowGroup& grp : zrow_grouped(cof, Cp, X, z, g)) {
        if (!grp.q_big) {
            const Polynomial avail = grp.q * Polynomial(avail0 * grp.r);
            grouped_add(out, key_pattern(Ct),
                        poly_divide(avail, pattern_product(Ct, X, 2 * g), "core"));
            continue;
        }
        for (const auto& [G, phi] : decompose_flipped(grp.q, Ct, X, 2 * g)) {
            const Polynomial avail =
                phi * Polynomial(avail0 * grp.r * block_eps_product(G, Ct, +1, 2 * g));
            if (auto Gr = restrict_block(G, z)) {
                core_pairs_stage(*Gr, poly_divide(avail, block_both_product(*Gr, 2 * g), "core"), X,
                            z, g, out);
            } else {
                // z alone on a side of G: absorb it into the pattern.
                const Block A{(Cp ? Cp->V : Mask(0)) | zbit, X};
                grouped_add(out, key_pattern(A),
                            poly_divide(avail, pattern_product(A, X, 2 * g), "core"));
            }
        }
    }
}

Grouped core_grouped(const Polynomial& p, Mask X, int g) {
    Grouped out;
    if (p.is_zero()) return out;
    const int m = mask_size(X);
    if (!p.is_homogeneous() || p.degree() < 2 * g * m * (m - 1) - m + 1)
        throw TheoremViolation("core_reduce: degree below the reduction threshold");

    if (m == 1) {
        grouped_add(out, key_pattern(std::nullopt), p);
    } else if (m == 2) {
        const auto idx = mask_to_indices(X);
        const int i = idx[0], j = idx[1];
        const Polynomial vi =
            Polynomial::var(Sign::plus, i, j) + Polynomial::var(Sign::minus, i, j);
        const Polynomial vj =
            Polynomial::var(Sign::plus, i, j) - Polynomial::var(Sign::minus, i, j);
        Polynomial P;
        for (const auto& [e, c] : normal_form(p).terms) {
            const int ei = e.count(i) ? e.at(i) : 0;
            const int ej = e.count(j) ? e.at(j) : 0;
            P += poly_pow(vi, ei) * poly_pow(vj, ej) * c;
        }
        for (const Monomial& t : P.monomials()) {
            const VarId vp{Sign::plus, i, j}, vm{Sign::minus, i, j};
            const int a = t.exps.count(vp) ? t.exps.at(vp) : 0;
            const int b = t.exps.count(vm) ? t.exps.at(vm) : 0;
            Monomial cof(t.coeff);
            if (b >= 2 * g) {
                mul_canonical(cof, vp, a);
                mul_canonical(cof, vm, b - 2 * g);
                grouped_add(out, key_pattern(Block{Mask(1) << i, X}), cof.as_poly());
            } else if (a >= 2 * g) {
                mul_canonical(cof, vp, a - 2 * g);
                mul_canonical(cof, vm, b);
                grouped_add(out, key_pattern(std::nullopt), cof.as_poly());
            } else {
                throw TheoremViolation("core_reduce: rank-one term misses both exponents");
            }
        }
    } else {
        // Recurse on the z-free part of each monomial; the feedback steps run
        // once per (z, structure) with summed cofactors.
        std::map<std::pair<int, TermKey>, Polynomial> feeds;
        for (const Monomial& mono : p.monomials()) {
            const int z = select_z(mono, X, g);
            const auto [qz, rz] = split_by_z(mono, z);
            Monomial scale = rz;
            scale.coeff = qz.coeff;
            for (const auto& [skey, scof] : core_memo(qz.exps, X & ~(Mask(1) << z), g))
                feeds[{z, skey}] += scof * Polynomial(scale);
        }
        for (const auto& [fk, cof] : feeds) {
            if (fk.second.family == 0)
                core_pairs_stage(fk.second.block, cof, X, fk.first, g, out);
            else
                core_pattern_stage(key_opt(fk.second), cof, X, fk.first, g, out);
        }
    }
    Polynomial acc;
    for (const auto& [key, cof] : out)
        acc += cof * Polynomial(key.family == 0 ? block_both_product(key.block, 2 * g)
                                                : pattern_product(key_opt(key), X, 2 * g));
    check_equal(acc, p, "core_reduce");
    return out;
}

}  // namespace

std::vector<CoreTerm> core_reduce(const Monomial& p, Mask X, int g) {
    if (p.is_zero()) return {};
    require_vars_within(p, X, "core_reduce");
    std::vector<CoreTerm> out;
    for (const auto& [key, cof] : core_grouped(p.as_poly(), X, g))
        for (const Monomial& m : cof.monomials())
            out.push_back({key.family == 0 ? CoreTerm::Family::pairs
                                           : CoreTerm::Family::pattern,
                           key.family == 0 ? std::optional<Block>(key.block) : key_opt(key), m});
    return out;
}

// ---- the iterative rewrite --------------------------------------------------

namespace {

// Rewrites the gamma factor y^{-eps_C(k,l)}_kl through the pair (i,j): each
// resulting variable is again a canonical generator, with the epsilon-signed
// ones destined for alpha and the rest for gamma.
Polynomial donor_rewrite(const std::optional<Block>& C, int i, int j, int k, int l) {
    auto sv = [&](int t) { return side_of(C, t); };
    // (d~a + d~b)/2 in the flipped coordinates d~t = side(t) d_t.
    auto tsum = [&](int a, int b) {
        Monomial m;
        m.mul_var(eps_of(C, a, b) > 0 ? Sign::minus : Sign::plus, a, b);
        m.coeff *= sv(a);
        return m.as_poly();
    };
    // (d~a - d~b)/2, a != b.
    auto tdiff = [&](int a, int b) {
        Monomial m;
        m.mul_var(eps_of(C, a, b) > 0 ? Sign::plus : Sign::minus, a, b);
        m.coeff *= sv(a);
        return m.as_poly();
    };
    Polynomial expr;
    if (k == i)
        expr = tsum(i, j) + tdiff(l, j);
    else if (l == j)
        expr = tdiff(k, i) + tsum(i, j);
    else if (k == j)
        expr = tsum(i, j) + tdiff(l, i);
    else if (l == i)
        expr = tdiff(k, j) + tsum(i, j);
    else
        expr = tdiff(k, i) + tsum(i, j) + tdiff(l, j);
    expr *= Rational(sv(k));

    Monomial donor;
    donor.mul_var(eps_of(C, k, l) > 0 ? Sign::minus : Sign::plus, k, l);
    check_equal(expr, donor.as_poly(), "donor_rewrite");
    return expr;
}

struct PState {
    Monomial alpha;  // epsilon-signed variables, holds the coefficient
    std::vector<std::set<std::pair<int, int>>> U;  // unordered pair sets per slot
    std::vector<BlockUnion> parts;                 // the same slots as block unions
    Monomial gamma;                                // wrong-sign and diagonal variables
};

Monomial beta_monomial(const std::optional<Block>& C,
                       const std::vector<std::set<std::pair<int, int>>>& U) {
    Monomial m;
    for (const auto& u : U)
        for (auto [i, j] : u) m.mul_var(eps_sign(C, i, j), i, j);
    return m;
}

}  // namespace

ProcedureOutput procedure_reduce(const Monomial& p, const std::optional<Block>& C, Mask X, int g) {
    require_vars_within(p, X, "procedure_reduce");
    if (C && (!C->valid() || C->X != X))
        throw std::invalid_argument("procedure_reduce: C must be a block over X");
    const int n = mask_size(X);
    if (p.degree() < 2 * g * n * n + (n - 1) * (n - 2) / 2 - 2 * g * n - n * (n - 1) * g)
        throw TheoremViolation("procedure_reduce: degree below the rewrite threshold");
    const auto idx = mask_to_indices(X);
    const int ab_bound = n * (n - 1) * g - n + 2;
    const int a_bound = n * (n - 1) / 2 - n + 2;

    ProcedureOutput out;
    auto note = [&](const char* rule, std::string detail) {
        if (out.trace.size() < 5000) out.trace.push_back({rule, std::move(detail)});
    };

    PState init;
    init.alpha.coeff = p.coeff;
    for (const auto& [v, e] : p.exps) {
        const bool eps_var = v.i != v.j && v.sign == eps_sign(C, v.i, v.j);
        mul_canonical(eps_var ? init.alpha : init.gamma, v, e);
    }

    std::vector<PState> work{std::move(init)};
    long long guard = 0;
    while (!work.empty()) {
        if (++guard > 5'000'000)
            throw TheoremViolation("procedure_reduce: termination guard tripped");
        PState st = std::move(work.back());
        work.pop_back();
        const Monomial beta = beta_monomial(C, st.U);

        // Step 1: the tracked part is already large enough on its own.
        if (st.alpha.degree() + beta.degree() >= ab_bound) {
            for (const auto& [B, theta] :
                 decompose_flipped((st.alpha * beta).as_poly(), C, X, 2 * g))
                for (const Monomial& tm : theta.monomials())
                    out.family1.emplace_back(B, tm * st.gamma);
            note("terminal-solve",
                 "deg(alpha beta) = " + std::to_string(st.alpha.degree() + beta.degree()));
            continue;
        }

        // Step 2: peel one epsilon-signed block out of alpha.
        if (st.alpha.degree() >= a_bound) {
            for (const auto& [B, phi] : decompose_flipped(st.alpha.as_poly(), C, X, 1)) {
                std::set<std::pair<int, int>> bp;
                for (auto [i, j] : block_pairs(B)) bp.insert({std::min(i, j), std::max(i, j)});
                // The block product folds y-_ji to -y-_ij, while the slot
                // bookkeeping stores index-ordered variables; absorb the
                // folding sign into the tracked coefficient.
                const Rational fold_sign = block_eps_product(B, C, +1, 1).coeff;
                for (const Monomial& pm : phi.monomials()) {
                    PState nx = st;
                    nx.alpha = pm;
                    if (static_cast<int>(nx.U.size()) < 2 * g) {
                        nx.alpha.coeff *= fold_sign;
                        nx.U.push_back(bp);
                        nx.parts.push_back({B});
                        note("new-slot", "");
                        work.push_back(std::move(nx));
                        continue;
                    }
                    std::size_t mi = nx.U.size();
                    for (std::size_t t = 0; t < nx.U.size(); ++t)
                        if (!std::includes(nx.U[t].begin(), nx.U[t].end(), bp.begin(), bp.end())) {
                            mi = t;
                            break;
                        }
                    if (mi == nx.U.size()) {
                        // B sits inside every slot: together with the fresh
                        // copy that is 2g+1 epsilon factors on each pair.
                        const Monomial total = nx.alpha * block_eps_product(B, C, +1, 1) *
                                               beta_monomial(C, nx.U) * nx.gamma;
                        out.family1.emplace_back(
                            B, must_divide(total, block_eps_product(B, C, +1, 2 * g),
                                           "procedure_reduce"));
                        note("block-complete", "");
                        continue;
                    }
                    nx.alpha.coeff *= fold_sign;
                    for (auto [i, j] : bp)
                        if (nx.U[mi].count({i, j}))
                            nx.alpha.mul_var(eps_sign(C, i, j), i, j);
                        else
                            nx.U[mi].insert({i, j});
                    nx.parts[mi].push_back(B);
                    note("merge-slot", "");
                    work.push_back(std::move(nx));
                }
            }
            continue;
        }

        // Step 4: examine the pair multiplicities of beta gamma.
        auto pair_mult = [&](int i, int j) {
            int d = 0;
            for (const auto& u : st.U) d += u.count({i, j});
            const VarId wrong =
                fold_var(eps_of(C, i, j) > 0 ? Sign::minus : Sign::plus, i, j).first;
            if (auto jt = st.gamma.exps.find(wrong); jt != st.gamma.exps.end()) d += jt->second;
            return d;
        };
        int di = -1, dj = -1;
        for (std::size_t s = 0; s < idx.size() && di < 0; ++s)
            for (std::size_t t = s + 1; t < idx.size(); ++t)
                if (pair_mult(idx[s], idx[t]) < 2 * g) {
                    di = idx[s];
                    dj = idx[t];
                    break;
                }
        if (di < 0) {
            std::vector<BlockUnion> parts = st.parts;
            parts.resize(2 * g);
            const Monomial total = st.alpha * beta * st.gamma;
            out.family2.emplace_back(
                parts, must_divide(total, form_from_parts(parts, C, X), "procedure_reduce"));
            note("pattern-emit", "slots=" + std::to_string(st.U.size()));
            continue;
        }

        // A donor: a diagonal factor of gamma, or a wrong-sign factor on a
        // pair that can spare one copy.
        std::optional<VarId> donor;
        for (const auto& [v, e] : st.gamma.exps) {
            (void)e;
            if (v.i == v.j || pair_mult(v.i, v.j) > 2 * g) {
                donor = v;
                break;
            }
        }
        if (!donor) throw TheoremViolation("procedure_reduce: deficient pair with no donor");
        PState base = st;
        if (--base.gamma.exps[*donor] == 0) base.gamma.exps.erase(*donor);
        note("donor-rewrite", "pair (" + std::to_string(di) + "," + std::to_string(dj) + ")");
        for (const Monomial& tm : donor_rewrite(C, di, dj, donor->i, donor->j).monomials()) {
            PState nx = base;
            nx.alpha.coeff *= tm.coeff;
            const VarId v = tm.exps.begin()->first;
            const bool eps_var = v.i != v.j && v.sign == eps_sign(C, v.i, v.j);
            mul_canonical(eps_var ? nx.alpha : nx.gamma, v, 1);
            work.push_back(std::move(nx));
        }
    }

    Polynomial acc;
    for (const auto& [B, cof] : out.family1)
        acc.add_term(cof * block_eps_product(B, C, +1, 2 * g));
    for (const auto& [parts, phi] : out.family2)
        acc.add_term(phi * form_from_parts(parts, C, X));
    check_equal(acc, p.as_poly(), "procedure_reduce");
    return out;
}

// ---- full decomposition -----------------------------------------------------

namespace {

// Decomposition terms merged by their good monomial.
struct DfAccum {
    Decomposition dec;
    std::map<std::pair<ExpMap, bool>, std::size_t> index;

    void add(Polynomial theta, const Monomial& gm, GoodCollection coll) {
        if (theta.is_zero()) return;
        const std::pair<ExpMap, bool> key{gm.exps, gm.coeff < 0};
        auto [it, fresh] = index.emplace(key, dec.terms.size());
        if (fresh)
            dec.terms.push_back({std::move(theta), {gm, std::move(coll)}});
        else
            dec.terms[it->second].theta += theta;
    }
};

const Decomposition& df_memo(const ExpMap& exps, Mask X, int g);

const ProcedureOutput& procedure_memo(const ExpMap& exps, const std::optional<Block>& C, Mask X,
                                      int g) {
    static Memo<std::tuple<ExpMap, Mask, Mask, bool, int>, ProcedureOutput> memo;
    const std::tuple<ExpMap, Mask, Mask, bool, int> key{exps, C ? C->V : 0, X, C.has_value(), g};
    if (auto hit = memo.find(key)) return *hit;
    Monomial m;
    m.exps = exps;
    return *memo.store(key, procedure_reduce(m, C, X, g));
}

void df_blockg(const Block& B, const Polynomial& cof, int g, DfAccum& acc) {
    const int h = mask_size(B.V), w = mask_size(B.Vc());
    // Crossing variables decouple into diagonals: y^s_ab = (y+aa + s y+bb)/2.
    const Polynomial split =
        cof.substitute([&](const VarId& v) -> std::optional<Polynomial> {
            if (eps_block(B, v.i, v.j) < 0) return std::nullopt;
            Polynomial e = Polynomial::var(Sign::plus, v.i, v.i);
            if (v.sign == Sign::plus)
                e += Polynomial::var(Sign::plus, v.j, v.j);
            else
                e -= Polynomial::var(Sign::plus, v.j, v.j);
            e *= kHalf;
            return e;
        });
    std::map<std::pair<bool, ExpMap>, Polynomial> groups;
    for (const Monomial& t : split.monomials()) {
        Monomial ph, pw;
        for (const auto& [v, e] : t.exps) mul_canonical(mask_has(B.V, v.i) ? ph : pw, v, e);
        const bool pick_w =
            branch_square_split(pw.degree(), ph.degree(), h, w, g) == BranchChoice::first;
        Monomial outer = pick_w ? ph : pw;
        outer.coeff = t.coeff;
        groups[{pick_w, pick_w ? pw.exps : ph.exps}].add_term(outer);
    }
    for (const auto& [gk, outer_poly] : groups) {
        const bool pick_w = gk.first;
        const Mask inner_set = pick_w ? B.Vc() : B.V;
        const Mask outer_set = pick_w ? B.V : B.Vc();
        for (const DecompTerm& dt : df_memo(gk.second, inner_set, g).terms) {
            GoodCollection coll = split_collection(dt.good.coll, outer_set);
            const Monomial gm = alpha(coll);
            const Monomial expect = dt.good.mono * block_both_product(B, 2 * g);
            auto ratio = expect.divide_by(gm);
            if (!ratio || !ratio->exps.empty())
                throw std::logic_error("decompose_full: split collection misses the cross factors");
            acc.add(dt.theta * outer_poly * ratio->coeff, gm, std::move(coll));
        }
    }
}

void df_patterng(const std::optional<Block>& C, const Polynomial& chi, Mask X, int g,
                 DfAccum& acc) {
    const int n = mask_size(X);
    const Monomial pat = pattern_product(C, X, 2 * g);
    const auto xs = mask_to_indices(X);

    // Extract (y+ii)^{2g} for every index, one diagonal per stage.
    Monomial collected;
    Polynomial cur = chi;
    for (int i : xs) {
        Polynomial next;
        for (const auto& [a, rpoly] : change_generators_grouped(cur, C, X, i)) {
            if (rpoly.is_zero()) continue;
            if (branch_scalar_or_solvable(a, rpoly.degree(), n, g) == BranchChoice::first) {
                Monomial shift;
                shift.mul_var(Sign::plus, i, i, a - 2 * g);
                next += rpoly * Polynomial(shift);
            } else {
                for (const auto& [E, psi] : decompose_flipped(rpoly, C, X, 2 * g)) {
                    Monomial fixed = pat * collected * block_eps_product(E, C, +1, 2 * g);
                    fixed.mul_var(Sign::plus, i, i, a);
                    df_blockg(E, poly_divide(psi * Polynomial(fixed),
                                             block_both_product(E, 2 * g), "decompose_full"),
                              g, acc);
                }
            }
        }
        cur = std::move(next);
        collected.mul_var(Sign::plus, i, i, 2 * g);
    }

    // The remainder rewrites into the two generator-tracked families.
    std::map<Block, Polynomial> f1feeds;
    for (const Monomial& mono : cur.monomials()) {
        const ProcedureOutput& proc = procedure_memo(mono.exps, C, X, g);
        for (const auto& [F, rho] : proc.family1) {
            Monomial scaled = pat * collected * rho * block_eps_product(F, C, +1, 2 * g);
            scaled.coeff *= mono.coeff;
            f1feeds[F].add_term(
                must_divide(scaled, block_both_product(F, 2 * g), "decompose_full"));
        }
        for (const auto& [parts, phi] : proc.family2) {
            GoodCollection coll = q_n(X, C, parts, g);
            const Monomial gm = alpha(coll);
            Monomial avail = pat * collected * phi * form_from_parts(parts, C, X);
            avail.coeff *= mono.coeff;
            acc.add(must_divide(avail, gm, "decompose_full").as_poly(), gm, std::move(coll));
        }
    }
    for (const auto& [F, cof] : f1feeds) df_blockg(F, cof, g, acc);
}

Decomposition decompose_full_impl(const Monomial& p, Mask X, int g) {
    const int n = mask_size(X);
    Decomposition out;
    if (n == 1) {
        const int x = mask_to_indices(X)[0];
        const VarId dxx{Sign::plus, x, x};
        if (p.exps.size() != 1 || !p.exps.count(dxx))
            throw std::invalid_argument("decompose_full: rank-one input must be a diagonal power");
        GoodCollection coll = q_n(X, std::nullopt, std::vector<BlockUnion>(2 * g), g);
        const Monomial gm = alpha(coll);
        Monomial theta(p.coeff);
        mul_canonical(theta, dxx, p.exps.at(dxx) - 2 * g);
        out.terms.push_back({theta.as_poly(), {gm, std::move(coll)}});
    } else {
        DfAccum acc;
        for (const auto& [key, cof] : core_grouped(p.as_poly(), X, g)) {
            if (key.family == 0)
                df_blockg(key.block, cof, g, acc);
            else
                df_patterng(key_opt(key), cof, X, g, acc);
        }
        out = std::move(acc.dec);
    }
    out.trace.push_back({"decompose", "terms=" + std::to_string(out.terms.size())});

    Polynomial ver;
    for (const DecompTerm& t : out.terms) ver += t.theta * Polynomial(t.good.mono);
    check_equal(ver, p.as_poly(), "decompose_full");
    return out;
}

const Decomposition& df_memo(const ExpMap& exps, Mask X, int g) {
    static Memo<std::tuple<ExpMap, Mask, int>, Decomposition> memo;
    const std::tuple<ExpMap, Mask, int> key{exps, X, g};
    if (auto hit = memo.find(key)) return *hit;
    Monomial m;
    m.exps = exps;
    return *memo.store(key, decompose_full_impl(m, X, g));
}

}  // namespace

Decomposition decompose_full(const Monomial& p, Mask X, int g) {
    if (g < 1) throw std::invalid_argument("decompose_full: g must be positive");
    if (p.is_zero()) throw std::invalid_argument("decompose_full: zero input");
    require_vars_within(p, X, "decompose_full");
    const int n = mask_size(X);
    if (p.degree() < 2 * g * n * n + (n - 1) * (n - 2) / 2)
        throw TheoremViolation("decompose_full: degree below the theorem threshold");
    Decomposition out = df_memo(p.exps, X, g);
    if (p.coeff != 1)
        for (DecompTerm& t : out.terms) t.theta *= p.coeff;
    return out;
}

// ---- the explicit rank-two basis ---------------------------------------------

Monomial So5Basis::monomial() const {
    Monomial out;
    switch (kind) {
        case Kind::z1:
            out.mul_var(Sign::plus, 1, 1, 2 * g);
            out.mul_var(Sign::plus, 1, 2, 2 * g);
            out.mul_var(Sign::minus, 1, 2, 2 * g);
            break;
        case Kind::z2:
            out.mul_var(Sign::plus, 2, 2, 2 * g);
            out.mul_var(Sign::plus, 1, 2, 2 * g);
            out.mul_var(Sign::minus, 1, 2, 2 * g);
            break;
        case Kind::y_plus:
            out.mul_var(Sign::plus, 1, 1, 2 * g);
            out.mul_var(Sign::plus, 2, 2, 2 * g);
            out.mul_var(Sign::plus, 1, 2, 2 * g + m);
            out.mul_var(Sign::minus, 1, 2, 2 * g - m);
            break;
        case Kind::y_minus:
            out.mul_var(Sign::plus, 1, 1, 2 * g);
            out.mul_var(Sign::plus, 2, 2, 2 * g);
            out.mul_var(Sign::plus, 1, 2, 2 * g - m);
            out.mul_var(Sign::minus, 1, 2, 2 * g + m);
            break;
    }
    return out;
}

std::string So5Basis::name() const {
    switch (kind) {
        case Kind::z1:
            return "z1";
        case Kind::z2:
            return "z2";
        case Kind::y_plus:
            return "y+" + std::to_string(m);
        case Kind::y_minus:
            return "y-" + std::to_string(m);
    }
    return {};
}

namespace {

Monomial swap12(const Monomial& m) {
    Monomial out(m.coeff);
    for (const auto& [v, e] : m.exps) {
        auto f = [](int t) { return t == 1 ? 2 : t == 2 ? 1 : t; };
        out.mul_var(v.sign, f(v.i), f(v.j), e);
    }
    return out;
}

void so5_emit(std::vector<So5Term>& out, So5Basis basis, Monomial mult, bool swapped) {
    if (swapped) {
        mult = swap12(mult);
        switch (basis.kind) {
            case So5Basis::Kind::z1:
                basis.kind = So5Basis::Kind::z2;
                break;
            case So5Basis::Kind::z2:
                basis.kind = So5Basis::Kind::z1;
                break;
            default:
                // Swapping indices fixes the basis monomial up to (-1)^m.
                if (basis.m % 2) mult.coeff = -mult.coeff;
                break;
        }
    }
    out.push_back({std::move(mult), basis});
}

void so5_emit_y(std::vector<So5Term>& out, int ep, int em, const Rational& c, int g,
                bool swapped) {
    Monomial mult(c);
    So5Basis basis{So5Basis::Kind::y_plus, 0, g};
    if (ep >= 2 * g) {
        basis.kind = So5Basis::Kind::y_plus;
        basis.m = std::max(0, 2 * g - em);
        mult.mul_var(Sign::plus, 1, 2, ep - 2 * g - basis.m);
        mult.mul_var(Sign::minus, 1, 2, em - (2 * g - basis.m));
    } else {
        basis.kind = So5Basis::Kind::y_minus;
        basis.m = 2 * g - ep;
        mult.mul_var(Sign::minus, 1, 2, em - (2 * g + basis.m));
    }
    so5_emit(out, basis, std::move(mult), swapped);
}

void so5_branch(int a, int b, const Rational& c, int g, bool swapped, std::vector<So5Term>& out) {
    const Polynomial P22 = Polynomial::var(Sign::plus, 2, 2);
    const Polynomial P12 = Polynomial::var(Sign::plus, 1, 2);
    const Polynomial M12 = Polynomial::var(Sign::minus, 1, 2);
    const VarId vp{Sign::plus, 1, 2}, vm{Sign::minus, 1, 2}, v22{Sign::plus, 2, 2};
    auto exp_of = [](const Monomial& t, const VarId& v) {
        auto it = t.exps.find(v);
        return it == t.exps.end() ? 0 : it->second;
    };

    // (y+11)^a (y+22)^b with a >= 2g: keep (y+11)^{2g}, expand the rest via
    // y+11 = 2 y+12 - y+22.
    const Polynomial PA = (poly_pow(P12 * Rational(2) - P22, a - 2 * g) * poly_pow(P22, b)) * c;
    for (const Monomial& tA : PA.monomials()) {
        const int A2 = exp_of(tA, vp);
        const int B2 = exp_of(tA, v22);
        if (A2 >= 2 * g) {
            // Keep (y+12)^{2g}; y+12 = y-12 + y+22 on the remainder.
            const Polynomial PB = poly_pow(M12 + P22, A2 - 2 * g) * poly_pow(P22, B2) * tA.coeff;
            for (const Monomial& tB : PB.monomials()) {
                const int em = exp_of(tB, vm);
                const int e22 = exp_of(tB, v22);
                if (em >= 2 * g) {
                    Monomial mult(tB.coeff);
                    mult.mul_var(Sign::minus, 1, 2, em - 2 * g);
                    mult.mul_var(Sign::plus, 2, 2, e22);
                    so5_emit(out, So5Basis{So5Basis::Kind::z1, 0, g}, std::move(mult), swapped);
                } else {
                    // Keep (y+22)^{2g}; y+22 = y+12 - y-12 on the remainder.
                    Polynomial PC = poly_pow(P12 - M12, e22 - 2 * g) * tB.coeff;
                    Monomial shift;
                    shift.mul_var(Sign::minus, 1, 2, em);
                    PC *= Polynomial(shift);
                    for (const Monomial& tC : PC.monomials())
                        so5_emit_y(out, 2 * g + exp_of(tC, vp), exp_of(tC, vm), tC.coeff, g,
                                   swapped);
                }
            }
        } else {
            // Keep (y+22)^{2g}; y+22 = y+12 - y-12 on the remainder.
            Polynomial PB = poly_pow(P12 - M12, B2 - 2 * g) * tA.coeff;
            Monomial shift;
            shift.mul_var(Sign::plus, 1, 2, A2);
            PB *= Polynomial(shift);
            for (const Monomial& tB : PB.monomials())
                so5_emit_y(out, exp_of(tB, vp), exp_of(tB, vm), tB.coeff, g, swapped);
        }
    }
}

}  // namespace

std::vector<So5Term> so5_decompose(const Monomial& p, int g) {
    if (g < 1) throw std::invalid_argument("so5_decompose: g must be positive");
    require_vars_within(p, (Mask(1) << 1) | (Mask(1) << 2), "so5_decompose");
    if (p.degree() < 8 * g)
        throw TheoremViolation("so5_decompose: degree below the rank-two threshold");

    std::vector<So5Term> out;
    for (const auto& [e, c] : normal_form(p).terms) {
        const int a = e.count(1) ? e.at(1) : 0;
        const int b = e.count(2) ? e.at(2) : 0;
        if (a >= 2 * g)
            so5_branch(a, b, c, g, false, out);
        else if (b >= 2 * g)
            so5_branch(b, a, c, g, true, out);
        else
            throw TheoremViolation("so5_decompose: term misses both diagonal exponents");
    }
    Polynomial acc;
    for (const So5Term& t : out) acc.add_term(t.multiplier * t.basis.monomial());
    check_equal(acc, p.as_poly(), "so5_decompose");
    return out;
}

}  // namespace soq
