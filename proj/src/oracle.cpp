#include "soq/oracle.hpp"

#include "solver.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <thread>

namespace soq {

namespace {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
    return r;
}

void fill_basis(const std::vector<int>& xs, std::size_t k, int d, DExp& cur,
                std::vector<DExp>& out) {
    if (k + 1 == xs.size()) {
        DExp e = cur;
        if (d > 0) e[xs[k]] = d;
        out.push_back(std::move(e));
        return;
    }
    for (int t = 0; t <= d; ++t) {
        DExp e = cur;
        if (t > 0) e[xs[k]] = t;
        fill_basis(xs, k + 1, d - t, e, out);
    }
}

}  // namespace

std::vector<DExp> graded_basis(Mask X, int d) {
    const auto xs = mask_to_indices(X);
    if (xs.empty()) throw std::invalid_argument("graded_basis: empty index set");
    std::vector<DExp> out;
    DExp cur;
    fill_basis(xs, 0, d, cur, out);
    std::sort(out.begin(), out.end(), [](const DExp& a, const DExp& b) {
        return DGrlexLess{}(a, b);
    });
    return out;
}

namespace {

// Shared elimination state for one (goods, degree) instance.
struct SpanInstance {
    std::vector<std::pair<std::size_t, DExp>> cols;  // good index, multiplier monomial
    std::vector<DiagonalPolynomial> good_nfs;
    SpanSolver solver;
};

SpanInstance build_span(const std::vector<GoodMonomial>& goods, Mask X, int d) {
    SpanInstance inst;
    inst.good_nfs.reserve(goods.size());
    for (const GoodMonomial& gm : goods) inst.good_nfs.push_back(normal_form(gm.mono));
    const long long full = binomial(d + mask_size(X) - 1, mask_size(X) - 1);
    for (std::size_t gi = 0; gi < goods.size(); ++gi) {
        const DiagonalPolynomial& nf = inst.good_nfs[gi];
        if (nf.is_zero()) continue;
        const int dg = nf.degree();
        if (dg > d) continue;
        for (const DExp& mu : graded_basis(X, d - dg)) {
            if (inst.solver.rank() >= static_cast<std::size_t>(full)) return inst;
            DiagonalPolynomial col;
            col.add(mu, Rational(1));
            col *= nf;
            const std::size_t id = inst.cols.size();
            inst.cols.push_back({gi, mu});
            inst.solver.add(std::move(col), id);
        }
    }
    return inst;
}

std::optional<MembershipCertificate> certify(const SpanInstance& inst,
                                             const std::vector<GoodMonomial>& goods,
                                             const DiagonalPolynomial& target) {
    auto comb = inst.solver.solve(target);
    if (!comb) return std::nullopt;
    MembershipCertificate cert;
    cert.target = target;
    std::map<std::size_t, DiagonalPolynomial> per_good;
    for (const auto& [col, c] : *comb) {
        DiagonalPolynomial mu;
        mu.add(inst.cols[col].second, c);
        per_good[inst.cols[col].first] += mu;
    }
    DiagonalPolynomial acc;
    for (auto& [gi, cof] : per_good) {
        if (cof.is_zero()) continue;
        acc += cof * inst.good_nfs[gi];
        cert.combination.emplace_back(gi, std::move(cof));
    }
    (void)goods;
    if (!(acc == target))
        throw std::logic_error("span_membership: certificate does not recombine to the target");
    return cert;
}

}  // namespace

std::optional<MembershipCertificate> span_membership(const DiagonalPolynomial& target,
                                                     const std::vector<GoodMonomial>& goods,
                                                     Mask X, int d) {
    if (!target.is_zero() && (!target.is_homogeneous() || target.degree() != d))
        throw std::invalid_argument("span_membership: target not homogeneous of the given degree");
    const SpanInstance inst = build_span(goods, X, d);
    return certify(inst, goods, target);
}

std::size_t TheoremReport::not_certified_count() const {
    std::size_t k = 0;
    for (const auto& st : monomials)
        if (!st.certified) ++k;
    return k;
}

TheoremReport verify_theorem(int n, int g, int d, const EnumCaps& caps, int jobs) {
    if (n < 1 || g < 1) throw std::invalid_argument("verify_theorem: need n >= 1 and g >= 1");
    if (d < 2 * g * n * n + (n - 1) * (n - 2) / 2)
        throw std::invalid_argument("verify_theorem: degree below the theorem bound");
    Mask X = 0;
    for (int i = 1; i <= n; ++i) X |= Mask(1) << i;

    TheoremReport report;
    report.n = n;
    report.g = g;
    report.d = d;
    report.caps = caps;

    const std::vector<GoodMonomial> goods = enumerate_good(n, g, caps);
    report.goods_used = goods.size();
    const SpanInstance inst = build_span(goods, X, d);

    const std::vector<DExp> targets = graded_basis(X, d);
    report.monomials.resize(targets.size());
    auto run = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
            DiagonalPolynomial target;
            target.add(targets[t], Rational(1));
            auto cert = certify(inst, goods, target);
            report.monomials[t].mono = targets[t];
            report.monomials[t].certified = cert.has_value();
            report.monomials[t].certificate_terms = cert ? cert->combination.size() : 0;
        }
    };
    const int workers = std::max(1, jobs);
    if (workers == 1 || targets.size() < 2) {
        run(0, targets.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (targets.size() + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::size_t lo = std::min(targets.size(), w * chunk);
            const std::size_t hi = std::min(targets.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(run, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return report;
}

namespace {

GoodCollection rebuild_collection(const GoodNode& node, int g) {
    if (node.kind == GoodNode::Kind::base) return q_n(node.X, node.B, node.D, g);
    if (!node.child) throw std::invalid_argument("verify_decomposition: split node without child");
    return split_collection(rebuild_collection(*node.child, g), node.outer);
}

}  // namespace

bool verify_decomposition(const Decomposition& dec, const Monomial& p, Mask X, int g) {
    try {
        DiagonalPolynomial acc;
        for (const DecompTerm& term : dec.terms) {
            if (!term.good.coll.provenance) return false;
            const GoodCollection rebuilt = rebuild_collection(*term.good.coll.provenance, g);
            const Monomial image = alpha(rebuilt);
            if (image.exps != term.good.mono.exps || image.coeff != term.good.mono.coeff)
                return false;
            for (const auto& [v, e] : term.good.mono.exps) {
                (void)e;
                if (!mask_has(X, v.i) || !mask_has(X, v.j)) return false;
            }
            acc += normal_form(term.theta) * normal_form(term.good.mono);
        }
        return acc == normal_form(p);
    } catch (...) {
        return false;
    }
}

// ---- exhaustive block suite ----------------------------------------------

namespace {

using PairSet = std::set<std::pair<int, int>>;

PairSet unordered_pairs(const Block& B) {
    PairSet s;
    for (auto [i, j] : block_pairs(B)) s.insert({std::min(i, j), std::max(i, j)});
    return s;
}

PairSet ordered_pairs(const Block& B) {
    PairSet s;
    for (auto [i, j] : block_pairs(B)) s.insert({i, j});
    return s;
}

bool subset(const PairSet& a, const PairSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

SuiteReport check_block_lemmas(int max_size) {
    SuiteReport report;
    for (int k = 2; k <= max_size; ++k) {
        Mask X = 0;
        for (int i = 1; i <= k; ++i) X |= Mask(1) << i;
        const auto idx = mask_to_indices(X);
        const auto blocks = enumerate_blocks(X);

        SuiteEntry eps{"bar-eps", "k=" + std::to_string(k)};
        for (const Block& B : blocks) {
            if (!(bar(bar(B)) == B)) eps.holds = false;
            for (int i : idx)
                for (int j : idx) {
                    ++eps.cases;
                    if (eps_block(B, i, j) != eps_block(bar(B), i, j)) eps.holds = false;
                    if (eps_block(B, i, j) != eps_block(B, j, i)) eps.holds = false;
                    if (i == j && eps_block(B, i, j) != -1) eps.holds = false;
                    const int expect =
                        (i != j && eps_side(B, i) != eps_side(B, j)) ? +1 : -1;
                    if (eps_block(B, i, j) != expect) eps.holds = false;
                }
        }
        report.entries.push_back(eps);

        SuiteEntry sd{"sym-diff", "k=" + std::to_string(k)};
        for (const Block& B : blocks)
            for (const Block& C : blocks) {
                ++sd.cases;
                const auto D = sym_diff(B, C);
                const bool same = C == B || C == bar(B);
                if (same) {
                    if (D) sd.holds = false;
                    ++sd.vacuous;
                    continue;
                }
                if (!D || !D->valid()) {
                    sd.holds = false;
                    continue;
                }
                PairSet want;
                const PairSet pb = unordered_pairs(B), pc = unordered_pairs(C);
                std::set_symmetric_difference(pb.begin(), pb.end(), pc.begin(), pc.end(),
                                              std::inserter(want, want.end()));
                if (unordered_pairs(*D) != want) sd.holds = false;
            }
        report.entries.push_back(sd);

        if (k < 3) continue;

        SuiteEntry rs{"restrict", "k=" + std::to_string(k)};
        for (const Block& B : blocks)
            for (int z : idx) {
                ++rs.cases;
                const auto R = restrict_block(B, z);
                const bool degenerate = B.V == (Mask(1) << z) || B.Vc() == (Mask(1) << z);
                if (degenerate) {
                    if (R) rs.holds = false;
                    ++rs.vacuous;
                    continue;
                }
                if (!R || !R->valid()) {
                    rs.holds = false;
                    continue;
                }
                PairSet want;
                for (auto pr : unordered_pairs(B))
                    if (pr.first != z && pr.second != z) want.insert(pr);
                if (unordered_pairs(*R) != want) rs.holds = false;
            }
        report.entries.push_back(rs);

        SuiteEntry ex{"extend-through-z", "k=" + std::to_string(k)};
        SuiteEntry cb{"combine-two-sides", "k=" + std::to_string(k)};
        for (int z : idx) {
            const Mask zbit = Mask(1) << z;
            for (const Block& B : enumerate_blocks(X & ~zbit)) {
                for (const Block& C : enumerate_blocks(B.Vc() | zbit)) {
                    ++ex.cases;
                    const Block D = extend_through_z(B, C, z);
                    if (!D.valid() || D.X != X) ex.holds = false;
                    PairSet avail = unordered_pairs(B);
                    for (auto pr : unordered_pairs(C)) avail.insert(pr);
                    if (!subset(unordered_pairs(D), avail)) ex.holds = false;
                }
                for (const Block& C : enumerate_blocks(B.V | zbit))
                    for (const Block& E : enumerate_blocks(B.Vc() | zbit)) {
                        ++cb.cases;
                        const CombineResult res = combine_two_sides(B, C, E, z);
                        if (!res.A.valid() || res.A.X != X) cb.holds = false;
                        const Block Ep = res.used_bar_E ? bar(E) : E;
                        PairSet lower = ordered_pairs(C);
                        for (auto pr : ordered_pairs(Ep)) lower.insert(pr);
                        PairSet upper = lower;
                        for (auto pr : ordered_pairs(B)) upper.insert(pr);
                        for (auto pr : ordered_pairs(bar(B))) upper.insert(pr);
                        const PairSet pa = ordered_pairs(res.A);
                        if (!subset(lower, pa) || !subset(pa, upper)) cb.holds = false;
                    }
            }
        }
        report.entries.push_back(ex);
        report.entries.push_back(cb);
    }
    return report;
}

// ---- exhaustive degree-split suite ------------------------------------------

namespace {

// Scans every split a + b = T for T from lo to hi; splits with T below the
// guarantee count as vacuous, the rest must satisfy a disjunct.
void scan_two_way(SuiteEntry& entry, long long bound_a, long long bound_b, int slack) {
    const long long guarantee = bound_a + bound_b - 1;
    for (long long T = std::max(0LL, guarantee - 3); T <= guarantee + slack; ++T)
        for (long long a = 0; a <= T; ++a) {
            ++entry.cases;
            if (T < guarantee) {
                ++entry.vacuous;
                continue;
            }
            if (a < bound_a && T - a < bound_b) entry.holds = false;
        }
}

}  // namespace

SuiteReport check_pigeonhole_lemmas(int m_max, int g_max) {
    SuiteReport report;
    for (int g = 1; g <= g_max; ++g) {
        // Off-diagonal degree spreads over all but two indices, so some index
        // is missed by a large remainder.
        for (int m = 2; m <= m_max; ++m) {
            SuiteEntry e{"z-free-remainder", "m=" + std::to_string(m) + ",g=" + std::to_string(g)};
            const long long need = 2LL * g * (m - 1) * (m - 2) - m + 2;
            const long long from = 2LL * g * m * (m - 1) - m + 1;
            for (long long D = from; D <= from + 4LL * g * m; ++D) {
                ++e.cases;
                const long long worst = ((m - 2) * D + m - 1) / m;  // ceil over m indices
                if (worst < need) e.holds = false;
            }
            report.entries.push_back(e);
        }
        for (int h = 1; h + 1 <= m_max; ++h)
            for (int w = 1; h + w + 1 <= m_max; ++w) {
                SuiteEntry e1{"two-sided-independent", "h=" + std::to_string(h) +
                                                           ",w=" + std::to_string(w) +
                                                           ",g=" + std::to_string(g)};
                scan_two_way(e1, 2LL * g * h * (h + 1) - h, 2LL * g * w * (w + 1) - w, 4 * g);
                report.entries.push_back(e1);

                SuiteEntry e2{"independent-or-solvable", "h=" + std::to_string(h) +
                                                             ",w=" + std::to_string(w) +
                                                             ",g=" + std::to_string(g)};
                scan_two_way(e2, 2LL * g * w * (w + 1) - w,
                             1LL * h * (h + 1) * g - (h + 1) + 2, 4 * g);
                report.entries.push_back(e2);
            }
        for (int h = 1; h + 1 <= m_max; ++h)
            for (int w = 1; h + w <= m_max; ++w) {
                SuiteEntry e{"square-split", "h=" + std::to_string(h) + ",w=" + std::to_string(w) +
                                                 ",g=" + std::to_string(g)};
                scan_two_way(e, 2LL * g * w * w + (w - 1) * (w - 2) / 2,
                             2LL * g * h * h + (h - 1) * (h - 2) / 2, 4 * g);
                report.entries.push_back(e);
            }
        for (int n = 2; n <= m_max; ++n) {
            SuiteEntry e{"scalar-or-solvable", "n=" + std::to_string(n) + ",g=" + std::to_string(g)};
            scan_two_way(e, 2LL * g, 1LL * n * (n - 1) * g - n + 2, 4 * g);
            report.entries.push_back(e);
        }
    }
    return report;
}

bool SuiteReport::all_hold() const {
    for (const auto& e : entries)
        if (!e.holds) return false;
    return true;
}

long long SuiteReport::total_cases() const {
    long long t = 0;
    for (const auto& e : entries) t += e.cases;
    return t;
}

}  // namespace soq
