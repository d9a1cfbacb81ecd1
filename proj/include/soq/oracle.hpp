#pragma once

// Independent verification by exact graded linear algebra: decides whether a
// class lies in the span of monomial multiples of good monomials of its
// degree, without trusting the decomposition engine. Also hosts the
// exhaustive combinatorial suites for the block and degree-split lemmas.

#include "soq/decompose.hpp"
#include "soq/diag.hpp"
#include "soq/good.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace soq {

// All exponent vectors of total degree d over the diagonal classes of X,
// graded-lex order; size C(d + n - 1, n - 1).
std::vector<DExp> graded_basis(Mask X, int d);

struct MembershipCertificate {
    DiagonalPolynomial target;
    // good index -> cofactor in the diagonal classes; the residual
    // target - sum cofactor * NF(good) is checked to be identically zero.
    std::vector<std::pair<std::size_t, DiagonalPolynomial>> combination;
};

// Exact solve over the degree-d graded piece: target must be homogeneous of
// degree d (or zero). nullopt means not in the span of the given goods.
std::optional<MembershipCertificate> span_membership(const DiagonalPolynomial& target,
                                                     const std::vector<GoodMonomial>& goods,
                                                     Mask X, int d);

struct TheoremMonomialStatus {
    DExp mono;
    bool certified = false;
    std::size_t certificate_terms = 0;
};

struct TheoremReport {
    int n = 0;
    int g = 0;
    int d = 0;
    EnumCaps caps;
    std::size_t goods_used = 0;
    std::vector<TheoremMonomialStatus> monomials;

    // "Not certified under caps" is a cap artifact, never a refutation.
    std::size_t not_certified_count() const;
    bool all_certified() const { return not_certified_count() == 0; }
};

// Certifies every degree-d monomial in the diagonal classes against the
// goods enumerable under the caps. Requires d >= 2gn^2 + (n-1)(n-2)/2.
TheoremReport verify_theorem(int n, int g, int d, const EnumCaps& caps, int jobs = 1);

// Re-verifies a decomposition of p from scratch: rebuilds every good
// monomial from its provenance tree, re-derives its variable image, and
// compares sum theta * good against p by normal form.
bool verify_decomposition(const Decomposition& dec, const Monomial& p, Mask X, int g);

struct SuiteEntry {
    std::string name;
    std::string params;
    long long cases = 0;
    long long vacuous = 0;
    bool holds = true;
};

struct SuiteReport {
    std::vector<SuiteEntry> entries;
    bool all_hold() const;
    long long total_cases() const;
};

// Exhaustive check of the block calculus over X = {1..k} for k <= max_size:
// bar/epsilon identities, symmetric difference as literal pair sets,
// restriction, extension through z, and the two-sided combination sandwich.
SuiteReport check_block_lemmas(int max_size);

// Exhaustive scan of the integer degree splits behind each branch predicate
// for m <= m_max, g <= g_max, confirming a guaranteed disjunct at and above
// every hypothesis bound.
SuiteReport check_pigeonhole_lemmas(int m_max, int g_max);

}  // namespace soq
