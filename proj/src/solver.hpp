#pragma once

// Incremental exact row-reduction over Q used by the certified graded solves
// and the span oracle. Columns are diagonal polynomials; combinations are
// tracked so every successful solve yields an explicit certificate.

#include "soq/diag.hpp"

#include <map>
#include <optional>

namespace soq {

class SpanSolver {
  public:
    // Returns true when the column was independent of the span so far.
    bool add(DiagonalPolynomial v, std::size_t colid) {
        std::map<std::size_t, Rational> comb{{colid, Rational(1)}};
        reduce(v, comb);
        if (v.is_zero()) return false;
        const Rational lead = v.terms.rbegin()->second;
        v *= Rational(1) / lead;
        for (auto& [c, k] : comb) k /= lead;
        DExp pivot = v.terms.rbegin()->first;
        rows_.emplace(std::move(pivot), Row{std::move(v), std::move(comb)});
        return true;
    }

    // Expresses the target in the span; nullopt when not representable.
    std::optional<std::map<std::size_t, Rational>> solve(DiagonalPolynomial target) const {
        std::map<std::size_t, Rational> comb;
        reduce(target, comb);
        if (!target.is_zero()) return std::nullopt;
        for (auto& [c, k] : comb) k = -k;
        return comb;
    }

    std::size_t rank() const { return rows_.size(); }

  private:
    struct Row {
        DiagonalPolynomial vec;
        std::map<std::size_t, Rational> comb;
    };

    void reduce(DiagonalPolynomial& v, std::map<std::size_t, Rational>& comb) const {
        while (!v.is_zero()) {
            auto lead = v.terms.rbegin();
            auto it = rows_.find(lead->first);
            if (it == rows_.end()) return;
            const Rational c = lead->second;
            DiagonalPolynomial scaled = it->second.vec;
            scaled *= c;
            v -= scaled;
            for (const auto& [col, k] : it->second.comb) {
                auto [jt, fresh] = comb.emplace(col, -c * k);
                if (!fresh) {
                    jt->second -= c * k;
                    if (jt->second == 0) comb.erase(jt);
                }
            }
        }
    }

    std::map<DExp, Row, DGrlexLess> rows_;
};

}  // namespace soq
