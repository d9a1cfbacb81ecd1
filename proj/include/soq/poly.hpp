#pragma once

// Exact polynomial arithmetic over the symbols y+ij / y-ij.
//
// Variables are kept in canonical form (i <= j); the symmetry relations
// y+ji = y+ij and y-ji = -y-ij are folded at construction time, tracking the
// sign. y-ii does not exist and is rejected.

#include "soq/rational.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace soq {

enum class Sign : int { plus = +1, minus = -1 };

inline Sign opposite(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
inline char sign_char(Sign s) { return s == Sign::plus ? '+' : '-'; }

struct VarId {
    Sign sign;
    int i;
    int j;

    friend bool operator==(const VarId&, const VarId&) = default;
    friend auto operator<=>(const VarId& a, const VarId& b) {
        // Variable order: by index pair first, minus before plus within a pair.
        if (auto c = a.i <=> b.i; c != 0) return c;
        if (auto c = a.j <=> b.j; c != 0) return c;
        return static_cast<int>(a.sign) <=> static_cast<int>(b.sign);
    }
};

// Folds an arbitrary (sign, i, j) to the canonical i <= j variable.
// Returns the canonical id and the sign factor (+1 or -1) it picked up.
std::pair<VarId, int> fold_var(Sign sign, int i, int j);

using ExpMap = std::map<VarId, int>;  // canonical variable -> exponent > 0

int total_degree(const ExpMap& e);

// Graded lexicographic order on exponent maps (degree first, then lex).
struct GrlexLess {
    bool operator()(const ExpMap& a, const ExpMap& b) const;
};

struct Polynomial;

struct Monomial {
    Rational coeff = 1;
    ExpMap exps;

    Monomial() = default;
    explicit Monomial(Rational c) : coeff(std::move(c)) {}

    int degree() const { return total_degree(exps); }
    bool is_zero() const { return coeff == 0; }

    // Multiplies by y^sign_ij ^ e, folding to canonical form.
    Monomial& mul_var(Sign sign, int i, int j, int e = 1);
    Monomial& operator*=(const Monomial& o);
    friend Monomial operator*(Monomial a, const Monomial& b) { return a *= b; }

    // Exact division; nullopt when not divisible.
    std::optional<Monomial> divide_by(const Monomial& d) const;

    Polynomial as_poly() const;
    std::string str() const;
};

struct Polynomial {
    std::map<ExpMap, Rational, GrlexLess> terms;

    Polynomial() = default;
    Polynomial(const Monomial& m) { add_term(m); }

    static Polynomial zero() { return {}; }
    static Polynomial constant(Rational c);
    static Polynomial var(Sign sign, int i, int j);

    bool is_zero() const { return terms.empty(); }
    int degree() const;  // -1 for the zero polynomial
    bool is_homogeneous() const;
    std::size_t term_count() const { return terms.size(); }

    void add_term(const Monomial& m);
    std::vector<Monomial> monomials() const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms == b.terms; }

    // Applies a variable substitution. The map may send a variable to any
    // polynomial; variables it declines (nullopt) are kept as-is.
    Polynomial substitute(const std::function<std::optional<Polynomial>(const VarId&)>& f) const;

    std::string str() const;
};

// Text grammar: coefficient and factors joined by '*', factors like y+12^3.
// Indices >= 10 are bracketed: y+[10]2, y-3[11].
Monomial parse_monomial(std::string_view text);
Polynomial parse_polynomial(std::string_view text);

}  // namespace soq
