#pragma once

// Normal forms in the quotient ring R = Q[Y(X)] / I.
//
// The defining relations force y+ij ~ (d_i + d_j)/2 and y-ij ~ (d_i - d_j)/2
// for independent classes d_i (= y+ii), so R is isomorphic to a polynomial
// ring in the d_i. A class is represented canonically by its image under this
// substitution, which makes equality in R a bit-exact comparison.

#include "soq/poly.hpp"

#include <map>
#include <string>
#include <vector>

namespace soq {

using DExp = std::map<int, int>;  // d_i -> exponent > 0

struct DGrlexLess {
    bool operator()(const DExp& a, const DExp& b) const;
};

struct DiagonalPolynomial {
    std::map<DExp, Rational, DGrlexLess> terms;

    static DiagonalPolynomial zero() { return {}; }
    static DiagonalPolynomial constant(Rational c);
    static DiagonalPolynomial var(int i);

    bool is_zero() const { return terms.empty(); }
    int degree() const;
    bool is_homogeneous() const;

    void add(const DExp& e, const Rational& c);
    DiagonalPolynomial& operator+=(const DiagonalPolynomial& o);
    DiagonalPolynomial& operator-=(const DiagonalPolynomial& o);
    DiagonalPolynomial& operator*=(const DiagonalPolynomial& o);
    DiagonalPolynomial& operator*=(const Rational& c);
    friend DiagonalPolynomial operator+(DiagonalPolynomial a, const DiagonalPolynomial& b) { return a += b; }
    friend DiagonalPolynomial operator-(DiagonalPolynomial a, const DiagonalPolynomial& b) { return a -= b; }
    friend DiagonalPolynomial operator*(DiagonalPolynomial a, const DiagonalPolynomial& b) { return a *= b; }
    friend bool operator==(const DiagonalPolynomial& a, const DiagonalPolynomial& b) {
        return a.terms == b.terms;
    }
    friend bool operator<(const DiagonalPolynomial& a, const DiagonalPolynomial& b) {
        return a.terms < b.terms;
    }

    // Text form like "1/2*d1 + 1/2*d2" (graded-lex, highest terms first).
    std::string str() const;
};

// Image of p under y+ij -> (d_i+d_j)/2, y-ij -> (d_i-d_j)/2.
DiagonalPolynomial normal_form(const Polynomial& p);
DiagonalPolynomial normal_form(const Monomial& m);

bool equal_in_R(const Polynomial& a, const Polynomial& b);

// Canonical section d_i -> y+ii of the quotient map; normal_form(lift(q)) == q.
Polynomial diagonal_lift(const DiagonalPolynomial& q);

// Generators of the ideal I over the index set X: the two-index symmetry
// relations plus the triple relations, with (i,j,k) ranging over all of X^3
// wherever every symbol involved exists.
std::vector<Polynomial> ideal_generators(const std::vector<int>& X);

}  // namespace soq
