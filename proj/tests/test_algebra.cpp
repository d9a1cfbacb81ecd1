#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "soq/diag.hpp"
#include "soq/poly.hpp"
#include "soq/rational.hpp"

using namespace soq;

TEST_CASE("rational arithmetic normalizes") {
    Rational a = parse_rational("3/6");
    CHECK(to_string(a) == "1/2");
    CHECK(to_string(a + a) == "1");
    CHECK(to_string(a - a) == "0");
    CHECK(to_string(Rational(-4, 6)) == "-2/3");
    CHECK(to_string(parse_rational("-7/2")) == "-7/2");
    CHECK(Rational(1, 3) * Rational(3, 1) == Rational(1));
}

TEST_CASE("monomial parsing and canonical folding") {
    Monomial m = parse_monomial("y+12^3");
    CHECK(m.str() == "y+12^3");
    // swapped indices fold back to i<j; the minus family picks up a sign
    CHECK(parse_monomial("y+21").str() == "y+12");
    CHECK(parse_monomial("y-21").str() == "-1*y-12");
    CHECK(parse_monomial("y-21^2").str() == "y-12^2");
    CHECK(parse_monomial("3/4*y+11*y-12").str() == "3/4*y+11*y-12");
    // bracketed indices for two-digit entries
    CHECK(parse_monomial("y+[10][2]").str() == "y+2[10]");
    CHECK_THROWS(parse_monomial("y-11"));
    CHECK_THROWS(parse_monomial("y*12"));
}

TEST_CASE("polynomial parsing collects like terms") {
    Polynomial p = parse_polynomial("y+12 + y+21 - y-12 + y-21");
    CHECK(p.terms.size() == 2);
    CHECK(p.str() == "2*y+12 - 2*y-12");
    Polynomial q = parse_polynomial("y+12 - y+12");
    CHECK(q.terms.empty());
}

TEST_CASE("normal forms of the generators") {
    CHECK(normal_form(parse_monomial("y+11")).str() == "d1");
    CHECK(normal_form(parse_monomial("y+12")).str() == "1/2*d1 + 1/2*d2");
    CHECK(normal_form(parse_monomial("y-12")).str() == "1/2*d1 - 1/2*d2");
    CHECK(normal_form(parse_monomial("y+12*y-12")).str() == "1/4*d1^2 - 1/4*d2^2");
    CHECK(normal_form(parse_monomial("y+12^2")).str() ==
          "1/4*d1^2 + 1/2*d1*d2 + 1/4*d2^2");
}

TEST_CASE("quotient relations hold") {
    // y+ij + y-ij = di and y+ij - y-ij = dj
    CHECK(equal_in_R(parse_polynomial("y+12 + y-12"), parse_polynomial("y+11")));
    CHECK(equal_in_R(parse_polynomial("y+12 - y-12"), parse_polynomial("y+22")));
    CHECK(equal_in_R(parse_polynomial("y+12^2 - y-12^2"), parse_polynomial("y+11*y+22")));
    CHECK_FALSE(equal_in_R(parse_polynomial("y+12"), parse_polynomial("y-12")));
}

TEST_CASE("normal form is a ring homomorphism") {
    Polynomial a = parse_polynomial("y+12^2 + 2*y-13*y+23");
    Polynomial b = parse_polynomial("y-12 - 3/5*y+33");
    DiagonalPolynomial prod = normal_form(a);
    prod *= normal_form(b);
    Polynomial ab;
    for (const Monomial& ma : a.monomials())
        for (const Monomial& mb : b.monomials()) {
            Monomial m = ma;
            m.coeff = m.coeff * mb.coeff;
            for (const auto& [v, e] : mb.exps) m.mul_var(v.sign, v.i, v.j, e);
            ab.add_term(m);
        }
    CHECK((normal_form(ab) - prod).is_zero());
}

TEST_CASE("ideal generators reduce to zero") {
    for (const Polynomial& gen : ideal_generators({1, 2, 3})) {
        CHECK(normal_form(gen).is_zero());
    }
}

TEST_CASE("diagonal lift sections the quotient map") {
    DiagonalPolynomial q = normal_form(parse_polynomial("y+12^3 - y-13*y+23^2"));
    CHECK((normal_form(diagonal_lift(q)) - q).is_zero());
}
