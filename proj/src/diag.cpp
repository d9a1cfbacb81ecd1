#include "soq/diag.hpp"

#include <memory>
#include <mutex>
#include <sstream>

namespace soq {

bool DGrlexLess::operator()(const DExp& a, const DExp& b) const {
    int da = 0, db = 0;
    for (const auto& [v, k] : a) da += k;
    for (const auto& [v, k] : b) db += k;
    if (da != db) return da < db;
    // lex tie-break with low variable indices dominant, so d1^k outranks
    // anything else of the same degree
    auto ia = a.begin(), ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first > ib->first;
        if (ia->second != ib->second) return ia->second < ib->second;
    }
    return false;
}

DiagonalPolynomial DiagonalPolynomial::constant(Rational c) {
    DiagonalPolynomial q;
    q.add({}, c);
    return q;
}

DiagonalPolynomial DiagonalPolynomial::var(int i) {
    DiagonalPolynomial q;
    q.add({{i, 1}}, 1);
    return q;
}

int DiagonalPolynomial::degree() const {
    if (terms.empty()) return -1;
    int d = 0;
    for (const auto& [v, k] : terms.rbegin()->first) d += k;
    return d;
}

bool DiagonalPolynomial::is_homogeneous() const {
    if (terms.empty()) return true;
    auto deg = [](const DExp& e) {
        int d = 0;
        for (const auto& [v, k] : e) d += k;
        return d;
    };
    return deg(terms.begin()->first) == deg(terms.rbegin()->first);
}

void DiagonalPolynomial::add(const DExp& e, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = terms.emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

DiagonalPolynomial& DiagonalPolynomial::operator+=(const DiagonalPolynomial& o) {
    for (const auto& [e, c] : o.terms) add(e, c);
    return *this;
}

DiagonalPolynomial& DiagonalPolynomial::operator-=(const DiagonalPolynomial& o) {
    for (const auto& [e, c] : o.terms) add(e, -c);
    return *this;
}

DiagonalPolynomial& DiagonalPolynomial::operator*=(const DiagonalPolynomial& o) {
    DiagonalPolynomial out;
    for (const auto& [ea, ca] : terms) {
        for (const auto& [eb, cb] : o.terms) {
            DExp e = ea;
            for (const auto& [v, k] : eb) e[v] += k;
            out.add(e, ca * cb);
        }
    }
    terms.swap(out.terms);
    return *this;
}

DiagonalPolynomial& DiagonalPolynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms.clear();
        return *this;
    }
    for (auto& [e, k] : terms) k *= c;
    return *this;
}

std::string DiagonalPolynomial::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        Rational c = it->second;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        bool lead = true;
        if (c != 1 || it->first.empty()) {
            os << to_string(c);
            lead = false;
        }
        for (const auto& [v, k] : it->first) {
            if (!lead) os << "*";
            lead = false;
            os << "d" << v;
            if (k != 1) os << "^" << k;
        }
    }
    return os.str();
}

namespace {

// ((d_i + s*d_j)/2)^e, expanded exactly.
DiagonalPolynomial var_image_power(const VarId& v, int e) {
    DiagonalPolynomial base;
    if (v.i == v.j) {
        base.add({{v.i, 1}}, 1);  // (d_i + d_i)/2
    } else {
        base.add({{v.i, 1}}, Rational(1, 2));
        base.add({{v.j, 1}}, v.sign == Sign::plus ? Rational(1, 2) : Rational(-1, 2));
    }
    DiagonalPolynomial out = DiagonalPolynomial::constant(1);
    for (int t = 0; t < e; ++t) out *= base;
    return out;
}

// Unit-coefficient normal forms are cached: decompositions re-verify the
// same monomials many times over.
const DiagonalPolynomial& cached_unit_nf(const ExpMap& exps) {
    static std::mutex mu;
    static std::map<ExpMap, std::unique_ptr<DiagonalPolynomial>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[exps];
    if (!slot) {
        auto nf = std::make_unique<DiagonalPolynomial>(DiagonalPolynomial::constant(1));
        for (const auto& [v, e] : exps) *nf *= var_image_power(v, e);
        slot = std::move(nf);
    }
    return *slot;
}

}  // namespace

DiagonalPolynomial normal_form(const Monomial& m) {
    DiagonalPolynomial out = cached_unit_nf(m.exps);
    out *= m.coeff;
    return out;
}

DiagonalPolynomial normal_form(const Polynomial& p) {
    DiagonalPolynomial out;
    for (const auto& [e, c] : p.terms) {
        Monomial m(c);
        m.exps = e;
        out += normal_form(m);
    }
    return out;
}

bool equal_in_R(const Polynomial& a, const Polynomial& b) {
    return normal_form(a) == normal_form(b);
}

Polynomial diagonal_lift(const DiagonalPolynomial& q) {
    Polynomial out;
    for (const auto& [e, c] : q.terms) {
        Monomial m(c);
        for (const auto& [i, k] : e) m.mul_var(Sign::plus, i, i, k);
        out.add_term(m);
    }
    return out;
}

std::vector<Polynomial> ideal_generators(const std::vector<int>& X) {
    std::vector<Polynomial> gens;
    auto var = [](Sign s, int i, int j) { return Polynomial::var(s, i, j); };
    // Two-index relations: y-ij + y-ji and y+ij - y+ji. Under canonical
    // folding these vanish identically, but they are emitted for fidelity
    // in the unfolded presentation: we express them through the folded
    // variables, so only the triple relations carry content here.
    for (int i : X) {
        for (int j : X) {
            for (int k : X) {
                // y-ij + y-jk + y-ki (needs all three off-diagonal symbols)
                if (i != j && j != k && k != i) {
                    gens.push_back(var(Sign::minus, i, j) + var(Sign::minus, j, k) +
                                   var(Sign::minus, k, i));
                }
                // y+ij - y+jk + y-ki (needs k != i only)
                if (k != i) {
                    gens.push_back(var(Sign::plus, i, j) - var(Sign::plus, j, k) +
                                   var(Sign::minus, k, i));
                }
            }
        }
    }
    return gens;
}

}  // namespace soq
