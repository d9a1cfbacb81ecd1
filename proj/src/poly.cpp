#include "soq/poly.hpp"

#include <cctype>
#include <sstream>

namespace soq {

std::pair<VarId, int> fold_var(Sign sign, int i, int j) {
    if (i < 0 || j < 0) throw std::invalid_argument("negative variable index");
    if (i == j && sign == Sign::minus) throw std::invalid_argument("y-ii does not exist");
    if (i <= j) return {VarId{sign, i, j}, +1};
    return {VarId{sign, j, i}, sign == Sign::minus ? -1 : +1};
}

int total_degree(const ExpMap& e) {
    int d = 0;
    for (const auto& [v, k] : e) d += k;
    return d;
}

bool GrlexLess::operator()(const ExpMap& a, const ExpMap& b) const {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;  // lexicographic on (variable, exponent) pairs
}

Monomial& Monomial::mul_var(Sign sign, int i, int j, int e) {
    if (e < 0) throw std::invalid_argument("negative exponent");
    if (e == 0) return *this;
    auto [v, s] = fold_var(sign, i, j);
    if (s < 0 && (e % 2)) coeff = -coeff;
    exps[v] += e;
    return *this;
}

Monomial& Monomial::operator*=(const Monomial& o) {
    coeff *= o.coeff;
    for (const auto& [v, e] : o.exps) exps[v] += e;
    return *this;
}

std::optional<Monomial> Monomial::divide_by(const Monomial& d) const {
    if (d.coeff == 0) throw std::invalid_argument("division by zero monomial");
    Monomial q;
    q.coeff = coeff / d.coeff;
    q.exps = exps;
    for (const auto& [v, e] : d.exps) {
        auto it = q.exps.find(v);
        if (it == q.exps.end() || it->second < e) return std::nullopt;
        it->second -= e;
        if (it->second == 0) q.exps.erase(it);
    }
    return q;
}

Polynomial Monomial::as_poly() const { return Polynomial(*this); }

Polynomial Polynomial::constant(Rational c) {
    Polynomial p;
    p.add_term(Monomial(std::move(c)));
    return p;
}

Polynomial Polynomial::var(Sign sign, int i, int j) {
    Monomial m;
    m.mul_var(sign, i, j);
    return Polynomial(m);
}

int Polynomial::degree() const {
    if (terms.empty()) return -1;
    return total_degree(terms.rbegin()->first);
}

bool Polynomial::is_homogeneous() const {
    if (terms.empty()) return true;
    return total_degree(terms.begin()->first) == total_degree(terms.rbegin()->first);
}

void Polynomial::add_term(const Monomial& m) {
    if (m.coeff == 0) return;
    auto [it, fresh] = terms.emplace(m.exps, m.coeff);
    if (!fresh) {
        it->second += m.coeff;
        if (it->second == 0) terms.erase(it);
    }
}

std::vector<Monomial> Polynomial::monomials() const {
    std::vector<Monomial> out;
    out.reserve(terms.size());
    for (const auto& [e, c] : terms) {
        Monomial m(c);
        m.exps = e;
        out.push_back(std::move(m));
    }
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms) {
        auto [it, fresh] = terms.emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms) {
        auto [it, fresh] = terms.emplace(e, -c);
        if (!fresh) {
            it->second -= c;
            if (it->second == 0) terms.erase(it);
        }
    }
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
    Polynomial out;
    for (const auto& [ea, ca] : terms) {
        for (const auto& [eb, cb] : o.terms) {
            ExpMap e = ea;
            for (const auto& [v, k] : eb) e[v] += k;
            auto [it, fresh] = out.terms.emplace(std::move(e), ca * cb);
            if (!fresh) {
                it->second += ca * cb;
                if (it->second == 0) out.terms.erase(it);
            }
        }
    }
    terms.swap(out.terms);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms.clear();
        return *this;
    }
    for (auto& [e, k] : terms) k *= c;
    return *this;
}

Polynomial Polynomial::substitute(
    const std::function<std::optional<Polynomial>(const VarId&)>& f) const {
    Polynomial out;
    for (const auto& [e, c] : terms) {
        Polynomial term = Polynomial::constant(c);
        Monomial kept(Rational(1));
        for (const auto& [v, k] : e) {
            if (auto img = f(v)) {
                Polynomial pw = Polynomial::constant(1);
                for (int t = 0; t < k; ++t) pw *= *img;
                term *= pw;
            } else {
                kept.exps[v] += k;
            }
        }
        term *= Polynomial(kept);
        out += term;
    }
    return out;
}

namespace {

std::string index_str(int i) {
    if (i < 10) return std::to_string(i);
    return "[" + std::to_string(i) + "]";
}

std::string exps_str(const ExpMap& e, const Rational& c) {
    std::ostringstream os;
    bool lead = true;
    if (c != 1 || e.empty()) {
        os << to_string(c);
        lead = false;
    }
    for (const auto& [v, k] : e) {
        if (!lead) os << "*";
        lead = false;
        os << "y" << sign_char(v.sign) << index_str(v.i) << index_str(v.j);
        if (k != 1) os << "^" << k;
    }
    return os.str();
}

}  // namespace

std::string Monomial::str() const { return exps_str(exps, coeff); }

std::string Polynomial::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest-degree terms first for readability.
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
        os << exps_str(it->first, c);
    }
    return os.str();
}

namespace {

struct Cursor {
    std::string_view s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    char take() {
        skip_ws();
        if (pos >= s.size()) throw std::invalid_argument("unexpected end of input");
        return s[pos++];
    }
    int integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw std::invalid_argument("expected integer");
        return std::stoi(std::string(s.substr(start, pos - start)));
    }
    int index() {
        if (peek() == '[') {
            take();
            int v = integer();
            if (take() != ']') throw std::invalid_argument("expected ]");
            return v;
        }
        char c = take();
        if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("expected digit");
        return c - '0';
    }
};

Monomial parse_monomial_at(Cursor& cur) {
    Monomial m;
    bool saw_factor = false;
    bool expect_factor = true;
    while (expect_factor) {
        cur.skip_ws();
        char c = cur.peek();
        if (c == 'y') {
            cur.take();
            char sc = cur.take();
            Sign sign;
            if (sc == '+') sign = Sign::plus;
            else if (sc == '-') sign = Sign::minus;
            else throw std::invalid_argument("expected + or - after y");
            int i = cur.index();
            int j = cur.index();
            int e = 1;
            if (cur.peek() == '^') {
                cur.take();
                e = cur.integer();
            }
            m.mul_var(sign, i, j, e);
            saw_factor = true;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
            std::size_t start = cur.pos;
            if (c == '-' || c == '+') ++cur.pos;
            while (cur.pos < cur.s.size() &&
                   (std::isdigit(static_cast<unsigned char>(cur.s[cur.pos])) || cur.s[cur.pos] == '/'))
                ++cur.pos;
            m.coeff *= parse_rational(cur.s.substr(start, cur.pos - start));
            saw_factor = true;
        } else {
            throw std::invalid_argument("expected monomial factor");
        }
        if (cur.peek() == '*') {
            cur.take();
        } else {
            expect_factor = false;
        }
    }
    if (!saw_factor) throw std::invalid_argument("empty monomial");
    return m;
}

}  // namespace

Monomial parse_monomial(std::string_view text) {
    Cursor cur{text};
    Monomial m = parse_monomial_at(cur);
    if (!cur.done()) throw std::invalid_argument("trailing input after monomial");
    return m;
}

Polynomial parse_polynomial(std::string_view text) {
    Cursor cur{text};
    Polynomial p;
    int pending_sign = +1;
    if (cur.peek() == '-') {
        cur.take();
        pending_sign = -1;
    } else if (cur.peek() == '+') {
        cur.take();
    }
    while (true) {
        Monomial m = parse_monomial_at(cur);
        if (pending_sign < 0) m.coeff = -m.coeff;
        p.add_term(m);
        if (cur.done()) break;
        char c = cur.take();
        if (c == '+') pending_sign = +1;
        else if (c == '-') pending_sign = -1;
        else throw std::invalid_argument("expected + or - between terms");
    }
    return p;
}

}  // namespace soq
