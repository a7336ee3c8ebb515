#include "glhat/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace glhat {

Rat rat_from_string(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    Rat r;
    if (r.set_str(text, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + text);
    r.canonicalize();
    return r;
}

std::string to_string(const Rat& r) {
    return r.get_str();
}

ExpoKey pack_expo(unsigned e1, unsigned e2, unsigned e3) {
    unsigned deg = e1 + e2 + e3;
    if (deg > kMaxExp)
        throw std::overflow_error("polynomial degree exceeds packed exponent range");
    return (static_cast<ExpoKey>(deg) << 24) | (e1 << 16) | (e2 << 8) | e3;
}

std::array<unsigned, 3> unpack_expo(ExpoKey key) {
    return {(key >> 16) & 0xffu, (key >> 8) & 0xffu, key & 0xffu};
}

Poly::Poly(const Rat& constant) {
    if (constant != 0) terms_.push_back({pack_expo(0, 0, 0), constant});
}

Poly::Poly(long constant) : Poly(Rat(constant)) {}

Poly Poly::variable(Var v, unsigned exp) {
    if (exp == 0) return Poly(1L);
    unsigned e[3] = {0, 0, 0};
    e[static_cast<int>(v)] = exp;
    Poly p;
    p.terms_.push_back({pack_expo(e[0], e[1], e[2]), Rat(1)});
    return p;
}

Poly Poly::term(const Rat& coeff, unsigned e1, unsigned e2, unsigned e3) {
    Poly p;
    if (coeff != 0) p.terms_.push_back({pack_expo(e1, e2, e3), coeff});
    return p;
}

Poly Poly::from_sorted_terms(std::vector<Term> terms) {
    Poly p;
    p.terms_ = std::move(terms);
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].expo == pack_expo(0, 0, 0));
}

Rat Poly::constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant()) throw std::logic_error("constant_value on non-constant polynomial");
    return terms_[0].coeff;
}

int Poly::total_degree() const {
    if (terms_.empty()) return -1;
    return static_cast<int>(terms_.back().expo >> 24);
}

int Poly::degree_in(Var v) const {
    int idx = static_cast<int>(v);
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, static_cast<int>(unpack_expo(t.expo)[idx]));
    return d;
}

Poly Poly::operator-() const {
    Poly r(*this);
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) {
        terms_ = o.terms_;
        return *this;
    }
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin(), ae = terms_.end();
    auto b = o.terms_.begin(), be = o.terms_.end();
    while (a != ae && b != be) {
        if (a->expo < b->expo) {
            out.push_back(std::move(*a++));
        } else if (b->expo < a->expo) {
            out.push_back(*b++);
        } else {
            Rat c = a->coeff + b->coeff;
            if (c != 0) out.push_back({a->expo, std::move(c)});
            ++a;
            ++b;
        }
    }
    out.insert(out.end(), a, ae);
    out.insert(out.end(), b, be);
    terms_ = std::move(out);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.terms_.empty()) return *this;
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin(), ae = terms_.end();
    auto b = o.terms_.begin(), be = o.terms_.end();
    while (a != ae && b != be) {
        if (a->expo < b->expo) {
            out.push_back(std::move(*a++));
        } else if (b->expo < a->expo) {
            out.push_back({b->expo, -b->coeff});
            ++b;
        } else {
            Rat c = a->coeff - b->coeff;
            if (c != 0) out.push_back({a->expo, std::move(c)});
            ++a;
            ++b;
        }
    }
    out.insert(out.end(), a, ae);
    for (; b != be; ++b) out.push_back({b->expo, -b->coeff});
    terms_ = std::move(out);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.terms_.empty() || b.terms_.empty()) return Poly();
    // Monomial times polynomial is the common case in scalar arithmetic.
    if (a.terms_.size() == 1 || b.terms_.size() == 1) {
        const Poly& mono = a.terms_.size() == 1 ? a : b;
        const Poly& many = a.terms_.size() == 1 ? b : a;
        const auto me = unpack_expo(mono.terms_[0].expo);
        std::vector<Poly::Term> out;
        out.reserve(many.terms_.size());
        for (const auto& t : many.terms_) {
            const auto te = unpack_expo(t.expo);
            out.push_back({pack_expo(me[0] + te[0], me[1] + te[1], me[2] + te[2]),
                           mono.terms_[0].coeff * t.coeff});
        }
        return Poly::from_sorted_terms(std::move(out));
    }
    std::map<ExpoKey, Rat> acc;
    for (const auto& ta : a.terms_) {
        const auto ea = unpack_expo(ta.expo);
        for (const auto& tb : b.terms_) {
            const auto eb = unpack_expo(tb.expo);
            acc[pack_expo(ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])] += ta.coeff * tb.coeff;
        }
    }
    std::vector<Poly::Term> out;
    out.reserve(acc.size());
    for (auto& [k, c] : acc)
        if (c != 0) out.push_back({k, std::move(c)});
    return Poly::from_sorted_terms(std::move(out));
}

Poly& Poly::operator*=(const Poly& o) {
    *this = *this * o;
    return *this;
}

Poly& Poly::scale(const Rat& r) {
    if (r == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= r;
    return *this;
}

bool Poly::operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].expo != o.terms_[i].expo || terms_[i].coeff != o.terms_[i].coeff)
            return false;
    return true;
}

int Poly::compare(const Poly& a, const Poly& b) {
    // Compare from the leading end so "bigger" polynomials sort later.
    auto ia = a.terms_.rbegin();
    auto ib = b.terms_.rbegin();
    for (; ia != a.terms_.rend() && ib != b.terms_.rend(); ++ia, ++ib) {
        if (ia->expo != ib->expo) return ia->expo < ib->expo ? -1 : 1;
        int c = cmp(ia->coeff, ib->coeff);
        if (c != 0) return c;
    }
    if (ia != a.terms_.rend()) return 1;
    if (ib != b.terms_.rend()) return -1;
    return 0;
}

Poly Poly::substitute(const std::array<std::optional<Rat>, kNumVars>& bindings) const {
    Poly out;
    std::map<ExpoKey, Rat> acc;
    for (const auto& t : terms_) {
        auto e = unpack_expo(t.expo);
        Rat c = t.coeff;
        for (int v = 0; v < kNumVars; ++v) {
            if (bindings[v] && e[v] > 0) {
                Rat p(1);
                for (unsigned k = 0; k < e[v]; ++k) p *= *bindings[v];
                c *= p;
                e[v] = 0;
            }
        }
        if (c != 0) acc[pack_expo(e[0], e[1], e[2])] += c;
    }
    std::vector<Term> terms;
    for (auto& [k, c] : acc)
        if (c != 0) terms.push_back({k, std::move(c)});
    return from_sorted_terms(std::move(terms));
}

std::optional<Poly> Poly::divided_by(const Poly& o) const {
    if (o.terms_.empty()) throw std::domain_error("polynomial division by zero");
    Poly rem(*this);
    std::map<ExpoKey, Rat> quot;
    const auto oe = unpack_expo(o.leading().expo);
    while (!rem.terms_.empty()) {
        const auto re = unpack_expo(rem.leading().expo);
        if (re[0] < oe[0] || re[1] < oe[1] || re[2] < oe[2]) return std::nullopt;
        ExpoKey qk = pack_expo(re[0] - oe[0], re[1] - oe[1], re[2] - oe[2]);
        Rat qc = rem.leading().coeff / o.leading().coeff;
        quot[qk] += qc;
        Poly qt;
        qt.terms_.push_back({qk, std::move(qc)});
        rem -= qt * o;
    }
    std::vector<Term> terms;
    for (auto& [k, c] : quot)
        if (c != 0) terms.push_back({k, std::move(c)});
    return from_sorted_terms(std::move(terms));
}

namespace {

// Recursive multivariate gcd via primitive PRS. Polynomials are viewed as
// univariate in `var` with Poly coefficients in the remaining variables.
using UniPoly = std::vector<Poly>;  // index = exponent of the main variable

UniPoly to_uni(const Poly& p, int var) {
    UniPoly u(static_cast<std::size_t>(p.degree_in(static_cast<Var>(var))) + 1);
    for (const auto& t : p.terms()) {
        auto e = unpack_expo(t.expo);
        unsigned d = e[var];
        e[var] = 0;
        u[d] += Poly::from_sorted_terms({{pack_expo(e[0], e[1], e[2]), t.coeff}});
    }
    while (u.size() > 1 && u.back().is_zero()) u.pop_back();
    return u;
}

Poly from_uni(const UniPoly& u, int var) {
    Poly out;
    for (std::size_t d = 0; d < u.size(); ++d) {
        if (u[d].is_zero()) continue;
        out += u[d] * Poly::variable(static_cast<Var>(var), static_cast<unsigned>(d));
    }
    return out;
}

int uni_deg(const UniPoly& u) {
    for (int d = static_cast<int>(u.size()) - 1; d >= 0; --d)
        if (!u[d].is_zero()) return d;
    return -1;
}

Poly gcd_impl(Poly a, Poly b);

Poly content(const UniPoly& u) {
    Poly g;
    for (const auto& c : u) {
        if (c.is_zero()) continue;
        g = gcd_impl(g, c);
        if (g.is_constant() && !g.is_zero()) break;
    }
    return g;
}

UniPoly uni_divide_coeffs(const UniPoly& u, const Poly& d) {
    UniPoly out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i].is_zero()) continue;
        auto q = u[i].divided_by(d);
        if (!q) throw std::logic_error("content division failed");
        out[i] = std::move(*q);
    }
    return out;
}

// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b in the main variable.
UniPoly uni_prem(UniPoly a, const UniPoly& b) {
    int db = uni_deg(b);
    const Poly& lb = b[db];
    int da = uni_deg(a);
    int pending = da - db + 1;
    while (da >= db && da >= 0) {
        Poly la = a[da];
        // a := lb*a - la*x^(da-db)*b
        UniPoly next(std::max(a.size(), b.size() + (da - db)));
        for (std::size_t i = 0; i < a.size(); ++i) next[i] = a[i] * lb;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (b[i].is_zero()) continue;
            next[i + (da - db)] -= la * b[i];
        }
        a = std::move(next);
        --pending;
        int nda = uni_deg(a);
        if (nda >= da) throw std::logic_error("pseudo-remainder degree did not drop");
        da = nda;
    }
    // Leading-term cancellations can skip reduction steps; pad with the
    // remaining lc(b) powers so the subresultant divisions stay exact.
    for (; pending > 0; --pending)
        for (auto& coeff : a) coeff *= lb;
    while (!a.empty() && a.back().is_zero()) a.pop_back();
    return a;
}

Poly make_monic(Poly p) {
    if (p.is_zero()) return p;
    Rat lc = p.leading().coeff;
    p.scale(Rat(1) / lc);
    return p;
}

Poly poly_pow(const Poly& p, int e) {
    Poly r(1L);
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

Poly exact_div(const Poly& a, const Poly& b) {
    auto q = a.divided_by(b);
    if (!q) throw std::logic_error("expected exact polynomial division");
    return std::move(*q);
}

// Subresultant PRS gcd of primitive inputs (Geddes-Czapor-Labahn Alg. 7.1).
// Content is stripped once at the end, which keeps the recursion shallow.
UniPoly subresultant_prs(UniPoly A, UniPoly B) {
    Poly g(1L), h(1L);
    while (true) {
        int da = uni_deg(A), db = uni_deg(B);
        if (db < 0) return A;
        if (da < db) {
            std::swap(A, B);
            std::swap(da, db);
        }
        int delta = da - db;
        UniPoly R = uni_prem(A, B);
        if (uni_deg(R) < 0) return B;
        Poly divisor = g * poly_pow(h, delta);
        A = std::move(B);
        B.assign(R.size(), Poly());
        for (std::size_t i = 0; i < R.size(); ++i)
            if (!R[i].is_zero()) B[i] = exact_div(R[i], divisor);
        g = A[uni_deg(A)];
        if (delta > 0) h = exact_div(poly_pow(g, delta), poly_pow(h, delta - 1));
    }
}

Poly gcd_impl(Poly a, Poly b) {
    if (a.is_zero()) return make_monic(std::move(b));
    if (b.is_zero()) return make_monic(std::move(a));
    if (a.is_constant() || b.is_constant()) return Poly(1L);

    int var = -1;
    for (int v = 0; v < kNumVars && var < 0; ++v)
        if (a.degree_in(static_cast<Var>(v)) > 0 || b.degree_in(static_cast<Var>(v)) > 0)
            var = v;
    if (a.degree_in(static_cast<Var>(var)) == 0 || b.degree_in(static_cast<Var>(var)) == 0) {
        // One operand does not involve the chosen variable: the gcd divides
        // its coefficients, so recurse into contents only.
        UniPoly ua = to_uni(a, var), ub = to_uni(b, var);
        return make_monic(gcd_impl(content(ua), content(ub)));
    }

    UniPoly ua = to_uni(a, var), ub = to_uni(b, var);
    Poly ca = content(ua), cb = content(ub);
    UniPoly pa = uni_divide_coeffs(ua, ca);
    UniPoly pb = uni_divide_coeffs(ub, cb);
    Poly cg = gcd_impl(ca, cb);

    UniPoly prs = subresultant_prs(std::move(pa), std::move(pb));
    if (uni_deg(prs) == 0) return make_monic(std::move(cg));
    Poly cr = content(prs);
    Poly g = from_uni(uni_divide_coeffs(prs, cr), var) * cg;
    return make_monic(std::move(g));
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) {
    return gcd_impl(a, b);
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Print leading-first for readability.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        Rat c = it->coeff;
        const auto e = unpack_expo(it->expo);
        bool neg = c < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        bool unit_coeff = (c == 1);
        bool has_vars = e[0] + e[1] + e[2] > 0;
        if (!unit_coeff || !has_vars) os << c.get_str();
        bool printed = !unit_coeff || !has_vars;
        for (int v = 0; v < kNumVars; ++v) {
            if (e[v] == 0) continue;
            if (printed) os << "*";
            os << var_name(static_cast<Var>(v));
            if (e[v] > 1) os << "^" << e[v];
            printed = true;
        }
    }
    return os.str();
}

}  // namespace glhat
