#include "glhat/scalar.hpp"

#include <sstream>
#include <stdexcept>

namespace glhat {

Scalar::Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("scalar with zero denominator");
    canonicalize();
}

Scalar Scalar::from_poly(Poly p) {
    Scalar s;
    s.num_ = std::move(p);
    s.den_ = Poly(1L);
    return s;
}

Scalar Scalar::hbar() {
    return from_poly(Poly::variable(Var::Eps1) + Poly::variable(Var::Eps2));
}

bool Scalar::is_one() const {
    return num_.is_constant() && den_.is_constant() && !num_.is_zero() &&
           num_.constant_value() == den_.constant_value();
}

std::optional<Rat> Scalar::as_rational() const {
    if (!is_rational()) return std::nullopt;
    if (num_.is_zero()) return Rat(0);
    return num_.constant_value() / den_.constant_value();
}

void Scalar::canonicalize() {
    if (num_.is_zero()) {
        den_ = Poly(1L);
        return;
    }
    if (!den_.is_constant()) {
        Poly g = Poly::gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = *num_.divided_by(g);
            den_ = *den_.divided_by(g);
        }
    }
    Rat lc = den_.leading().coeff;
    if (lc != 1) {
        Rat inv = Rat(1) / lc;
        num_.scale(inv);
        den_.scale(inv);
    }
}

void Scalar::make_monic_den() {
    Rat lc = den_.leading().coeff;
    if (lc != 1) {
        Rat inv = Rat(1) / lc;
        num_.scale(inv);
        den_.scale(inv);
    }
}

Scalar Scalar::operator-() const {
    Scalar r(*this);
    r.num_ = -r.num_;
    return r;
}

// Sums and products cancel shared factors before multiplying out, so the
// gcd calls only ever see operands the size of the inputs.
Scalar& Scalar::operator+=(const Scalar& o) {
    if (o.num_.is_zero()) return *this;
    if (num_.is_zero()) return *this = o;
    if (den_ == o.den_) {
        num_ += o.num_;
        if (!den_.is_constant()) {
            Poly g = Poly::gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = *num_.divided_by(g);
                den_ = *den_.divided_by(g);
            }
        }
        if (num_.is_zero()) den_ = Poly(1L);
        make_monic_den();
        return *this;
    }
    if (den_.is_constant() && o.den_.is_constant()) {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
        if (num_.is_zero()) den_ = Poly(1L);
        make_monic_den();
        return *this;
    }
    Poly g = Poly::gcd(den_, o.den_);
    if (g.is_constant()) {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
    } else {
        Poly a = *den_.divided_by(g);
        Poly b = *o.den_.divided_by(g);
        Poly t = num_ * b + o.num_ * a;
        Poly h = Poly::gcd(t, g);
        if (h.is_constant()) {
            num_ = std::move(t);
            den_ = g * a * b;
        } else {
            num_ = *t.divided_by(h);
            den_ = *g.divided_by(h) * a * b;
        }
    }
    if (num_.is_zero()) den_ = Poly(1L);
    make_monic_den();
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    return *this += -o;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    if (num_.is_zero()) return *this;
    if (o.num_.is_zero()) {
        num_ = Poly();
        den_ = Poly(1L);
        return *this;
    }
    Poly on = o.num_, od = o.den_;
    if (!od.is_constant() && !num_.is_constant()) {
        Poly g = Poly::gcd(num_, od);
        if (!g.is_constant()) {
            num_ = *num_.divided_by(g);
            od = *od.divided_by(g);
        }
    }
    if (!den_.is_constant() && !on.is_constant()) {
        Poly g = Poly::gcd(on, den_);
        if (!g.is_constant()) {
            on = *on.divided_by(g);
            den_ = *den_.divided_by(g);
        }
    }
    num_ *= on;
    den_ *= od;
    make_monic_den();
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.num_.is_zero()) throw std::domain_error("scalar division by zero");
    Scalar inv;
    inv.num_ = o.den_;
    inv.den_ = o.num_;
    return *this *= inv;
}

Scalar Scalar::inverse() const {
    if (num_.is_zero()) throw std::domain_error("inverse of zero scalar");
    Scalar r;
    r.num_ = den_;
    r.den_ = num_;
    r.canonicalize();
    return r;
}

Scalar Scalar::pow(int e) const {
    if (e == 0) return Scalar(1);
    Scalar base = e < 0 ? inverse() : *this;
    int k = e < 0 ? -e : e;
    Scalar r(1);
    while (k) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

int Scalar::compare(const Scalar& a, const Scalar& b) {
    int c = Poly::compare(a.den_, b.den_);
    if (c != 0) return c;
    return Poly::compare(a.num_, b.num_);
}

Scalar Scalar::specialize(const std::map<Var, Rat>& bindings) const {
    std::array<std::optional<Rat>, kNumVars> subst{};
    for (const auto& [v, r] : bindings) subst[static_cast<int>(v)] = r;
    Poly n = num_.substitute(subst);
    Poly d = den_.substitute(subst);
    if (d.is_zero()) throw std::domain_error("specialization zeroes the denominator");
    return Scalar(std::move(n), std::move(d));
}

std::string Scalar::to_string() const {
    if (den_.is_constant()) {
        if (num_.is_constant()) return num_.is_zero() ? "0" : num_.constant_value().get_str();
        if (num_.terms().size() == 1) return num_.to_string();
        return "(" + num_.to_string() + ")";
    }
    std::ostringstream os;
    os << "(" << num_.to_string() << ")/(" << den_.to_string() << ")";
    return os.str();
}

}  // namespace glhat
