#pragma once

#include "glhat/poly.hpp"

#include <map>
#include <optional>
#include <string>

namespace glhat {

// The coefficient field: rational functions in eps1, eps2, alpha over Q.
// Canonical form: gcd(num, den) = 1 and den monic in grlex order, so
// equality is plain syntactic equality.
class Scalar {
  public:
    Scalar() : num_(), den_(1L) {}
    Scalar(long v) : num_(v), den_(1L) {}
    explicit Scalar(const Rat& v) : num_(v), den_(1L) {}
    Scalar(Poly num, Poly den);
    static Scalar from_poly(Poly p);
    static Scalar variable(Var v) { return from_poly(Poly::variable(v)); }
    static Scalar eps1() { return variable(Var::Eps1); }
    static Scalar eps2() { return variable(Var::Eps2); }
    static Scalar alpha() { return variable(Var::Alpha); }
    // hbar = eps1 + eps2, the paper's deformation unit.
    static Scalar hbar();

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
    std::optional<Rat> as_rational() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    Scalar inverse() const;
    Scalar pow(int e) const;

    bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    static int compare(const Scalar& a, const Scalar& b);

    // Substitutes rationals for a subset of {eps1, eps2, alpha}.
    // Throws std::domain_error when the denominator vanishes.
    Scalar specialize(const std::map<Var, Rat>& bindings) const;

    std::string to_string() const;

  private:
    Poly num_, den_;
    void canonicalize();
    void make_monic_den();
};

}  // namespace glhat
