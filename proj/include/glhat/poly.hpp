#pragma once

#include "glhat/rational.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace glhat {

// Multivariate polynomials over Q in the three deformation parameters.
// Exponents are packed into a single integer whose natural order is
// graded lexicographic with eps1 > eps2 > alpha, so term comparison is
// one integer compare.
enum class Var : int { Eps1 = 0, Eps2 = 1, Alpha = 2 };

inline const char* var_name(Var v) {
    switch (v) {
        case Var::Eps1: return "eps1";
        case Var::Eps2: return "eps2";
        default: return "alpha";
    }
}

using ExpoKey = std::uint32_t;

constexpr int kNumVars = 3;
constexpr unsigned kMaxExp = 255;

ExpoKey pack_expo(unsigned e1, unsigned e2, unsigned e3);
std::array<unsigned, 3> unpack_expo(ExpoKey key);

class Poly {
  public:
    struct Term {
        ExpoKey expo;
        Rat coeff;
    };

    Poly() = default;
    explicit Poly(const Rat& constant);
    explicit Poly(long constant);
    static Poly variable(Var v, unsigned exp = 1);
    static Poly term(const Rat& coeff, unsigned e1, unsigned e2, unsigned e3);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Constant value; zero polynomial yields 0. Requires is_constant().
    Rat constant_value() const;
    int total_degree() const;
    int degree_in(Var v) const;

    const std::vector<Term>& terms() const { return terms_; }
    const Term& leading() const { return terms_.back(); }

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator*=(const Poly& o);
    Poly& scale(const Rat& r);

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }
    // Deterministic total order (grlex on term lists).
    static int compare(const Poly& a, const Poly& b);

    // Substitutes rational values for a subset of the variables.
    Poly substitute(const std::array<std::optional<Rat>, kNumVars>& bindings) const;

    // Exact division; returns nullopt when o does not divide this.
    std::optional<Poly> divided_by(const Poly& o) const;

    // Monic gcd (leading coefficient 1 in grlex order); gcd(0,0) = 0.
    static Poly gcd(const Poly& a, const Poly& b);

    std::string to_string() const;

    // Internal: assumes sorted unique keys with nonzero coefficients.
    static Poly from_sorted_terms(std::vector<Term> terms);

  private:
    // Ascending grlex order, no zero coefficients.
    std::vector<Term> terms_;

    void add_term(ExpoKey key, const Rat& coeff);
    friend class PolyBuilder;
};

}  // namespace glhat
