#pragma once

#include "glhat/loop.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace glhat {

// PBW monomial: central exponents times a nondecreasing product of units.
// Repeated equal odd units never appear (squares of odd generators are
// rewritten away during straightening).
struct PbwMonomial {
    int c_exp = 0;
    int z_exp = 0;
    std::vector<Unit> factors;

    PbwMonomial() = default;
    PbwMonomial(std::vector<Unit> f, int c, int z) : c_exp(c), z_exp(z), factors(std::move(f)) {}

    bool is_identity() const { return c_exp == 0 && z_exp == 0 && factors.empty(); }
    long degree() const;
    int parity(const RankData& ctx) const;
    int max_abs_mode() const;

    friend std::strong_ordering operator<=>(const PbwMonomial& a, const PbwMonomial& b);
    friend bool operator==(const PbwMonomial&, const PbwMonomial&) = default;
};

std::string to_string(const PbwMonomial& m);

// Element of U(gl-hat(m|n)) in canonical PBW form.
class AlgebraElement {
  public:
    using TermMap = std::map<PbwMonomial, Scalar>;

    AlgebraElement() = default;
    static AlgebraElement one() { return term(PbwMonomial(), Scalar(1)); }
    static AlgebraElement term(PbwMonomial m, Scalar coeff);
    static AlgebraElement unit(const Unit& u, Scalar coeff = Scalar(1));

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const PbwMonomial& m, const Scalar& coeff);
    void add_term(PbwMonomial&& m, Scalar&& coeff);
    AlgebraElement& operator+=(const AlgebraElement& o);
    AlgebraElement& operator-=(const AlgebraElement& o);
    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    AlgebraElement& scale(const Scalar& s);
    bool operator==(const AlgebraElement& o) const { return terms_ == o.terms_; }

    // Largest |mode| over all unit factors (0 for central/constant terms).
    int max_abs_mode() const;

    std::string to_string() const;

  private:
    TermMap terms_;
};

// Embeds a Lie element as degree <= 1 monomials.
AlgebraElement embed(const LieElement& x);

// Canonical form of coeff * word (times c^c_exp z^z_exp) under PBW
// straightening: out-of-order adjacent factors are swapped with the
// super sign plus bracket correction; odd squares reduce via
// g*g = (1/2)[g,g]. Terminates because every rewrite strictly lowers
// (inversions, length) lexicographically summed over branches.
AlgebraElement normal_order(const RankData& ctx, std::span<const Unit> word, const Scalar& coeff,
                            int c_exp = 0, int z_exp = 0);

AlgebraElement multiply(const RankData& ctx, const AlgebraElement& x, const AlgebraElement& y);

// Super commutator x y - (-1)^{|x||y|} y x, extended bilinearly over
// parity-homogeneous PBW terms.
AlgebraElement bracket_u(const RankData& ctx, const AlgebraElement& x, const AlgebraElement& y);

// x y + y x.
AlgebraElement anticommutator(const RankData& ctx, const AlgebraElement& x, const AlgebraElement& y);

// Keeps exactly the terms all of whose factor modes lie in [-N, N].
AlgebraElement truncate_project(const AlgebraElement& x, int window);

// Decomposition of x against the adapted diagonal basis
// {h_1(s), ..., h_{m+n-1}(s), E_{1,1}(s)}: sl_part collects the expansion
// terms free of E_{1,1}(s) factors, mapped back to PBW form.
struct SlSplit {
    bool in_sl = false;
    AlgebraElement sl_part;
    AlgebraElement complement;
};

SlSplit sl_membership(const RankData& ctx, const AlgebraElement& x);

}  // namespace glhat
