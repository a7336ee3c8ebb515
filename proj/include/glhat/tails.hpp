#pragma once

#include "glhat/pbw.hpp"

#include <array>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace glhat {

struct UnsupportedShape : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Polynomial in the summation indices (at most two) with Scalar coefficients.
// Index-polynomial coefficients enter through the cocycle's mode factor and
// survive delta resolution only when the delta ties the two indices.
class IndexPoly {
  public:
    using Key = std::array<int, 2>;  // exponents of idx0, idx1

    IndexPoly() = default;
    explicit IndexPoly(Scalar constant);
    static IndexPoly index(int slot);  // the monomial idx_slot

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    const std::map<Key, Scalar>& terms() const { return terms_; }
    Scalar constant_value() const;

    IndexPoly& operator+=(const IndexPoly& o);
    friend IndexPoly operator*(const IndexPoly& a, const IndexPoly& b);
    IndexPoly& scale(const Scalar& s);
    IndexPoly operator-() const;

    // Affine reindexings used by delta resolution and phase shifts.
    IndexPoly substitute_const(int slot, long value) const;
    IndexPoly substitute_slot(int slot, int target_slot, long shift) const;  // idx_slot := idx_target + shift
    IndexPoly shift(int slot, long delta) const;                             // idx_slot := idx_slot + delta
    IndexPoly swap_slots() const;

    Scalar eval(long s, long t) const;

    bool operator==(const IndexPoly& o) const { return terms_ == o.terms_; }
    static int compare(const IndexPoly& a, const IndexPoly& b);
    std::string to_string() const;

  private:
    std::map<Key, Scalar> terms_;
    void add(const Key& k, const Scalar& c);
};

// mode = coef[0]*idx0 + coef[1]*idx1 + cst
struct AffineMode {
    std::array<int, 2> coef{0, 0};
    long cst = 0;

    static AffineMode constant(long c) { return {{0, 0}, c}; }
    long eval(long s, long t) const { return coef[0] * s + coef[1] * t + cst; }
    bool is_constant() const { return coef[0] == 0 && coef[1] == 0; }
    friend auto operator<=>(const AffineMode&, const AffineMode&) = default;
};

struct FactorPat {
    std::uint8_t row = 1;
    std::uint8_t col = 1;
    AffineMode mode;

    FactorPat() = default;
    FactorPat(int r, int c, AffineMode m)
        : row(static_cast<std::uint8_t>(r)), col(static_cast<std::uint8_t>(c)), mode(m) {}
    static FactorPat constant(const Unit& u) {
        return FactorPat(u.row, u.col, AffineMode::constant(u.mode));
    }
    Unit instantiate(long s, long t) const {
        return Unit(row, col, static_cast<int>(mode.eval(s, t)));
    }
    friend auto operator<=>(const FactorPat&, const FactorPat&) = default;
};

// Kronecker constraint coef[0]*idx0 + coef[1]*idx1 + cst == 0.
struct DeltaCon {
    std::array<int, 2> coef{0, 0};
    long cst = 0;

    bool satisfied(long s, long t) const { return coef[0] * s + coef[1] * t + cst == 0; }
    friend auto operator<=>(const DeltaCon&, const DeltaCon&) = default;
};

// A formal sum over idx0 >= 0 (and idx1 >= 0 when arity = 2) of
//   coeff(idx) * c^c_exp z^z_exp * prod factors(idx),
// restricted to index tuples satisfying every delta.
struct TailFamily {
    int arity = 1;
    IndexPoly coeff;
    int c_exp = 0;
    int z_exp = 0;
    std::vector<FactorPat> factors;
    std::vector<DeltaCon> deltas;
    // Set by canonicalize on one-index families whose pattern is PBW-ordered
    // for every index value; only such families participate in decidable
    // symbolic equality.
    bool stable = false;

    int parity(const RankData& ctx) const;
    std::string to_string() const;
};

struct CompletionElement {
    AlgebraElement finite;
    std::vector<TailFamily> tails;

    static CompletionElement from_algebra(AlgebraElement x) {
        CompletionElement e;
        e.finite = std::move(x);
        return e;
    }
    bool has_tails() const { return !tails.empty(); }
    bool is_empty() const { return finite.is_zero() && tails.empty(); }

    CompletionElement& operator+=(const CompletionElement& o);
    CompletionElement& operator-=(const CompletionElement& o);
    friend CompletionElement operator+(CompletionElement a, const CompletionElement& b) {
        return a += b;
    }
    friend CompletionElement operator-(CompletionElement a, const CompletionElement& b) {
        return a -= b;
    }
    CompletionElement& scale(const Scalar& s);

    std::string to_string() const;
};

// Substitutes every admissible index tuple in 0..S_max into each family and
// adds the finite part: the brute-force truncation oracle.
AlgebraElement expand(const RankData& ctx, const CompletionElement& x, int S_max);

// Resolves each Kronecker delta: a delta either fixes an index to a unique
// admissible value, ties the two indices of a two-index family, enumerates a
// bounded antidiagonal, or kills the term.
CompletionElement resolve_deltas(const RankData& ctx, const TailFamily& fam);

// Canonical form: deltas resolved, one-index families phase-normalized
// (boundary terms moved into the finite part), two-index families put under
// a canonical index naming, equal patterns merged, deterministic order.
CompletionElement canonicalize(const RankData& ctx, const CompletionElement& x);

// True when the canonical form is decidably zero: empty, with the caveat
// that leftover non-stable families make symbolic equality undecidable.
bool is_zero_canonical(const CompletionElement& canonical);
bool fully_decidable(const CompletionElement& canonical);

// Super bracket of a tail family with a finite element (Leibniz expansion;
// the cocycle generates delta-constrained terms). `reversed` computes
// [x, F] instead of [F, x].
CompletionElement family_bracket_finite(const RankData& ctx, const TailFamily& fam,
                                        const AlgebraElement& x, bool reversed = false);

// Super bracket of two one-index quadratic families. Throws UnsupportedShape
// on anything larger.
CompletionElement family_bracket_family(const RankData& ctx, const TailFamily& f,
                                        const TailFamily& g);

// Super bracket on completion elements, dispatching over finite and tail
// parts. Results are canonicalized.
CompletionElement bracket_cc(const RankData& ctx, const CompletionElement& x,
                             const CompletionElement& y);

// Product / anticommutator; defined for finite operands only (the identity
// checks never need symbolic products of infinite tails).
CompletionElement multiply_cc(const RankData& ctx, const CompletionElement& x,
                              const CompletionElement& y);
CompletionElement anticommutator_cc(const RankData& ctx, const CompletionElement& x,
                                    const CompletionElement& y);

}  // namespace glhat
