#pragma once

#include "glhat/cartan.hpp"
#include "glhat/scalar.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <string>

namespace glhat {

// Matrix-unit loop generator E_{row,col}(mode) = E_{row,col} (x) t^mode.
struct Unit {
    int mode = 0;
    std::uint8_t row = 1;
    std::uint8_t col = 1;

    Unit() = default;
    Unit(int r, int c, int s) : mode(s), row(static_cast<std::uint8_t>(r)), col(static_cast<std::uint8_t>(c)) {}

    bool diagonal() const { return row == col; }

    // PBW order: mode, then row, then column.
    friend std::strong_ordering operator<=>(const Unit& a, const Unit& b) {
        if (a.mode != b.mode) return a.mode <=> b.mode;
        if (a.row != b.row) return a.row <=> b.row;
        return a.col <=> b.col;
    }
    friend bool operator==(const Unit&, const Unit&) = default;
};

std::string to_string(const Unit& u);

inline int unit_parity(const RankData& ctx, const Unit& u) {
    return unit_parity(ctx, u.row, u.col);
}

// str(E_{a,b} E_{c,d}) = delta_{b,c} delta_{a,d} (-1)^{p(a)}.
int supertrace_pair(const RankData& ctx, int a, int b, int c, int d);

// Bracket of two matrix-unit generators. Lie part has at most two units
// with integer signs; the cocycle contributes integer multiples of c and z.
struct UnitBracket {
    int count = 0;
    Unit units[2];
    int signs[2] = {0, 0};
    long c_coeff = 0;
    long z_coeff = 0;
};

UnitBracket bracket_units(const RankData& ctx, const Unit& a, const Unit& b);

// An element of gl-hat(m|n): span of matrix units plus the two centrals.
struct LieElement {
    std::map<Unit, Scalar> units;
    Scalar c_coeff = Scalar(0);
    Scalar z_coeff = Scalar(0);

    bool is_zero() const { return units.empty() && c_coeff.is_zero() && z_coeff.is_zero(); }
    void add_unit(const Unit& u, const Scalar& coeff);
    LieElement& operator+=(const LieElement& o);
    LieElement& operator-=(const LieElement& o);
    LieElement& scale(const Scalar& s);
    bool operator==(const LieElement& o) const;
    std::string to_string() const;
};

LieElement lie_unit(const Unit& u, Scalar coeff = Scalar(1));
LieElement lie_c(Scalar coeff = Scalar(1));
LieElement lie_z(Scalar coeff = Scalar(1));

// Super bracket on gl-hat(m|n), bilinear over the unit/central basis.
// Centrals bracket to zero on everything.
LieElement bracket(const RankData& ctx, const LieElement& x, const LieElement& y);

}  // namespace glhat
