#include "glhat/loop.hpp"

#include <sstream>

namespace glhat {

std::string to_string(const Unit& u) {
    std::ostringstream os;
    os << "E(" << int(u.row) << "," << int(u.col) << "|" << u.mode << ")";
    return os.str();
}

int supertrace_pair(const RankData& ctx, int a, int b, int c, int d) {
    if (a < 1 || b < 1 || c < 1 || d < 1 || a > ctx.size() || b > ctx.size() || c > ctx.size() ||
        d > ctx.size())
        throw std::out_of_range("supertrace index out of range");
    if (b != c || a != d) return 0;
    return parity(ctx, a) ? -1 : 1;
}

UnitBracket bracket_units(const RankData& ctx, const Unit& x, const Unit& y) {
    UnitBracket out;
    const int a = x.row, b = x.col, c = y.row, d = y.col;
    const int mode = x.mode + y.mode;
    if (b == c) {
        out.units[out.count] = Unit(a, d, mode);
        out.signs[out.count] = 1;
        ++out.count;
    }
    if (d == a) {
        int sgn = (unit_parity(ctx, x) & unit_parity(ctx, y)) ? 1 : -1;
        // -(-1)^{|x||y|} E_{c,b}(u+v)
        out.units[out.count] = Unit(c, b, mode);
        out.signs[out.count] = sgn;
        ++out.count;
    }
    if (mode == 0 && x.mode != 0) {
        // omega(x,y) = u * ( str(xy) c + delta_{a,b} delta_{c,d} (-1)^{p(a)+p(c)} z )
        if (b == c && a == d) out.c_coeff = static_cast<long>(x.mode) * (parity(ctx, a) ? -1 : 1);
        if (a == b && c == d) {
            int sgn = ((parity(ctx, a) + parity(ctx, c)) & 1) ? -1 : 1;
            out.z_coeff = static_cast<long>(x.mode) * sgn;
        }
    }
    return out;
}

void LieElement::add_unit(const Unit& u, const Scalar& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = units.try_emplace(u, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) units.erase(it);
    }
}

LieElement& LieElement::operator+=(const LieElement& o) {
    for (const auto& [u, s] : o.units) add_unit(u, s);
    c_coeff += o.c_coeff;
    z_coeff += o.z_coeff;
    return *this;
}

LieElement& LieElement::operator-=(const LieElement& o) {
    for (const auto& [u, s] : o.units) add_unit(u, -s);
    c_coeff -= o.c_coeff;
    z_coeff -= o.z_coeff;
    return *this;
}

LieElement& LieElement::scale(const Scalar& s) {
    if (s.is_zero()) {
        units.clear();
        c_coeff = Scalar(0);
        z_coeff = Scalar(0);
        return *this;
    }
    for (auto& [u, v] : units) v *= s;
    c_coeff *= s;
    z_coeff *= s;
    return *this;
}

bool LieElement::operator==(const LieElement& o) const {
    return units == o.units && c_coeff == o.c_coeff && z_coeff == o.z_coeff;
}

std::string LieElement::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    auto sep = [&]() {
        if (!first) os << " + ";
        first = false;
    };
    for (const auto& [u, s] : units) {
        sep();
        os << s.to_string() << "*" << glhat::to_string(u);
    }
    if (!c_coeff.is_zero()) {
        sep();
        os << c_coeff.to_string() << "*c";
    }
    if (!z_coeff.is_zero()) {
        sep();
        os << z_coeff.to_string() << "*z";
    }
    return os.str();
}

LieElement lie_unit(const Unit& u, Scalar coeff) {
    LieElement e;
    e.add_unit(u, coeff);
    return e;
}

LieElement lie_c(Scalar coeff) {
    LieElement e;
    e.c_coeff = std::move(coeff);
    return e;
}

LieElement lie_z(Scalar coeff) {
    LieElement e;
    e.z_coeff = std::move(coeff);
    return e;
}

LieElement bracket(const RankData& ctx, const LieElement& x, const LieElement& y) {
    LieElement out;
    for (const auto& [ux, sx] : x.units) {
        for (const auto& [uy, sy] : y.units) {
            UnitBracket ub = bracket_units(ctx, ux, uy);
            Scalar coeff = sx * sy;
            for (int k = 0; k < ub.count; ++k)
                out.add_unit(ub.units[k], ub.signs[k] > 0 ? coeff : -coeff);
            if (ub.c_coeff != 0) out.c_coeff += coeff * Scalar(Rat(ub.c_coeff));
            if (ub.z_coeff != 0) out.z_coeff += coeff * Scalar(Rat(ub.z_coeff));
        }
    }
    return out;
}

}  // namespace glhat
