#include "glhat/pbw.hpp"

#include <algorithm>
#include <sstream>

namespace glhat {

long PbwMonomial::degree() const {
    long d = 0;
    for (const auto& u : factors) d += u.mode;
    return d;
}

int PbwMonomial::parity(const RankData& ctx) const {
    int p = 0;
    for (const auto& u : factors) p ^= unit_parity(ctx, u);
    return p;
}

int PbwMonomial::max_abs_mode() const {
    int m = 0;
    for (const auto& u : factors) m = std::max(m, u.mode < 0 ? -u.mode : u.mode);
    return m;
}

std::strong_ordering operator<=>(const PbwMonomial& a, const PbwMonomial& b) {
    if (a.c_exp != b.c_exp) return a.c_exp <=> b.c_exp;
    if (a.z_exp != b.z_exp) return a.z_exp <=> b.z_exp;
    if (a.factors.size() != b.factors.size()) return a.factors.size() <=> b.factors.size();
    for (std::size_t i = 0; i < a.factors.size(); ++i) {
        auto c = a.factors[i] <=> b.factors[i];
        if (c != std::strong_ordering::equal) return c;
    }
    return std::strong_ordering::equal;
}

std::string to_string(const PbwMonomial& m) {
    if (m.is_identity()) return "1";
    std::ostringstream os;
    bool first = true;
    auto sep = [&]() {
        if (!first) os << " ";
        first = false;
    };
    if (m.c_exp) {
        sep();
        os << "c";
        if (m.c_exp > 1) os << "^" << m.c_exp;
    }
    if (m.z_exp) {
        sep();
        os << "z";
        if (m.z_exp > 1) os << "^" << m.z_exp;
    }
    for (std::size_t i = 0; i < m.factors.size();) {
        std::size_t j = i;
        while (j < m.factors.size() && m.factors[j] == m.factors[i]) ++j;
        sep();
        os << to_string(m.factors[i]);
        if (j - i > 1) os << "^" << (j - i);
        i = j;
    }
    return os.str();
}

AlgebraElement AlgebraElement::term(PbwMonomial m, Scalar coeff) {
    AlgebraElement e;
    e.add_term(std::move(m), std::move(coeff));
    return e;
}

AlgebraElement AlgebraElement::unit(const Unit& u, Scalar coeff) {
    return term(PbwMonomial({u}, 0, 0), std::move(coeff));
}

void AlgebraElement::add_term(const PbwMonomial& m, const Scalar& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void AlgebraElement::add_term(PbwMonomial&& m, Scalar&& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), std::move(coeff));
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
    for (const auto& [m, s] : o.terms_) add_term(m, s);
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
    for (const auto& [m, s] : o.terms_) add_term(m, -s);
    return *this;
}

AlgebraElement& AlgebraElement::scale(const Scalar& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= s;
    return *this;
}

int AlgebraElement::max_abs_mode() const {
    int m = 0;
    for (const auto& [mono, s] : terms_) m = std::max(m, mono.max_abs_mode());
    return m;
}

std::string AlgebraElement::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, s] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << s.to_string() << " * " << glhat::to_string(m);
    }
    return os.str();
}

AlgebraElement embed(const LieElement& x) {
    AlgebraElement out;
    for (const auto& [u, s] : x.units) out.add_term(PbwMonomial({u}, 0, 0), s);
    if (!x.c_coeff.is_zero()) out.add_term(PbwMonomial({}, 1, 0), x.c_coeff);
    if (!x.z_coeff.is_zero()) out.add_term(PbwMonomial({}, 0, 1), x.z_coeff);
    return out;
}

namespace {

struct WorkItem {
    std::vector<Unit> word;
    Scalar coeff;
    int c_exp;
    int z_exp;
};

}  // namespace

AlgebraElement normal_order(const RankData& ctx, std::span<const Unit> word, const Scalar& coeff,
                            int c_exp, int z_exp) {
    AlgebraElement result;
    if (coeff.is_zero()) return result;
    std::vector<WorkItem> stack;
    stack.push_back({std::vector<Unit>(word.begin(), word.end()), coeff, c_exp, z_exp});
    while (!stack.empty()) {
        WorkItem item = std::move(stack.back());
        stack.pop_back();

        std::size_t defect = item.word.size();
        bool odd_square = false;
        for (std::size_t k = 0; k + 1 < item.word.size(); ++k) {
            const Unit& a = item.word[k];
            const Unit& b = item.word[k + 1];
            if (b < a) {
                defect = k;
                odd_square = false;
                break;
            }
            if (a == b && unit_parity(ctx, a)) {
                defect = k;
                odd_square = true;
                break;
            }
        }
        if (defect == item.word.size()) {
            result.add_term(PbwMonomial(std::move(item.word), item.c_exp, item.z_exp),
                            std::move(item.coeff));
            continue;
        }

        const Unit a = item.word[defect];
        const Unit b = item.word[defect + 1];
        UnitBracket ub = bracket_units(ctx, a, b);
        Scalar bracket_scale = odd_square ? item.coeff * Scalar(Rat(1, 2)) : item.coeff;

        if (!odd_square) {
            // a b -> (-1)^{|a||b|} b a + [a, b]
            WorkItem swapped;
            swapped.word = item.word;
            std::swap(swapped.word[defect], swapped.word[defect + 1]);
            bool flip = unit_parity(ctx, a) && unit_parity(ctx, b);
            swapped.coeff = flip ? -item.coeff : item.coeff;
            swapped.c_exp = item.c_exp;
            swapped.z_exp = item.z_exp;
            stack.push_back(std::move(swapped));
        }
        for (int t = 0; t < ub.count; ++t) {
            WorkItem w;
            w.word.reserve(item.word.size() - 1);
            w.word.insert(w.word.end(), item.word.begin(), item.word.begin() + defect);
            w.word.push_back(ub.units[t]);
            w.word.insert(w.word.end(), item.word.begin() + defect + 2, item.word.end());
            w.coeff = ub.signs[t] > 0 ? bracket_scale : -bracket_scale;
            w.c_exp = item.c_exp;
            w.z_exp = item.z_exp;
            stack.push_back(std::move(w));
        }
        if (ub.c_coeff != 0 || ub.z_coeff != 0) {
            std::vector<Unit> rest;
            rest.reserve(item.word.size() - 2);
            rest.insert(rest.end(), item.word.begin(), item.word.begin() + defect);
            rest.insert(rest.end(), item.word.begin() + defect + 2, item.word.end());
            if (ub.c_coeff != 0) {
                WorkItem w;
                w.word = rest;
                w.coeff = bracket_scale * Scalar(Rat(ub.c_coeff));
                w.c_exp = item.c_exp + 1;
                w.z_exp = item.z_exp;
                stack.push_back(std::move(w));
            }
            if (ub.z_coeff != 0) {
                WorkItem w;
                w.word = std::move(rest);
                w.coeff = bracket_scale * Scalar(Rat(ub.z_coeff));
                w.c_exp = item.c_exp;
                w.z_exp = item.z_exp + 1;
                stack.push_back(std::move(w));
            }
        }
    }
    return result;
}

AlgebraElement multiply(const RankData& ctx, const AlgebraElement& x, const AlgebraElement& y) {
    AlgebraElement out;
    std::vector<Unit> word;
    for (const auto& [mx, sx] : x.terms()) {
        for (const auto& [my, sy] : y.terms()) {
            word.clear();
            word.reserve(mx.factors.size() + my.factors.size());
            word.insert(word.end(), mx.factors.begin(), mx.factors.end());
            word.insert(word.end(), my.factors.begin(), my.factors.end());
            out += normal_order(ctx, word, sx * sy, mx.c_exp + my.c_exp, mx.z_exp + my.z_exp);
        }
    }
    return out;
}

AlgebraElement bracket_u(const RankData& ctx, const AlgebraElement& x, const AlgebraElement& y) {
    AlgebraElement out;
    std::vector<Unit> word;
    for (const auto& [mx, sx] : x.terms()) {
        int px = mx.parity(ctx);
        for (const auto& [my, sy] : y.terms()) {
            Scalar coeff = sx * sy;
            int cc = mx.c_exp + my.c_exp;
            int zz = mx.z_exp + my.z_exp;
            word.clear();
            word.insert(word.end(), mx.factors.begin(), mx.factors.end());
            word.insert(word.end(), my.factors.begin(), my.factors.end());
            out += normal_order(ctx, word, coeff, cc, zz);
            bool flip = px && my.parity(ctx);
            word.clear();
            word.insert(word.end(), my.factors.begin(), my.factors.end());
            word.insert(word.end(), mx.factors.begin(), mx.factors.end());
            out += normal_order(ctx, word, flip ? coeff : -coeff, cc, zz);
        }
    }
    return out;
}

AlgebraElement anticommutator(const RankData& ctx, const AlgebraElement& x,
                              const AlgebraElement& y) {
    AlgebraElement out = multiply(ctx, x, y);
    out += multiply(ctx, y, x);
    return out;
}

AlgebraElement truncate_project(const AlgebraElement& x, int window) {
    AlgebraElement out;
    for (const auto& [m, s] : x.terms())
        if (m.max_abs_mode() <= window) out.add_term(m, s);
    return out;
}

namespace {

// Adapted diagonal symbol: either E_{1,1}(mode) or h_k(mode).
struct DiagSym {
    bool is_e11 = false;
    int k = 0;
    int mode = 0;
};

// Coefficients of E_{a,a} over {E_{1,1}, h_1, ..., h_{m+n-1}}, solved from
// h_k = (-1)^{p(k)} E_{k,k} - (-1)^{p(k+1)} E_{k+1,k+1}.
struct AdaptedBasis {
    // row a-1: coefficient of E11 then of h_1..h_{m+n-1}
    std::vector<Rat> e11_coeff;
    std::vector<std::vector<Rat>> h_coeff;
};

AdaptedBasis adapted_basis(const RankData& ctx) {
    int n = ctx.size();
    AdaptedBasis b;
    b.e11_coeff.assign(n, Rat(0));
    b.h_coeff.assign(n, std::vector<Rat>(n - 1, Rat(0)));
    b.e11_coeff[0] = 1;
    for (int a = 2; a <= n; ++a) {
        // E_{a,a} = (-1)^{p(a)} ( (-1)^{p(a-1)} E_{a-1,a-1} - h_{a-1} )
        int sa = parity(ctx, a) ? -1 : 1;
        int sp = parity(ctx, a - 1) ? -1 : 1;
        b.e11_coeff[a - 1] = Rat(sa * sp) * b.e11_coeff[a - 2];
        for (int k = 0; k < n - 1; ++k) b.h_coeff[a - 1][k] = Rat(sa * sp) * b.h_coeff[a - 2][k];
        b.h_coeff[a - 1][a - 2] += Rat(-sa);
    }
    return b;
}

}  // namespace

SlSplit sl_membership(const RankData& ctx, const AlgebraElement& x) {
    const AdaptedBasis basis = adapted_basis(ctx);
    const int nh = ctx.size() - 1;
    SlSplit split;

    for (const auto& [mono, coeff] : x.terms()) {
        // Expand every diagonal factor over the adapted basis, tracking
        // whether an E11 symbol appears. Terms free of E11 are mapped back
        // to matrix units and re-normal-ordered into sl_part.
        struct Expansion {
            Rat weight;
            std::vector<DiagSym> diag;          // adapted symbols in position order
            std::vector<int> positions;         // positions of diag symbols
        };
        std::vector<Expansion> expansions{{Rat(1), {}, {}}};
        for (std::size_t pos = 0; pos < mono.factors.size(); ++pos) {
            const Unit& u = mono.factors[pos];
            if (!u.diagonal()) continue;
            std::vector<Expansion> next;
            for (const auto& ex : expansions) {
                const auto& e11c = basis.e11_coeff[u.row - 1];
                if (e11c != 0) {
                    Expansion e = ex;
                    e.weight *= e11c;
                    e.diag.push_back({true, 0, u.mode});
                    e.positions.push_back(static_cast<int>(pos));
                    next.push_back(std::move(e));
                }
                for (int k = 0; k < nh; ++k) {
                    const Rat& hc = basis.h_coeff[u.row - 1][k];
                    if (hc == 0) continue;
                    Expansion e = ex;
                    e.weight *= hc;
                    e.diag.push_back({false, k + 1, u.mode});
                    e.positions.push_back(static_cast<int>(pos));
                    next.push_back(std::move(e));
                }
            }
            expansions = std::move(next);
        }

        for (const auto& ex : expansions) {
            bool has_e11 = false;
            for (const auto& d : ex.diag)
                if (d.is_e11) has_e11 = true;
            if (has_e11) continue;
            // Map h_k(mode) back to its two units and re-expand the product.
            AlgebraElement piece = AlgebraElement::term(PbwMonomial({}, mono.c_exp, mono.z_exp),
                                                        coeff * Scalar(ex.weight));
            std::size_t di = 0;
            for (std::size_t pos = 0; pos < mono.factors.size(); ++pos) {
                const Unit& u = mono.factors[pos];
                AlgebraElement factor;
                if (di < ex.positions.size() && ex.positions[di] == static_cast<int>(pos)) {
                    const DiagSym& d = ex.diag[di++];
                    int k = d.k;
                    int s1 = parity(ctx, k) ? -1 : 1;
                    int s2 = parity(ctx, k + 1) ? -1 : 1;
                    factor.add_term(PbwMonomial({Unit(k, k, d.mode)}, 0, 0), Scalar(Rat(s1)));
                    factor.add_term(PbwMonomial({Unit(k + 1, k + 1, d.mode)}, 0, 0),
                                    Scalar(Rat(-s2)));
                } else {
                    factor = AlgebraElement::unit(u);
                }
                piece = multiply(ctx, piece, factor);
            }
            split.sl_part += piece;
        }
    }

    split.complement = x;
    split.complement -= split.sl_part;
    split.in_sl = split.complement.is_zero();
    return split;
}

}  // namespace glhat
