#include "glhat/evalmap.hpp"

namespace glhat {

namespace {

Scalar sgn_scalar(int parity_bit) {
    return Scalar(parity_bit ? -1 : 1);
}

AlgebraElement unit_term(const Unit& u, Scalar coeff) {
    return AlgebraElement::unit(u, std::move(coeff));
}

// sum_{s>=0} E_{r1,c1}(-s + b1) E_{r2,c2}(s + b2) with a plain coefficient
TailFamily quad_family(int r1, int c1, long b1, int r2, int c2, long b2, Scalar coeff) {
    TailFamily f;
    f.arity = 1;
    f.coeff = IndexPoly(std::move(coeff));
    f.factors.push_back(FactorPat(r1, c1, AffineMode{{-1, 0}, b1}));
    f.factors.push_back(FactorPat(r2, c2, AffineMode{{1, 0}, b2}));
    return f;
}

}  // namespace

AlgebraElement ev_level0(const RankData& ctx, int node, GenKind kind) {
    if (node < 0 || node >= ctx.nodes()) throw std::out_of_range("node index out of range");
    const int top = ctx.size();
    switch (kind) {
        case GenKind::XPlus:
            if (node == 0) return unit_term(Unit(top, 1, 1), Scalar(1));
            return unit_term(Unit(node, node + 1, 0), Scalar(1));
        case GenKind::XMinus:
            if (node == 0) return unit_term(Unit(1, top, -1), Scalar(-1));
            return unit_term(Unit(node + 1, node, 0), sgn_scalar(parity(ctx, node)));
        case GenKind::H:
        default: {
            AlgebraElement h;
            if (node == 0) {
                h.add_term(PbwMonomial({Unit(1, 1, 0)}, 0, 0), Scalar(-1));
                h.add_term(PbwMonomial({Unit(top, top, 0)}, 0, 0), Scalar(-1));
                h.add_term(PbwMonomial({}, 1, 0), Scalar(1));
            } else {
                h.add_term(PbwMonomial({Unit(node, node, 0)}, 0, 0), sgn_scalar(parity(ctx, node)));
                h.add_term(PbwMonomial({Unit(node + 1, node + 1, 0)}, 0, 0),
                           -sgn_scalar(parity(ctx, node + 1)));
            }
            return h;
        }
    }
}

H1Parts ev_h1_parts(const RankData& ctx, int node) {
    if (node < 0 || node >= ctx.nodes()) throw std::out_of_range("node index out of range");
    const int top = ctx.size();
    const Scalar hbar = Scalar::hbar();
    const Scalar alpha = Scalar::alpha();
    const Scalar eps1 = Scalar::eps1();

    H1Parts parts;
    Scalar linear = alpha - Scalar(h1_shift(ctx, node)) * eps1;
    AlgebraElement h0 = ev_level0(ctx, node, GenKind::H);
    h0.scale(linear);
    parts.finite = std::move(h0);

    if (node == 0) {
        // + hbar E_{m+n,m+n} (E_{1,1} - c)
        parts.finite += multiply(ctx, unit_term(Unit(top, top, 0), hbar),
                                 unit_term(Unit(1, 1, 0), Scalar(1)));
        parts.finite.add_term(PbwMonomial({Unit(top, top, 0)}, 1, 0), -hbar);
        for (int k = 1; k <= top; ++k) {
            Scalar w = -hbar * sgn_scalar(parity(ctx, k));
            parts.groups[0].push_back(quad_family(top, k, 0, k, top, 0, w));
            parts.groups[1].push_back(quad_family(1, k, -1, k, 1, 1, w));
        }
        return parts;
    }

    const int i = node;
    int pi = parity(ctx, i);
    int pi1 = parity(ctx, i + 1);
    // -(-1)^{p(E_{i,i+1})} hbar E_{i,i} E_{i+1,i+1}
    Scalar quad_coeff = -sgn_scalar((pi + pi1) & 1) * hbar;
    parts.finite += multiply(ctx, unit_term(Unit(i, i, 0), quad_coeff),
                             unit_term(Unit(i + 1, i + 1, 0), Scalar(1)));
    for (int k = 1; k <= i; ++k) {
        Scalar w = hbar * sgn_scalar(pi) * sgn_scalar(parity(ctx, k));
        parts.groups[0].push_back(quad_family(i, k, 0, k, i, 0, w));
    }
    for (int k = i + 1; k <= top; ++k) {
        Scalar w = hbar * sgn_scalar(pi) * sgn_scalar(parity(ctx, k));
        parts.groups[1].push_back(quad_family(i, k, -1, k, i, 1, w));
    }
    for (int k = 1; k <= i; ++k) {
        Scalar w = -hbar * sgn_scalar(pi1) * sgn_scalar(parity(ctx, k));
        parts.groups[2].push_back(quad_family(i + 1, k, 0, k, i + 1, 0, w));
    }
    for (int k = i + 1; k <= top; ++k) {
        Scalar w = -hbar * sgn_scalar(pi1) * sgn_scalar(parity(ctx, k));
        parts.groups[3].push_back(quad_family(i + 1, k, -1, k, i + 1, 1, w));
    }
    return parts;
}

CompletionElement H1Parts::total() const {
    CompletionElement out;
    out.finite = finite;
    for (const auto& g : groups) out.tails.insert(out.tails.end(), g.begin(), g.end());
    return out;
}

CompletionElement ev_h1(const RankData& ctx, int node) {
    return ev_h1_parts(ctx, node).total();
}

CompletionElement ev_htilde1(const RankData& ctx, int node) {
    CompletionElement x = ev_h1(ctx, node);
    AlgebraElement h0 = ev_level0(ctx, node, GenKind::H);
    AlgebraElement sq = multiply(ctx, h0, h0);
    sq.scale(Scalar(Rat(-1, 2)) * Scalar::hbar());
    x.finite += sq;
    return canonicalize(ctx, x);
}

CompletionElement ev_htilde1_display(const RankData& ctx, int node) {
    const int top = ctx.size();
    const Scalar hbar = Scalar::hbar();
    const Scalar half_hbar = Scalar(Rat(1, 2)) * hbar;

    H1Parts parts = ev_h1_parts(ctx, node);
    CompletionElement out;
    for (const auto& g : parts.groups) out.tails.insert(out.tails.end(), g.begin(), g.end());

    Scalar linear = Scalar::alpha() - Scalar(h1_shift(ctx, node)) * Scalar::eps1();
    AlgebraElement h0 = ev_level0(ctx, node, GenKind::H);
    h0.scale(linear);
    out.finite = std::move(h0);

    auto square_term = [&](int idx) {
        out.finite.add_term(PbwMonomial({Unit(idx, idx, 0), Unit(idx, idx, 0)}, 0, 0), -half_hbar);
    };
    if (node == 0) {
        square_term(top);
        square_term(1);
        out.finite.add_term(PbwMonomial({Unit(top, top, 0)}, 1, 0), -hbar);
    } else {
        square_term(node);
        square_term(node + 1);
    }
    return canonicalize(ctx, out);
}

CompletionElement ev_h01_display_gap(const RankData& ctx) {
    const int top = ctx.size();
    const Scalar hbar = Scalar::hbar();
    CompletionElement gap;
    gap.finite.add_term(PbwMonomial({Unit(1, 1, 0)}, 1, 0), hbar);
    gap.finite.add_term(PbwMonomial({Unit(top, top, 0)}, 1, 0), hbar);
    gap.finite.add_term(PbwMonomial({}, 2, 0), Scalar(Rat(-1, 2)) * hbar);
    return gap;
}

CompletionElement ev_htilde1_checked(const RankData& ctx, int node) {
    CompletionElement computed = ev_htilde1(ctx, node);
    CompletionElement display = ev_htilde1_display(ctx, node);
    CompletionElement diff = canonicalize(ctx, computed - display);
    if (node == 0) diff = canonicalize(ctx, diff - ev_h01_display_gap(ctx));
    if (!is_zero_canonical(diff))
        throw EngineBug("ev(h~_{i,1}) disagrees with its closed form at node " +
                        std::to_string(node) + ": " + diff.to_string());
    return computed;
}

Scalar central_charge_scalar(const RankData& ctx) {
    return Scalar(ctx.n - ctx.m) * Scalar::eps1() / Scalar::hbar();
}

CompletionElement specialize_central(const RankData& ctx, const CompletionElement& x) {
    const Scalar cc = central_charge_scalar(ctx);
    CompletionElement out;
    for (const auto& [mono, coeff] : x.finite.terms()) {
        PbwMonomial m(mono.factors, 0, 0);
        out.finite.add_term(std::move(m), coeff * cc.pow(mono.c_exp));
    }
    for (TailFamily f : x.tails) {
        if (f.c_exp) f.coeff.scale(cc.pow(f.c_exp));
        f.c_exp = 0;
        f.z_exp = 0;
        out.tails.push_back(std::move(f));
    }
    return out;
}

}  // namespace glhat
