#include "glhat/textio.hpp"

#include <sstream>

namespace glhat {

namespace {

void append_monomial(std::ostringstream& os, const PbwMonomial& m) {
    if (m.c_exp) os << " c^" << m.c_exp;
    if (m.z_exp) os << " z^" << m.z_exp;
    for (const auto& u : m.factors)
        os << " E(" << int(u.row) << "," << int(u.col) << "|" << u.mode << ")";
    if (m.is_identity()) os << " 1";
}

}  // namespace

std::string to_text(const RankData& ctx, const CompletionElement& x) {
    CompletionElement c = canonicalize(ctx, x);
    std::ostringstream os;
    os << "# completion element (m=" << ctx.m << ", n=" << ctx.n << ")\n";
    if (c.is_empty()) {
        os << "zero\n";
        return os.str();
    }
    for (const auto& [m, s] : c.finite.terms()) {
        os << "finite: " << s.to_string() << " ;";
        append_monomial(os, m);
        os << "\n";
    }
    for (const auto& f : c.tails) os << "tail: " << f.to_string() << "\n";
    return os.str();
}

CompletionElement specialize_scalars(const RankData& ctx, const CompletionElement& x,
                                     const std::map<Var, Rat>& bindings) {
    if (bindings.empty()) return x;
    CompletionElement out;
    for (const auto& [m, s] : x.finite.terms()) out.finite.add_term(m, s.specialize(bindings));
    for (TailFamily f : x.tails) {
        IndexPoly coeff;
        for (const auto& [k, s] : f.coeff.terms()) {
            IndexPoly term;
            if (k[0] || k[1]) {
                term = IndexPoly(Scalar(1));
                for (int e = 0; e < k[0]; ++e) term = term * IndexPoly::index(0);
                for (int e = 0; e < k[1]; ++e) term = term * IndexPoly::index(1);
            } else {
                term = IndexPoly(Scalar(1));
            }
            term.scale(s.specialize(bindings));
            coeff += term;
        }
        f.coeff = std::move(coeff);
        out.tails.push_back(std::move(f));
    }
    return canonicalize(ctx, out);
}

}  // namespace glhat
