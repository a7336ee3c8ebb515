#include "glhat/yangian.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace glhat {

std::string to_string(const YGen& g) {
    std::ostringstream os;
    switch (g.kind) {
        case YGen::Kind::XPlus: os << "x+"; break;
        case YGen::Kind::XMinus: os << "x-"; break;
        case YGen::Kind::H: os << "h"; break;
    }
    os << "[" << g.node << "," << g.level << "]";
    return os.str();
}

bool ygen_odd(const RankData& ctx, const YGen& g) {
    return g.kind != YGen::Kind::H && node_is_odd(ctx, g.node);
}

RelExpr RelExpr::generator(YGen g) {
    RelExpr e;
    e.op = Op::Gen;
    e.gen = g;
    return e;
}

RelExpr RelExpr::bracket(RelExpr a, RelExpr b) {
    RelExpr e;
    e.op = Op::Bracket;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return e;
}

RelExpr RelExpr::anti(RelExpr a, RelExpr b) {
    RelExpr e;
    e.op = Op::Anti;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return e;
}

RelExpr RelExpr::scale(Scalar s, RelExpr a) {
    RelExpr e;
    e.op = Op::Scale;
    e.coeff = std::move(s);
    e.kids.push_back(std::move(a));
    return e;
}

RelExpr RelExpr::sum(std::vector<RelExpr> parts) {
    RelExpr e;
    e.op = Op::Sum;
    e.kids = std::move(parts);
    return e;
}

void RelExpr::collect_generators(std::vector<YGen>& out) const {
    if (op == Op::Gen) out.push_back(gen);
    for (const auto& k : kids) k.collect_generators(out);
}

int RelExpr::bracket_depth() const {
    int d = 0;
    for (const auto& k : kids) d = std::max(d, k.bracket_depth());
    return d + (op == Op::Bracket || op == Op::Anti ? 1 : 0);
}

namespace {

YGen xp(int i, int r) { return YGen{YGen::Kind::XPlus, i, r}; }
YGen xm(int i, int r) { return YGen{YGen::Kind::XMinus, i, r}; }
YGen hh(int i, int r) { return YGen{YGen::Kind::H, i, r}; }
YGen xg(int sign, int i, int r) { return sign > 0 ? xp(i, r) : xm(i, r); }

RelExpr G(YGen g) { return RelExpr::generator(g); }

// h~_{i,1} = h_{i,1} - (hbar/2) h_{i,0}^2, written with the anticommutator.
RelExpr htilde(int i) {
    return RelExpr::sum(
        {G(hh(i, 1)), RelExpr::scale(Scalar(Rat(-1, 4)) * Scalar::hbar(),
                                     RelExpr::anti(G(hh(i, 0)), G(hh(i, 0))))});
}

std::string sign_str(int sign) { return sign > 0 ? "+" : "-"; }

}  // namespace

std::vector<Relation> minimal_relations(const RankData& ctx) {
    const int N = ctx.nodes();
    const Scalar half_diff = Scalar(Rat(1, 2)) * (Scalar::eps1() - Scalar::eps2());
    const Scalar half_hbar = Scalar(Rat(1, 2)) * Scalar::hbar();
    std::vector<Relation> rels;

    // eq2.1: [h_{i,r}, h_{j,s}] = 0 for (i,r) < (j,s)
    for (int i = 0; i < N; ++i)
        for (int r = 0; r <= 1; ++r)
            for (int j = 0; j < N; ++j)
                for (int s = 0; s <= 1; ++s) {
                    if (std::pair(i, r) >= std::pair(j, s)) continue;
                    std::ostringstream inst;
                    inst << "i=" << i << ",r=" << r << ",j=" << j << ",s=" << s;
                    rels.push_back({"eq2.1", "Theorem 2.2", inst.str(),
                                    RelExpr::bracket(G(hh(i, r)), G(hh(j, s))), RelExpr::zero()});
                }

    // eq2.2: [x+_{i,0}, x-_{j,0}] = delta_ij h_{i,0}
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            std::ostringstream inst;
            inst << "i=" << i << ",j=" << j;
            RelExpr rhs = i == j ? G(hh(i, 0)) : RelExpr::zero();
            rels.push_back({"eq2.2", "Theorem 2.2", inst.str(),
                            RelExpr::bracket(G(xp(i, 0)), G(xm(j, 0))), std::move(rhs)});
        }

    // eq2.3: [x+_{i,1}, x-_{j,0}] = delta_ij h_{i,1} = [x+_{i,0}, x-_{j,1}]
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            std::ostringstream inst;
            inst << "i=" << i << ",j=" << j;
            RelExpr rhs1 = i == j ? G(hh(i, 1)) : RelExpr::zero();
            rels.push_back({"eq2.3", "Theorem 2.2", inst.str() + ",slot=+1",
                            RelExpr::bracket(G(xp(i, 1)), G(xm(j, 0))), rhs1});
            rels.push_back({"eq2.3", "Theorem 2.2", inst.str() + ",slot=-1",
                            RelExpr::bracket(G(xp(i, 0)), G(xm(j, 1))), std::move(rhs1)});
        }

    // eq2.4: [h_{i,0}, x±_{j,r}] = ± a_ij x±_{j,r}
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int r = 0; r <= 1; ++r)
                for (int sign : {1, -1}) {
                    std::ostringstream inst;
                    inst << "i=" << i << ",j=" << j << ",r=" << r << ",sign=" << sign_str(sign);
                    RelExpr rhs = RelExpr::scale(Scalar(sign * cartan_a(ctx, i, j)),
                                                 G(xg(sign, j, r)));
                    rels.push_back({"eq2.4", "Theorem 2.2", inst.str(),
                                    RelExpr::bracket(G(hh(i, 0)), G(xg(sign, j, r))),
                                    std::move(rhs)});
                }

    // eq2.5: [h~_{i,1}, x±_{j,0}] = ± a_ij ( x±_{j,1} - m_ij (e1-e2)/2 x±_{j,0} )
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int sign : {1, -1}) {
                std::ostringstream inst;
                inst << "i=" << i << ",j=" << j << ",sign=" << sign_str(sign);
                Scalar a(sign * cartan_a(ctx, i, j));
                RelExpr rhs = RelExpr::sum(
                    {RelExpr::scale(a, G(xg(sign, j, 1))),
                     RelExpr::scale(-a * Scalar(cartan_m(ctx, i, j)) * half_diff,
                                    G(xg(sign, j, 0)))});
                rels.push_back({"eq2.5", "Theorem 2.2", inst.str(),
                                RelExpr::bracket(htilde(i), G(xg(sign, j, 0))), std::move(rhs)});
            }

    // eq2.6: [x±_{i,1}, x±_{j,0}] - [x±_{i,0}, x±_{j,1}]
    //        = ± a_ij (hbar/2) {x±_{i,0}, x±_{j,0}} - m_ij (e1-e2)/2 [x±_{i,0}, x±_{j,0}]
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int sign : {1, -1}) {
                std::ostringstream inst;
                inst << "i=" << i << ",j=" << j << ",sign=" << sign_str(sign);
                RelExpr lhs = RelExpr::sum(
                    {RelExpr::bracket(G(xg(sign, i, 1)), G(xg(sign, j, 0))),
                     RelExpr::scale(Scalar(-1),
                                    RelExpr::bracket(G(xg(sign, i, 0)), G(xg(sign, j, 1))))});
                RelExpr rhs = RelExpr::sum(
                    {RelExpr::scale(Scalar(sign * cartan_a(ctx, i, j)) * half_hbar,
                                    RelExpr::anti(G(xg(sign, i, 0)), G(xg(sign, j, 0)))),
                     RelExpr::scale(Scalar(-cartan_m(ctx, i, j)) * half_diff,
                                    RelExpr::bracket(G(xg(sign, i, 0)), G(xg(sign, j, 0))))});
                rels.push_back(
                    {"eq2.6", "Theorem 2.2", inst.str(), std::move(lhs), std::move(rhs)});
            }

    // eq2.7: (ad x±_{i,0})^{1+|a_ij|} x±_{j,0} = 0, i != j
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            int power = 1 + std::abs(cartan_a(ctx, i, j));
            for (int sign : {1, -1}) {
                std::ostringstream inst;
                inst << "i=" << i << ",j=" << j << ",sign=" << sign_str(sign);
                RelExpr lhs = G(xg(sign, j, 0));
                for (int k = 0; k < power; ++k) lhs = RelExpr::bracket(G(xg(sign, i, 0)), lhs);
                rels.push_back(
                    {"eq2.7", "Theorem 2.2", inst.str(), std::move(lhs), RelExpr::zero()});
            }
        }

    // eq2.8: [x±_{i,0}, x±_{i,0}] = 0 for i = 0, m
    for (int i : {0, ctx.m})
        for (int sign : {1, -1}) {
            std::ostringstream inst;
            inst << "i=" << i << ",sign=" << sign_str(sign);
            rels.push_back({"eq2.8", "Theorem 2.2", inst.str(),
                            RelExpr::bracket(G(xg(sign, i, 0)), G(xg(sign, i, 0))),
                            RelExpr::zero()});
        }

    // eq2.9: [[x±_{i-1,0}, x±_{i,0}], [x±_{i,0}, x±_{i+1,0}]] = 0 for i = 0, m
    for (int i : {0, ctx.m})
        for (int sign : {1, -1}) {
            int prev = (i - 1 + N) % N;
            int next = (i + 1) % N;
            std::ostringstream inst;
            inst << "i=" << i << ",sign=" << sign_str(sign);
            RelExpr lhs = RelExpr::bracket(
                RelExpr::bracket(G(xg(sign, prev, 0)), G(xg(sign, i, 0))),
                RelExpr::bracket(G(xg(sign, i, 0)), G(xg(sign, next, 0))));
            rels.push_back({"eq2.9", "Theorem 2.2", inst.str(), std::move(lhs), RelExpr::zero()});
        }

    return rels;
}

std::vector<Relation> sampled_full_relations(const RankData& ctx, int level_budget) {
    const int N = ctx.nodes();
    const Scalar half_diff = Scalar(Rat(1, 2)) * (Scalar::eps1() - Scalar::eps2());
    const Scalar half_hbar = Scalar(Rat(1, 2)) * Scalar::hbar();
    std::vector<Relation> rels;

    auto add = [&](const std::string& id, const std::string& inst, RelExpr lhs, RelExpr rhs) {
        rels.push_back({id, "Definition 2.1", inst, std::move(lhs), std::move(rhs)});
    };

    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            for (int r = 0; r + 1 <= level_budget; ++r) {
                for (int s = 0; r + s <= level_budget && s <= level_budget; ++s) {
                    std::ostringstream inst;
                    inst << "i=" << i << ",j=" << j << ",r=" << r << ",s=" << s;
                    // eq1.1
                    if (r + s <= level_budget && std::pair(i, r) < std::pair(j, s))
                        add("eq1.1", inst.str(), RelExpr::bracket(G(hh(i, r)), G(hh(j, s))),
                            RelExpr::zero());
                    // eq1.2
                    if (r + s <= level_budget) {
                        RelExpr rhs = i == j ? G(hh(i, r + s)) : RelExpr::zero();
                        add("eq1.2", inst.str(), RelExpr::bracket(G(xp(i, r)), G(xm(j, s))),
                            std::move(rhs));
                    }
                    for (int sign : {1, -1}) {
                        std::ostringstream inst2;
                        inst2 << inst.str() << ",sign=" << sign_str(sign);
                        Scalar a(sign * cartan_a(ctx, i, j));
                        Scalar mm(cartan_m(ctx, i, j));
                        // eq1.4 needs levels r+1 and s+1
                        if (r + 1 <= level_budget && s + 1 <= level_budget) {
                            RelExpr lhs = RelExpr::sum(
                                {RelExpr::bracket(G(hh(i, r + 1)), G(xg(sign, j, s))),
                                 RelExpr::scale(Scalar(-1), RelExpr::bracket(
                                                                G(hh(i, r)), G(xg(sign, j, s + 1))))});
                            RelExpr rhs = RelExpr::sum(
                                {RelExpr::scale(a * half_hbar,
                                                RelExpr::anti(G(hh(i, r)), G(xg(sign, j, s)))),
                                 RelExpr::scale(-mm * half_diff,
                                                RelExpr::bracket(G(hh(i, r)), G(xg(sign, j, s))))});
                            add("eq1.4", inst2.str(), std::move(lhs), std::move(rhs));
                        }
                        // eq1.5
                        if (r + 1 <= level_budget && s + 1 <= level_budget) {
                            RelExpr lhs = RelExpr::sum(
                                {RelExpr::bracket(G(xg(sign, i, r + 1)), G(xg(sign, j, s))),
                                 RelExpr::scale(Scalar(-1),
                                                RelExpr::bracket(G(xg(sign, i, r)),
                                                                 G(xg(sign, j, s + 1))))});
                            RelExpr rhs = RelExpr::sum(
                                {RelExpr::scale(a * half_hbar,
                                                RelExpr::anti(G(xg(sign, i, r)), G(xg(sign, j, s)))),
                                 RelExpr::scale(-mm * half_diff,
                                                RelExpr::bracket(G(xg(sign, i, r)),
                                                                 G(xg(sign, j, s))))});
                            add("eq1.5", inst2.str(), std::move(lhs), std::move(rhs));
                        }
                    }
                }
            }
            // eq1.3 at sampled levels
            for (int r = 0; r <= level_budget; ++r)
                for (int sign : {1, -1}) {
                    std::ostringstream inst;
                    inst << "i=" << i << ",j=" << j << ",r=" << r << ",sign=" << sign_str(sign);
                    add("eq1.3", inst.str(),
                        RelExpr::bracket(G(hh(i, 0)), G(xg(sign, j, r))),
                        RelExpr::scale(Scalar(sign * cartan_a(ctx, i, j)), G(xg(sign, j, r))));
                }
            // eq1.6 Serre with symmetrized levels, all levels in budget
            if (i != j) {
                int power = 1 + std::abs(cartan_a(ctx, i, j));
                if (power == 2) {
                    for (int r1 = 0; r1 <= 1; ++r1)
                        for (int r2 = r1; r2 <= 1; ++r2)
                            for (int s = 0; s <= 1; ++s) {
                                if (r1 + r2 + s > level_budget) continue;
                                for (int sign : {1, -1}) {
                                    std::ostringstream inst;
                                    inst << "i=" << i << ",j=" << j << ",r=(" << r1 << "," << r2
                                         << "),s=" << s << ",sign=" << sign_str(sign);
                                    RelExpr t1 = RelExpr::bracket(
                                        G(xg(sign, i, r1)),
                                        RelExpr::bracket(G(xg(sign, i, r2)), G(xg(sign, j, s))));
                                    RelExpr t2 = RelExpr::bracket(
                                        G(xg(sign, i, r2)),
                                        RelExpr::bracket(G(xg(sign, i, r1)), G(xg(sign, j, s))));
                                    add("eq1.6", inst.str(), RelExpr::sum({t1, t2}),
                                        RelExpr::zero());
                                }
                            }
                }
            }
        }
    }
    // eq1.7 / eq1.8 at sampled levels for the isotropic nodes
    for (int i : {0, ctx.m})
        for (int sign : {1, -1}) {
            for (int r = 0; r <= level_budget; ++r)
                for (int s = r; s <= level_budget && r + s <= level_budget; ++s) {
                    std::ostringstream inst;
                    inst << "i=" << i << ",r=" << r << ",s=" << s << ",sign=" << sign_str(sign);
                    rels.push_back({"eq1.7", "Definition 2.1", inst.str(),
                                    RelExpr::bracket(G(xg(sign, i, r)), G(xg(sign, i, s))),
                                    RelExpr::zero()});
                }
            int N2 = ctx.nodes();
            int prev = (i - 1 + N2) % N2;
            int next = (i + 1) % N2;
            for (int r = 0; r <= 1; ++r)
                for (int s = 0; s <= 1 && r + s <= level_budget; ++s) {
                    std::ostringstream inst;
                    inst << "i=" << i << ",r=" << r << ",s=" << s << ",sign=" << sign_str(sign);
                    RelExpr lhs = RelExpr::bracket(
                        RelExpr::bracket(G(xg(sign, prev, r)), G(xg(sign, i, 0))),
                        RelExpr::bracket(G(xg(sign, i, 0)), G(xg(sign, next, s))));
                    rels.push_back(
                        {"eq1.8", "Definition 2.1", inst.str(), std::move(lhs), RelExpr::zero()});
                }
        }
    return rels;
}

Assignment evaluation_assignment(const RankData& ctx) {
    Assignment asg;
    const int N = ctx.nodes();
    const Scalar half_diff = Scalar(Rat(1, 2)) * (Scalar::eps1() - Scalar::eps2());

    for (int i = 0; i < N; ++i) {
        asg[xp(i, 0)] = CompletionElement::from_algebra(ev_level0(ctx, i, GenKind::XPlus));
        asg[xm(i, 0)] = CompletionElement::from_algebra(ev_level0(ctx, i, GenKind::XMinus));
        asg[hh(i, 0)] = CompletionElement::from_algebra(ev_level0(ctx, i, GenKind::H));
        asg[hh(i, 1)] = canonicalize(ctx, ev_h1(ctx, i));
    }
    // level-one x images through the recursion at r = 0
    for (int i = 0; i < N; ++i) {
        for (int sign : {1, -1}) {
            CompletionElement img;
            if (!node_is_odd(ctx, i)) {
                CompletionElement ht = ev_htilde1(ctx, i);
                CompletionElement br = bracket_cc(ctx, ht, asg[xg(sign, i, 0)]);
                Scalar a(sign);  // 1/a_ii with the overall sign
                a = a / Scalar(cartan_a(ctx, i, i));
                br.scale(a);
                img = std::move(br);
            } else {
                int ip = i + 1;
                CompletionElement ht = ev_htilde1(ctx, ip);
                CompletionElement br = bracket_cc(ctx, ht, asg[xg(sign, i, 0)]);
                br.scale(Scalar(sign) / Scalar(cartan_a(ctx, ip, i)));
                CompletionElement corr = asg[xg(sign, i, 0)];
                corr.scale(Scalar(cartan_m(ctx, ip, i)) * half_diff);
                br += corr;
                img = canonicalize(ctx, std::move(br));
            }
            asg[xg(sign, i, 1)] = std::move(img);
        }
    }
    return asg;
}

namespace {

CompletionElement eval_expr_symbolic(const RankData& ctx, const RelExpr& e,
                                     const Assignment& asg) {
    switch (e.op) {
        case RelExpr::Op::Gen: {
            auto it = asg.find(e.gen);
            if (it == asg.end())
                throw std::out_of_range("assignment missing generator " + to_string(e.gen));
            return it->second;
        }
        case RelExpr::Op::Bracket:
            return bracket_cc(ctx, eval_expr_symbolic(ctx, e.kids[0], asg),
                              eval_expr_symbolic(ctx, e.kids[1], asg));
        case RelExpr::Op::Anti:
            return anticommutator_cc(ctx, eval_expr_symbolic(ctx, e.kids[0], asg),
                                     eval_expr_symbolic(ctx, e.kids[1], asg));
        case RelExpr::Op::Scale: {
            CompletionElement x = eval_expr_symbolic(ctx, e.kids[0], asg);
            x.scale(e.coeff);
            return x;
        }
        case RelExpr::Op::Sum:
        default: {
            CompletionElement out;
            for (const auto& k : e.kids) out += eval_expr_symbolic(ctx, k, asg);
            return out;
        }
    }
}

AlgebraElement eval_expr_truncated(const RankData& ctx, const RelExpr& e,
                                   const std::function<AlgebraElement(const YGen&)>& image) {
    switch (e.op) {
        case RelExpr::Op::Gen:
            return image(e.gen);
        case RelExpr::Op::Bracket:
            return bracket_u(ctx, eval_expr_truncated(ctx, e.kids[0], image),
                             eval_expr_truncated(ctx, e.kids[1], image));
        case RelExpr::Op::Anti:
            return anticommutator(ctx, eval_expr_truncated(ctx, e.kids[0], image),
                                  eval_expr_truncated(ctx, e.kids[1], image));
        case RelExpr::Op::Scale: {
            AlgebraElement x = eval_expr_truncated(ctx, e.kids[0], image);
            x.scale(e.coeff);
            return x;
        }
        case RelExpr::Op::Sum:
        default: {
            AlgebraElement out;
            for (const auto& k : e.kids) out += eval_expr_truncated(ctx, k, image);
            return out;
        }
    }
}

std::string first_term_string(const CompletionElement& x) {
    if (!x.finite.is_zero()) {
        const auto& [m, s] = *x.finite.terms().begin();
        return s.to_string() + " * " + to_string(m);
    }
    if (!x.tails.empty()) return x.tails.front().to_string();
    return "";
}

std::string first_term_string(const AlgebraElement& x) {
    if (x.is_zero()) return "";
    const auto& [m, s] = *x.terms().begin();
    return s.to_string() + " * " + to_string(m);
}

int image_mode_shift(const CompletionElement& img) {
    int a = img.finite.max_abs_mode();
    for (const auto& f : img.tails)
        for (const auto& p : f.factors) {
            long c = p.mode.cst < 0 ? -p.mode.cst : p.mode.cst;
            a = std::max<int>(a, static_cast<int>(c));
        }
    return a;
}

}  // namespace

Verdict evaluate_relation_symbolic(const RankData& ctx, const Relation& rel,
                                   const Assignment& asg, CentralPolicy policy) {
    CompletionElement diff =
        eval_expr_symbolic(ctx, rel.lhs, asg) - eval_expr_symbolic(ctx, rel.rhs, asg);
    if (policy == CentralPolicy::Specialized) diff = specialize_central(ctx, diff);
    CompletionElement canon = canonicalize(ctx, diff);
    if (is_zero_canonical(canon)) return {true, ""};
    if (!fully_decidable(canon))
        throw UnsupportedShape("symbolic residual contains undecidable families for " + rel.id +
                               "[" + rel.instance + "]");
    return {false, first_term_string(canon)};
}

int relation_mode_shift(const RankData& ctx, const Relation& rel, const Assignment& asg) {
    (void)ctx;
    std::vector<YGen> gens;
    rel.lhs.collect_generators(gens);
    rel.rhs.collect_generators(gens);
    int a = 1;
    for (const auto& g : gens) {
        auto it = asg.find(g);
        if (it != asg.end()) a = std::max(a, image_mode_shift(it->second));
    }
    int depth = std::max(rel.lhs.bracket_depth(), rel.rhs.bracket_depth());
    return a * std::max(1, depth);
}

Verdict evaluate_relation_truncated(const RankData& ctx, const Relation& rel,
                                    const Assignment& asg, const TruncSpec& spec,
                                    CentralPolicy policy) {
    int S = spec.s_max > 0 ? spec.s_max
                           : spec.window + relation_mode_shift(ctx, rel, asg) + 1;
    std::map<YGen, AlgebraElement> cache;
    auto image = [&](const YGen& g) -> AlgebraElement {
        auto it = cache.find(g);
        if (it != cache.end()) return it->second;
        auto ia = asg.find(g);
        if (ia == asg.end())
            throw std::out_of_range("assignment missing generator " + to_string(g));
        AlgebraElement e = expand(ctx, ia->second, S);
        cache.emplace(g, e);
        return e;
    };
    AlgebraElement diff = eval_expr_truncated(ctx, rel.lhs, image);
    diff -= eval_expr_truncated(ctx, rel.rhs, image);
    if (policy == CentralPolicy::Specialized) {
        CompletionElement spec_diff =
            specialize_central(ctx, CompletionElement::from_algebra(std::move(diff)));
        diff = std::move(spec_diff.finite);
    }
    AlgebraElement windowed = truncate_project(diff, spec.window);
    if (windowed.is_zero()) return {true, ""};
    return {false, first_term_string(windowed)};
}

ExtendedAssignment::ExtendedAssignment(const RankData& ctx, Assignment base, int r_max)
    : ctx_(ctx), base_(std::move(base)), r_max_(r_max) {
    if (r_max_ > 3) throw ConfigError("higher-mode recursion supports r_max <= 3");
}

AlgebraElement ExtendedAssignment::image(const YGen& g, int S_max) const {
    if (g.level > r_max_) throw std::out_of_range("level above configured r_max");
    auto cached = memo_.find({g, S_max});
    if (cached != memo_.end()) return cached->second;

    AlgebraElement result;
    if (g.level <= 1) {
        result = expand(ctx_, base_.at(g), S_max);
    } else if (g.kind == YGen::Kind::H) {
        // h_{i,r} = [x+_{i,r}, x-_{i,0}]
        result = bracket_u(ctx_, image(YGen{YGen::Kind::XPlus, g.node, g.level}, S_max),
                           image(YGen{YGen::Kind::XMinus, g.node, 0}, S_max));
    } else {
        int sign = g.kind == YGen::Kind::XPlus ? 1 : -1;
        const int i = g.node;
        YGen below{g.kind, i, g.level - 1};
        const Scalar half_diff = Scalar(Rat(1, 2)) * (Scalar::eps1() - Scalar::eps2());
        AlgebraElement ht;
        Scalar coeff;
        if (!node_is_odd(ctx_, i)) {
            ht = expand(ctx_, ev_htilde1(ctx_, i), S_max);
            coeff = Scalar(sign) / Scalar(cartan_a(ctx_, i, i));
            result = bracket_u(ctx_, ht, image(below, S_max));
            result.scale(coeff);
        } else {
            ht = expand(ctx_, ev_htilde1(ctx_, i + 1), S_max);
            coeff = Scalar(sign) / Scalar(cartan_a(ctx_, i + 1, i));
            result = bracket_u(ctx_, ht, image(below, S_max));
            result.scale(coeff);
            AlgebraElement corr = image(below, S_max);
            corr.scale(Scalar(cartan_m(ctx_, i + 1, i)) * half_diff);
            result += corr;
        }
    }
    memo_.emplace(std::pair(g, S_max), result);
    return result;
}

Verdict evaluate_relation_extended(const RankData& ctx, const Relation& rel,
                                   const ExtendedAssignment& asg, const TruncSpec& spec,
                                   CentralPolicy policy) {
    int S = spec.s_max;
    if (S <= 0) {
        // guard band: base offsets (<=1) plus one unit per recursion level
        std::vector<YGen> gens;
        rel.lhs.collect_generators(gens);
        rel.rhs.collect_generators(gens);
        int max_level = 1;
        for (const auto& g : gens) max_level = std::max(max_level, g.level);
        S = spec.window + 1 + max_level + 1;
    }
    auto image = [&](const YGen& g) { return asg.image(g, S); };
    AlgebraElement diff = eval_expr_truncated(ctx, rel.lhs, image);
    diff -= eval_expr_truncated(ctx, rel.rhs, image);
    if (policy == CentralPolicy::Specialized) {
        CompletionElement spec_diff =
            specialize_central(ctx, CompletionElement::from_algebra(std::move(diff)));
        diff = std::move(spec_diff.finite);
    }
    AlgebraElement windowed = truncate_project(diff, spec.window);
    if (windowed.is_zero()) return {true, ""};
    return {false, first_term_string(windowed)};
}

Assignment perturb_assignment(const RankData& ctx, const Assignment& asg, unsigned seed,
                              std::string* description) {
    (void)ctx;
    std::mt19937_64 rng(seed);
    Assignment out = asg;
    // collect perturbable coefficient slots
    struct Slot {
        YGen gen;
        bool finite;
        std::size_t index;
    };
    std::vector<Slot> slots;
    for (const auto& [g, img] : out) {
        std::size_t i = 0;
        for (auto it = img.finite.terms().begin(); it != img.finite.terms().end(); ++it, ++i)
            slots.push_back({g, true, i});
        for (std::size_t f = 0; f < img.tails.size(); ++f) slots.push_back({g, false, f});
    }
    std::uniform_int_distribution<std::size_t> pick(0, slots.size() - 1);
    const Slot& s = slots[pick(rng)];
    CompletionElement& img = out[s.gen];
    std::ostringstream desc;
    if (s.finite) {
        auto it = img.finite.terms().begin();
        std::advance(it, s.index);
        PbwMonomial m = it->first;
        img.finite.add_term(m, Scalar(1));
        desc << "+1 on coefficient of " << to_string(m) << " in " << to_string(s.gen);
    } else {
        img.tails[s.index].coeff += IndexPoly(Scalar(1));
        desc << "+1 on tail family coefficient in " << to_string(s.gen) << " (family #"
             << s.index << ")";
    }
    if (description) *description = desc.str();
    return out;
}

}  // namespace glhat
