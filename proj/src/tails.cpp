#include "glhat/tails.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace glhat {

namespace {

Rat int_pow(long base, int exp) {
    Rat r(1);
    for (int i = 0; i < exp; ++i) r *= Rat(base);
    return r;
}

long binom(int n, int k) {
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

IndexPoly::IndexPoly(Scalar constant) {
    if (!constant.is_zero()) terms_[{0, 0}] = std::move(constant);
}

IndexPoly IndexPoly::index(int slot) {
    IndexPoly p;
    Key k{0, 0};
    k[slot] = 1;
    p.terms_[k] = Scalar(1);
    return p;
}

bool IndexPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
}

Scalar IndexPoly::constant_value() const {
    if (terms_.empty()) return Scalar(0);
    if (!is_constant()) throw std::logic_error("constant_value on non-constant index polynomial");
    return terms_.begin()->second;
}

void IndexPoly::add(const Key& k, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, ins] = terms_.try_emplace(k, c);
    if (!ins) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

IndexPoly& IndexPoly::operator+=(const IndexPoly& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
}

IndexPoly operator*(const IndexPoly& a, const IndexPoly& b) {
    IndexPoly out;
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms())
            out.add({ka[0] + kb[0], ka[1] + kb[1]}, ca * cb);
    return out;
}

IndexPoly& IndexPoly::scale(const Scalar& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
}

IndexPoly IndexPoly::operator-() const {
    IndexPoly out(*this);
    for (auto& [k, c] : out.terms_) c = -c;
    return out;
}

IndexPoly IndexPoly::substitute_const(int slot, long value) const {
    IndexPoly out;
    for (const auto& [k, c] : terms_) {
        Key nk = k;
        nk[slot] = 0;
        out.add(nk, c * Scalar(int_pow(value, k[slot])));
    }
    return out;
}

IndexPoly IndexPoly::substitute_slot(int slot, int target_slot, long shift) const {
    IndexPoly out;
    for (const auto& [k, c] : terms_) {
        int e = k[slot];
        Key base = k;
        base[slot] = 0;
        for (int j = 0; j <= e; ++j) {
            Key nk = base;
            nk[target_slot] += j;
            out.add(nk, c * Scalar(Rat(binom(e, j)) * int_pow(shift, e - j)));
        }
    }
    return out;
}

IndexPoly IndexPoly::shift(int slot, long delta) const {
    if (delta == 0) return *this;
    return substitute_slot(slot, slot, delta);
}

IndexPoly IndexPoly::swap_slots() const {
    IndexPoly out;
    for (const auto& [k, c] : terms_) out.add({k[1], k[0]}, c);
    return out;
}

Scalar IndexPoly::eval(long s, long t) const {
    Scalar out(0);
    for (const auto& [k, c] : terms_) out += c * Scalar(int_pow(s, k[0]) * int_pow(t, k[1]));
    return out;
}

int IndexPoly::compare(const IndexPoly& a, const IndexPoly& b) {
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
        int c = Scalar::compare(ia->second, ib->second);
        if (c != 0) return c;
    }
    if (ia != a.terms_.end()) return 1;
    if (ib != b.terms_.end()) return -1;
    return 0;
}

std::string IndexPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.to_string();
        if (k[0]) os << "*s" << (k[0] > 1 ? "^" + std::to_string(k[0]) : "");
        if (k[1]) os << "*t" << (k[1] > 1 ? "^" + std::to_string(k[1]) : "");
    }
    return os.str();
}

int TailFamily::parity(const RankData& ctx) const {
    int p = 0;
    for (const auto& f : factors) p ^= unit_parity(ctx, f.row, f.col);
    return p;
}

namespace {

std::string mode_string(const AffineMode& m) {
    std::ostringstream os;
    bool any = false;
    const char* names[2] = {"s", "t"};
    for (int k = 0; k < 2; ++k) {
        if (m.coef[k] == 0) continue;
        if (m.coef[k] > 0 && any) os << "+";
        if (m.coef[k] == -1)
            os << "-";
        else if (m.coef[k] != 1)
            os << m.coef[k] << "*";
        os << names[k];
        any = true;
    }
    if (m.cst != 0 || !any) {
        if (m.cst >= 0 && any) os << "+";
        os << m.cst;
    }
    return os.str();
}

}  // namespace

std::string TailFamily::to_string() const {
    std::ostringstream os;
    os << "sum[" << (arity == 2 ? "s,t" : "s") << ">=0] (" << coeff.to_string() << ")";
    if (c_exp) os << " c^" << c_exp;
    if (z_exp) os << " z^" << z_exp;
    for (const auto& f : factors)
        os << " E(" << int(f.row) << "," << int(f.col) << "|" << mode_string(f.mode) << ")";
    for (const auto& d : deltas) {
        AffineMode m{{d.coef[0], d.coef[1]}, d.cst};
        os << " [delta " << mode_string(m) << "=0]";
    }
    return os.str();
}

CompletionElement& CompletionElement::operator+=(const CompletionElement& o) {
    finite += o.finite;
    tails.insert(tails.end(), o.tails.begin(), o.tails.end());
    return *this;
}

CompletionElement& CompletionElement::operator-=(const CompletionElement& o) {
    finite -= o.finite;
    for (TailFamily f : o.tails) {
        f.coeff = -f.coeff;
        tails.push_back(std::move(f));
    }
    return *this;
}

CompletionElement& CompletionElement::scale(const Scalar& s) {
    finite.scale(s);
    if (s.is_zero()) {
        tails.clear();
        return *this;
    }
    for (auto& f : tails) f.coeff.scale(s);
    return *this;
}

std::string CompletionElement::to_string() const {
    std::ostringstream os;
    os << "finite: " << finite.to_string();
    for (const auto& f : tails) os << "\n" << f.to_string();
    return os.str();
}

AlgebraElement expand(const RankData& ctx, const CompletionElement& x, int S_max) {
    // Deltas pin indices to fixed values, so they are resolved up front;
    // otherwise a pinned term beyond S_max would silently drop.
    AlgebraElement out = x.finite;
    std::vector<TailFamily> free_tails;
    for (const auto& fam : x.tails) {
        if (fam.deltas.empty()) {
            free_tails.push_back(fam);
            continue;
        }
        CompletionElement resolved = resolve_deltas(ctx, fam);
        out += resolved.finite;
        free_tails.insert(free_tails.end(), resolved.tails.begin(), resolved.tails.end());
    }
    std::vector<Unit> word;
    for (const auto& fam : free_tails) {
        long tmax = fam.arity == 2 ? S_max : 0;
        for (long s = 0; s <= S_max; ++s) {
            for (long t = 0; t <= tmax; ++t) {
                Scalar coeff = fam.coeff.eval(s, t);
                if (coeff.is_zero()) continue;
                word.clear();
                for (const auto& f : fam.factors) word.push_back(f.instantiate(s, t));
                out += normal_order(ctx, word, coeff, fam.c_exp, fam.z_exp);
            }
        }
    }
    return out;
}

namespace {

// idx_slot := value; drops the slot and compacts slot 1 into slot 0 if needed.
TailFamily subst_index_const(const TailFamily& fam, int slot, long value) {
    TailFamily out = fam;
    out.coeff = fam.coeff.substitute_const(slot, value);
    for (auto& f : out.factors) {
        f.mode.cst += f.mode.coef[slot] * value;
        f.mode.coef[slot] = 0;
    }
    for (auto& d : out.deltas) {
        d.cst += d.coef[slot] * value;
        d.coef[slot] = 0;
    }
    if (slot == 0 && fam.arity == 2) {
        out.coeff = out.coeff.swap_slots();
        for (auto& f : out.factors) std::swap(f.mode.coef[0], f.mode.coef[1]);
        for (auto& d : out.deltas) std::swap(d.coef[0], d.coef[1]);
    }
    out.arity = fam.arity - 1;
    return out;
}

// idx1 := idx0 + shift (shift >= 0); arity drops to 1.
TailFamily tie_indices(const TailFamily& fam, long shift) {
    TailFamily out = fam;
    out.coeff = fam.coeff.substitute_slot(1, 0, shift);
    for (auto& f : out.factors) {
        f.mode.coef[0] += f.mode.coef[1];
        f.mode.cst += f.mode.coef[1] * shift;
        f.mode.coef[1] = 0;
    }
    for (auto& d : out.deltas) {
        d.coef[0] += d.coef[1];
        d.cst += d.coef[1] * shift;
        d.coef[1] = 0;
    }
    out.arity = 1;
    return out;
}

// idx_slot := idx_slot + delta (re-parametrization of the summation start).
TailFamily shift_index(const TailFamily& fam, int slot, long delta) {
    TailFamily out = fam;
    out.coeff = fam.coeff.shift(slot, delta);
    for (auto& f : out.factors) f.mode.cst += f.mode.coef[slot] * delta;
    for (auto& d : out.deltas) d.cst += d.coef[slot] * delta;
    return out;
}

AlgebraElement instantiate_concrete(const RankData& ctx, const TailFamily& fam, long s, long t) {
    Scalar coeff = fam.coeff.eval(s, t);
    if (coeff.is_zero()) return {};
    std::vector<Unit> word;
    word.reserve(fam.factors.size());
    for (const auto& f : fam.factors) word.push_back(f.instantiate(s, t));
    return normal_order(ctx, word, coeff, fam.c_exp, fam.z_exp);
}

}  // namespace

CompletionElement resolve_deltas(const RankData& ctx, const TailFamily& fam) {
    CompletionElement out;
    std::vector<TailFamily> stack{fam};
    while (!stack.empty()) {
        TailFamily f = std::move(stack.back());
        stack.pop_back();
        if (f.coeff.is_zero()) continue;
        if (f.deltas.empty()) {
            if (f.arity == 0) {
                out.finite += instantiate_concrete(ctx, f, 0, 0);
            } else {
                out.tails.push_back(std::move(f));
            }
            continue;
        }
        DeltaCon d = f.deltas.back();
        f.deltas.pop_back();
        if ((d.coef[0] != 0 && f.arity < 1) || (d.coef[1] != 0 && f.arity < 2))
            throw std::logic_error("delta references an inactive index slot");
        int c0 = d.coef[0];
        int c1 = d.coef[1];

        if (c0 == 0 && c1 == 0) {
            if (d.cst == 0) stack.push_back(std::move(f));
            continue;
        }
        if (std::abs(c0) > 1 || std::abs(c1) > 1)
            throw UnsupportedShape("delta constraint with non-unit index coefficient");

        if (c1 == 0) {
            long v = -d.cst * c0;  // c0 in {-1, +1}
            if (v >= 0) stack.push_back(subst_index_const(f, 0, v));
            continue;
        }
        if (c0 == 0) {
            long v = -d.cst * c1;
            if (v >= 0) stack.push_back(subst_index_const(f, 1, v));
            continue;
        }
        if (c0 == -c1) {
            // t = s + shift on the constrained line
            long shift = -d.cst * c1;
            if (shift >= 0) {
                stack.push_back(tie_indices(f, shift));
            } else {
                stack.push_back(tie_indices(shift_index(f, 0, -shift), 0));
            }
            continue;
        }
        // c0 == c1: antidiagonal s + t = K, finitely many solutions
        long K = -d.cst * c0;
        if (K < 0) continue;
        for (long s = 0; s <= K; ++s)
            stack.push_back(subst_index_const(subst_index_const(f, 1, K - s), 0, s));
    }
    return out;
}

namespace {

constexpr long kMinThreshold = std::numeric_limits<long>::min() / 4;

// Smallest v such that the consecutive pattern pair (p, q) satisfies the PBW
// comparison for every index value >= v; kMinThreshold when always satisfied;
// nullopt when the written order is not eventually correct.
std::optional<long> pair_threshold(const RankData& ctx, const FactorPat& p, const FactorPat& q) {
    long da = p.mode.coef[0], db = q.mode.coef[0];
    long cp = p.mode.cst, cq = q.mode.cst;
    auto rc_cmp = [&]() {
        if (p.row != q.row) return p.row < q.row ? 1 : -1;
        if (p.col != q.col) return p.col < q.col ? 1 : -1;
        return 0;
    };
    if (da == db) {
        long C = cq - cp;
        if (C > 0) return kMinThreshold;
        if (C < 0) return std::nullopt;
        int rc = rc_cmp();
        if (rc > 0) return kMinThreshold;
        if (rc < 0) return std::nullopt;
        if (unit_parity(ctx, p.row, p.col)) return std::nullopt;  // odd square pattern
        return kMinThreshold;
    }
    if (da > db) return std::nullopt;
    long D = db - da;
    long C = cq - cp;
    // smallest s with D*s + C >= 0
    long sc;
    if (-C <= 0) {
        sc = -((-C) / D);
        while (D * (sc - 1) + C >= 0) --sc;
    } else {
        sc = (-C + D - 1) / D;
    }
    if (D * sc + C == 0) {
        int rc = rc_cmp();
        bool tie_ok = rc > 0 || (rc == 0 && !unit_parity(ctx, p.row, p.col));
        return tie_ok ? sc : sc + 1;
    }
    return sc;
}

struct PhaseResult {
    TailFamily fam;
    AlgebraElement boundary;
};

// Re-parametrizes a one-index, delta-free family so its pattern is
// PBW-ordered for every index value >= 0 and starts exactly where the
// ordering becomes stable; the finitely many leftover instances land in
// the boundary.
std::optional<PhaseResult> normalize_phase(const RankData& ctx, const TailFamily& fam) {
    long tau = kMinThreshold;
    for (std::size_t i = 0; i + 1 < fam.factors.size(); ++i) {
        auto v = pair_threshold(ctx, fam.factors[i], fam.factors[i + 1]);
        if (!v) return std::nullopt;
        tau = std::max(tau, *v);
    }
    if (tau == kMinThreshold) {
        // ordering is index-independent: anchor on the first sloped factor
        const FactorPat* sloped = nullptr;
        for (const auto& f : fam.factors)
            if (f.mode.coef[0] != 0) {
                sloped = &f;
                break;
            }
        if (!sloped) throw UnsupportedShape("divergent constant-mode family");
        tau = -sloped->mode.cst * sloped->mode.coef[0];
    }
    PhaseResult res;
    if (tau > 0) {
        for (long s = 0; s < tau; ++s) res.boundary += instantiate_concrete(ctx, fam, s, 0);
    } else if (tau < 0) {
        for (long s = tau; s < 0; ++s) res.boundary -= instantiate_concrete(ctx, fam, s, 0);
    }
    res.fam = shift_index(fam, 0, tau);
    res.fam.stable = true;
    return res;
}

struct FamilyKey {
    int arity;
    int c_exp;
    int z_exp;
    bool stable;
    std::vector<FactorPat> factors;
    std::vector<DeltaCon> deltas;

    friend bool operator<(const FamilyKey& a, const FamilyKey& b) {
        if (a.arity != b.arity) return a.arity < b.arity;
        if (a.c_exp != b.c_exp) return a.c_exp < b.c_exp;
        if (a.z_exp != b.z_exp) return a.z_exp < b.z_exp;
        if (a.stable != b.stable) return a.stable < b.stable;
        if (a.factors != b.factors)
            return std::lexicographical_compare(a.factors.begin(), a.factors.end(),
                                                b.factors.begin(), b.factors.end());
        return std::lexicographical_compare(a.deltas.begin(), a.deltas.end(), b.deltas.begin(),
                                            b.deltas.end());
    }
};

FamilyKey key_of(const TailFamily& f) {
    return FamilyKey{f.arity, f.c_exp, f.z_exp, f.stable, f.factors, f.deltas};
}

TailFamily swap_index_names(const TailFamily& f) {
    TailFamily out = f;
    out.coeff = f.coeff.swap_slots();
    for (auto& p : out.factors) std::swap(p.mode.coef[0], p.mode.coef[1]);
    for (auto& d : out.deltas) std::swap(d.coef[0], d.coef[1]);
    return out;
}

}  // namespace

CompletionElement canonicalize(const RankData& ctx, const CompletionElement& x) {
    CompletionElement out;
    out.finite = x.finite;
    std::map<FamilyKey, IndexPoly> merged;
    auto insert = [&](const TailFamily& f) {
        auto [it, ins] = merged.try_emplace(key_of(f), f.coeff);
        if (!ins) it->second += f.coeff;
    };

    for (const auto& fam : x.tails) {
        CompletionElement resolved = resolve_deltas(ctx, fam);
        out.finite += resolved.finite;
        for (TailFamily& f : resolved.tails) {
            if (f.arity == 1) {
                auto norm = normalize_phase(ctx, f);
                if (norm) {
                    out.finite += norm->boundary;
                    insert(norm->fam);
                } else {
                    f.stable = false;
                    insert(f);
                }
            } else {
                f.stable = false;
                TailFamily swapped = swap_index_names(f);
                insert(key_of(swapped) < key_of(f) ? swapped : f);
            }
        }
    }
    for (auto& [k, coeff] : merged) {
        if (coeff.is_zero()) continue;
        TailFamily f;
        f.arity = k.arity;
        f.c_exp = k.c_exp;
        f.z_exp = k.z_exp;
        f.stable = k.stable;
        f.factors = k.factors;
        f.deltas = k.deltas;
        f.coeff = std::move(coeff);
        out.tails.push_back(std::move(f));
    }
    return out;
}

bool is_zero_canonical(const CompletionElement& canonical) {
    return canonical.is_empty();
}

bool fully_decidable(const CompletionElement& canonical) {
    for (const auto& f : canonical.tails)
        if (!f.stable) return false;
    return true;
}

namespace {

struct PatBracket {
    struct Lie {
        FactorPat pat;
        int sign;
    };
    Lie lie[2];
    int lie_count = 0;
    int c_sign = 0;
    int z_sign = 0;
    DeltaCon delta;         // mode sum == 0; meaningful with the central parts
    AffineMode first_mode;  // the cocycle coefficient factor u
};

PatBracket pattern_bracket(const RankData& ctx, const FactorPat& x, const FactorPat& y) {
    PatBracket out;
    const int a = x.row, b = x.col, c = y.row, d = y.col;
    AffineMode sum{{x.mode.coef[0] + y.mode.coef[0], x.mode.coef[1] + y.mode.coef[1]},
                   x.mode.cst + y.mode.cst};
    if (b == c) out.lie[out.lie_count++] = {FactorPat(a, d, sum), 1};
    if (d == a) {
        int sgn = (unit_parity(ctx, a, b) && unit_parity(ctx, c, d)) ? 1 : -1;
        out.lie[out.lie_count++] = {FactorPat(c, b, sum), sgn};
    }
    if (b == c && a == d) out.c_sign = parity(ctx, a) ? -1 : 1;
    if (a == b && c == d) out.z_sign = ((parity(ctx, a) + parity(ctx, c)) & 1) ? -1 : 1;
    out.delta = DeltaCon{{sum.coef[0], sum.coef[1]}, sum.cst};
    out.first_mode = x.mode;
    return out;
}

IndexPoly affine_to_poly(const AffineMode& m) {
    IndexPoly p{Scalar(Rat(m.cst))};
    for (int k = 0; k < 2; ++k) {
        if (!m.coef[k]) continue;
        IndexPoly q = IndexPoly::index(k);
        q.scale(Scalar(Rat(m.coef[k])));
        p += q;
    }
    return p;
}

}  // namespace

CompletionElement family_bracket_finite(const RankData& ctx, const TailFamily& fam,
                                        const AlgebraElement& x, bool reversed) {
    CompletionElement raw;
    const int fam_par = fam.parity(ctx);

    std::vector<int> fam_suffix_par(fam.factors.size());
    {
        int suffix = 0;
        for (std::size_t l = fam.factors.size(); l-- > 0;) {
            fam_suffix_par[l] = suffix;
            suffix ^= unit_parity(ctx, fam.factors[l].row, fam.factors[l].col);
        }
    }

    for (const auto& [mono, mcoeff] : x.terms()) {
        if (mono.factors.empty()) continue;  // centrals and constants commute
        int mono_par = mono.parity(ctx);
        int base_sign = reversed ? ((fam_par && mono_par) ? 1 : -1) : 1;

        int prefix_par = 0;
        for (std::size_t j = 0; j < mono.factors.size(); ++j) {
            const Unit& u = mono.factors[j];
            const int u_par = unit_parity(ctx, u);
            int outer_sign = (fam_par && prefix_par) ? -1 : 1;

            for (std::size_t l = 0; l < fam.factors.size(); ++l) {
                int inner_sign = (u_par && fam_suffix_par[l]) ? -1 : 1;
                PatBracket pb = pattern_bracket(ctx, fam.factors[l], FactorPat::constant(u));
                int total_sign = base_sign * outer_sign * inner_sign;

                auto assemble = [&](bool drop_l) {
                    TailFamily nf;
                    nf.arity = fam.arity;
                    nf.c_exp = fam.c_exp + mono.c_exp;
                    nf.z_exp = fam.z_exp + mono.z_exp;
                    nf.deltas = fam.deltas;
                    nf.factors.reserve(mono.factors.size() + fam.factors.size());
                    for (std::size_t r = 0; r < j; ++r)
                        nf.factors.push_back(FactorPat::constant(mono.factors[r]));
                    for (std::size_t r = 0; r < fam.factors.size(); ++r) {
                        if (r == l && drop_l) continue;
                        nf.factors.push_back(fam.factors[r]);
                    }
                    for (std::size_t r = j + 1; r < mono.factors.size(); ++r)
                        nf.factors.push_back(FactorPat::constant(mono.factors[r]));
                    return nf;
                };

                for (int t = 0; t < pb.lie_count; ++t) {
                    TailFamily nf = assemble(false);
                    nf.factors[j + l] = pb.lie[t].pat;
                    nf.coeff = fam.coeff;
                    nf.coeff.scale(mcoeff * Scalar(Rat(total_sign * pb.lie[t].sign)));
                    raw.tails.push_back(std::move(nf));
                }
                if (pb.c_sign != 0 || pb.z_sign != 0) {
                    IndexPoly mode_poly = affine_to_poly(pb.first_mode);
                    auto emit_central = [&](bool is_c, int sgn) {
                        TailFamily nf = assemble(true);
                        (is_c ? nf.c_exp : nf.z_exp) += 1;
                        nf.deltas.push_back(pb.delta);
                        nf.coeff = fam.coeff * mode_poly;
                        nf.coeff.scale(mcoeff * Scalar(Rat(total_sign * sgn)));
                        raw.tails.push_back(std::move(nf));
                    };
                    if (pb.c_sign != 0) emit_central(true, pb.c_sign);
                    if (pb.z_sign != 0) emit_central(false, pb.z_sign);
                }
            }
            prefix_par ^= u_par;
        }
    }
    return canonicalize(ctx, raw);
}

CompletionElement family_bracket_family(const RankData& ctx, const TailFamily& f,
                                        const TailFamily& g) {
    if (f.arity != 1 || g.arity != 1 || f.factors.size() > 2 || g.factors.size() > 2 ||
        !f.deltas.empty() || !g.deltas.empty())
        throw UnsupportedShape("family bracket supports one-index quadratic tails only");

    // g lives on index slot 1 in the result
    TailFamily gr = swap_index_names(g);

    CompletionElement raw;
    const int g_par = g.parity(ctx);
    std::vector<int> f_par(f.factors.size()), g_par_each(gr.factors.size());
    for (std::size_t i = 0; i < f.factors.size(); ++i)
        f_par[i] = unit_parity(ctx, f.factors[i].row, f.factors[i].col);
    for (std::size_t j = 0; j < gr.factors.size(); ++j)
        g_par_each[j] = unit_parity(ctx, gr.factors[j].row, gr.factors[j].col);

    for (std::size_t i = 0; i < f.factors.size(); ++i) {
        int f_suffix_par = 0;
        for (std::size_t l = i + 1; l < f.factors.size(); ++l) f_suffix_par ^= f_par[l];
        int sign1 = (g_par && f_suffix_par) ? -1 : 1;
        for (std::size_t j = 0; j < gr.factors.size(); ++j) {
            int g_prefix_par = 0;
            for (std::size_t l = 0; l < j; ++l) g_prefix_par ^= g_par_each[l];
            int sign2 = (f_par[i] && g_prefix_par) ? -1 : 1;

            PatBracket pb = pattern_bracket(ctx, f.factors[i], gr.factors[j]);
            int total_sign = sign1 * sign2;

            auto assemble = [&](bool keep_bracket_slot) {
                TailFamily nf;
                nf.arity = 2;
                nf.c_exp = f.c_exp + g.c_exp;
                nf.z_exp = f.z_exp + g.z_exp;
                for (std::size_t r = 0; r < i; ++r) nf.factors.push_back(f.factors[r]);
                for (std::size_t r = 0; r < j; ++r) nf.factors.push_back(gr.factors[r]);
                if (keep_bracket_slot) nf.factors.push_back(FactorPat());
                for (std::size_t r = j + 1; r < gr.factors.size(); ++r)
                    nf.factors.push_back(gr.factors[r]);
                for (std::size_t r = i + 1; r < f.factors.size(); ++r)
                    nf.factors.push_back(f.factors[r]);
                return nf;
            };

            IndexPoly base_coeff = f.coeff * gr.coeff;
            for (int t = 0; t < pb.lie_count; ++t) {
                TailFamily nf = assemble(true);
                nf.factors[i + j] = pb.lie[t].pat;
                nf.coeff = base_coeff;
                nf.coeff.scale(Scalar(Rat(total_sign * pb.lie[t].sign)));
                raw.tails.push_back(std::move(nf));
            }
            if (pb.c_sign != 0 || pb.z_sign != 0) {
                IndexPoly mode_poly = affine_to_poly(pb.first_mode);
                auto emit_central = [&](bool is_c, int sgn) {
                    TailFamily nf = assemble(false);
                    (is_c ? nf.c_exp : nf.z_exp) += 1;
                    nf.deltas.push_back(pb.delta);
                    nf.coeff = base_coeff * mode_poly;
                    nf.coeff.scale(Scalar(Rat(total_sign * sgn)));
                    raw.tails.push_back(std::move(nf));
                };
                if (pb.c_sign != 0) emit_central(true, pb.c_sign);
                if (pb.z_sign != 0) emit_central(false, pb.z_sign);
            }
        }
    }
    return canonicalize(ctx, raw);
}

CompletionElement bracket_cc(const RankData& ctx, const CompletionElement& x,
                             const CompletionElement& y) {
    CompletionElement out;
    out.finite = bracket_u(ctx, x.finite, y.finite);
    for (const auto& fam : x.tails) out += family_bracket_finite(ctx, fam, y.finite, false);
    for (const auto& fam : y.tails) out += family_bracket_finite(ctx, fam, x.finite, true);
    for (const auto& f : x.tails)
        for (const auto& g : y.tails) out += family_bracket_family(ctx, f, g);
    return canonicalize(ctx, out);
}

CompletionElement multiply_cc(const RankData& ctx, const CompletionElement& x,
                              const CompletionElement& y) {
    if (x.has_tails() || y.has_tails())
        throw UnsupportedShape("symbolic product of infinite tails is not supported");
    return CompletionElement::from_algebra(multiply(ctx, x.finite, y.finite));
}

CompletionElement anticommutator_cc(const RankData& ctx, const CompletionElement& x,
                                    const CompletionElement& y) {
    if (x.has_tails() || y.has_tails())
        throw UnsupportedShape("symbolic anticommutator of infinite tails is not supported");
    return CompletionElement::from_algebra(anticommutator(ctx, x.finite, y.finite));
}

}  // namespace glhat
