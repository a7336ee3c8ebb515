#pragma once

#include "glhat/tails.hpp"

#include <array>

namespace glhat {

struct EngineBug : std::logic_error {
    using std::logic_error::logic_error;
};

enum class CentralPolicy { Formal, Specialized };

struct EvalParams {
    RankData ctx;
    CentralPolicy policy = CentralPolicy::Formal;
};

enum class GenKind { XPlus, XMinus, H };

// Level-zero images: x+_0 = E_{m+n,1}(1), x-_0 = -E_{1,m+n}(-1),
// x+_i = E_{i,i+1}, x-_i = (-1)^{p(i)} E_{i+1,i},
// h_0 = -E_{1,1} - E_{m+n,m+n} + c, h_i = (-1)^{p(i)}E_{ii} - (-1)^{p(i+1)}E_{i+1,i+1}.
AlgebraElement ev_level0(const RankData& ctx, int node, GenKind kind);

// The mode-1 Cartan image split into the finite part and the four tail
// groups of the displayed formula (k-sums expanded). For node 0 the two
// displayed families sit in groups 0 and 1.
struct H1Parts {
    AlgebraElement finite;
    std::array<std::vector<TailFamily>, 4> groups;

    CompletionElement total() const;
};

H1Parts ev_h1_parts(const RankData& ctx, int node);
CompletionElement ev_h1(const RankData& ctx, int node);

// ev(h~_{i,1}) computed from the definition h~ = h_1 - (hbar/2) h_0^2.
CompletionElement ev_htilde1(const RankData& ctx, int node);

// The closed form of ev(h~_{i,1}) used by the t0 identity; ev_htilde1_checked
// recomputes from the definition and throws EngineBug on any mismatch.
// At node 0 the definition and the closed form differ by exactly the central
// correction ev_h01_display_gap (the closed form squares h_0 without its
// central summand); the check pins that gap instead.
CompletionElement ev_htilde1_display(const RankData& ctx, int node);
CompletionElement ev_htilde1_checked(const RankData& ctx, int node);
CompletionElement ev_h01_display_gap(const RankData& ctx);

// c -> (n-m) eps1 / hbar  (from hbar c = (n-m) eps1), z -> 1.
Scalar central_charge_scalar(const RankData& ctx);
CompletionElement specialize_central(const RankData& ctx, const CompletionElement& x);

}  // namespace glhat
