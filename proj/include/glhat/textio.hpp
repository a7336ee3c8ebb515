#pragma once

#include "glhat/tails.hpp"

#include <map>
#include <string>

namespace glhat {

// Plain-text serialization of completion elements, one finite term or tail
// family per line, in canonical order. Stable and diff-friendly; used by the
// CLI dump flags and the golden-file tests.
//
//   finite: <scalar> ; [c^a] [z^b] [E(r,c|mode) ...]
//   tail:   sum s>=0 [t>=0] ; <index-polynomial> ; [c^a] [z^b] ; E(r,c|affine) ... [; delta ...]
std::string to_text(const RankData& ctx, const CompletionElement& x);

// Substitutes rational values for eps1/eps2/alpha in every coefficient.
CompletionElement specialize_scalars(const RankData& ctx, const CompletionElement& x,
                                     const std::map<Var, Rat>& bindings);

}  // namespace glhat
