#pragma once

#include "glhat/evalmap.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace glhat {

struct YGen {
    enum class Kind { XPlus, XMinus, H };
    Kind kind = Kind::H;
    int node = 0;
    int level = 0;

    friend auto operator<=>(const YGen&, const YGen&) = default;
};

std::string to_string(const YGen& g);
bool ygen_odd(const RankData& ctx, const YGen& g);

// Relation expressions are built from generators, brackets, anticommutators,
// scalar multiples and sums; the minimalistic presentation needs nothing else
// (h~_{i,1} enters as h_{i,1} - (hbar/2){h_{i,0}, h_{i,0}}).
struct RelExpr {
    enum class Op { Gen, Bracket, Anti, Scale, Sum };
    Op op = Op::Gen;
    YGen gen;
    Scalar coeff = Scalar(1);
    std::vector<RelExpr> kids;

    static RelExpr generator(YGen g);
    static RelExpr bracket(RelExpr a, RelExpr b);
    static RelExpr anti(RelExpr a, RelExpr b);
    static RelExpr scale(Scalar s, RelExpr a);
    static RelExpr sum(std::vector<RelExpr> parts);
    static RelExpr zero() { return sum({}); }

    void collect_generators(std::vector<YGen>& out) const;
    int bracket_depth() const;
};

struct Relation {
    std::string id;        // eq2.1 .. eq2.9 / eq1.1 .. eq1.8
    std::string anchor;    // human-readable source location
    std::string instance;  // parameter binding, e.g. "i=0,j=1,sign=+"
    RelExpr lhs;
    RelExpr rhs;
};

// The complete minimalistic-presentation instance list over levels 0 and 1.
std::vector<Relation> minimal_relations(const RankData& ctx);

// Sampled instances of the full presentation eq1.1-eq1.8 with level sums
// r + s <= level_budget (used with the recursion-extended assignment).
std::vector<Relation> sampled_full_relations(const RankData& ctx, int level_budget);

using Assignment = std::map<YGen, CompletionElement>;

// The Theorem 2.3 images for levels 0 and 1. Level-one x images come from
// the mode recursion applied to h~ at level 1.
Assignment evaluation_assignment(const RankData& ctx);

struct Verdict {
    bool holds = false;
    std::string counterexample;  // first divergent canonical term or window coefficient
};

// Relation checks hold at the central character hbar c = (n-m) eps1, z = 1
// of the evaluation theorem, so by default the residual is specialized there
// before the zero test; CentralPolicy::Formal keeps c and z symbolic.
Verdict evaluate_relation_symbolic(const RankData& ctx, const Relation& rel,
                                   const Assignment& asg,
                                   CentralPolicy policy = CentralPolicy::Specialized);

struct TruncSpec {
    int window = 4;
    int s_max = 0;  // 0 = derive from window + guard shift
};

// Largest |mode| constant appearing in the assignment images of the
// relation's generators; the guard band uses s_max = window + A + 1 with A
// scaled by the expression's bracket depth.
int relation_mode_shift(const RankData& ctx, const Relation& rel, const Assignment& asg);

Verdict evaluate_relation_truncated(const RankData& ctx, const Relation& rel,
                                    const Assignment& asg, const TruncSpec& spec,
                                    CentralPolicy policy = CentralPolicy::Specialized);

// Images of levels <= r_max through the recursions
//   x_{i,r+1} = +-(1/a_ii)[h~_{i,1}, x_{i,r}]            (i != 0, m)
//   x_{i,r+1} = +-(1/a_{i+1,i})[h~_{i+1,1}, x_{i,r}] + m_{i+1,i}(e1-e2)/2 x_{i,r}
//   h_{i,r+1} = [x+_{i,r+1}, x-_{i,0}],
// materialized as truncation expansions at a caller-chosen cutoff. Every
// constituent is expanded at the same S_max, so windowed comparisons need a
// guard band that also covers the recursion depth.
class ExtendedAssignment {
  public:
    ExtendedAssignment(const RankData& ctx, Assignment base, int r_max);

    int r_max() const { return r_max_; }
    const Assignment& base() const { return base_; }
    AlgebraElement image(const YGen& g, int S_max) const;

  private:
    RankData ctx_;
    Assignment base_;
    int r_max_;
    mutable std::map<std::pair<YGen, int>, AlgebraElement> memo_;
};

Verdict evaluate_relation_extended(const RankData& ctx, const Relation& rel,
                                   const ExtendedAssignment& asg, const TruncSpec& spec,
                                   CentralPolicy policy = CentralPolicy::Specialized);

// Adds +1 to one randomly chosen coefficient of one image (fault injection).
Assignment perturb_assignment(const RankData& ctx, const Assignment& asg, unsigned seed,
                              std::string* description = nullptr);

}  // namespace glhat
