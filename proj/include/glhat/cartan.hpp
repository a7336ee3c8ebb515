#pragma once

#include "glhat/scalar.hpp"

#include <stdexcept>

namespace glhat {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Rank of gl(m|n). The whole construction needs m, n >= 2 and m != n.
struct RankData {
    int m = 0;
    int n = 0;

    RankData() = default;
    RankData(int m_, int n_) : m(m_), n(n_) { validate(); }

    int size() const { return m + n; }
    int nodes() const { return m + n; }  // Dynkin nodes 0 .. m+n-1

    void validate() const {
        if (m < 2 || n < 2) throw ConfigError("rank requires m >= 2 and n >= 2");
        if (m == n) throw ConfigError("rank requires m != n");
    }

    bool operator==(const RankData&) const = default;
};

// p(i) for matrix/node index i, extended cyclically: p(0) := p(m+n) = 1.
// Valid arguments are 0 .. m+n.
int parity(const RankData& ctx, int i);

// Parity of the matrix unit E_{i,j}: p(i) + p(j) mod 2, indices 1 .. m+n.
int unit_parity(const RankData& ctx, int row, int col);

// Symmetric Cartan entry a_{ij}, node indices 0 .. m+n-1.
int cartan_a(const RankData& ctx, int i, int j);

// Skew table m_{ij}, node indices 0 .. m+n-1.
int cartan_m(const RankData& ctx, int i, int j);

// Indicator delta(i <= j).
inline int delta_leq(int i, int j) { return i <= j ? 1 : 0; }

// The mode-1 Cartan coefficient shift: (m-n) at node 0 and
// i - 2*delta(i >= m+1)*(i-m) elsewhere. Shared between the evaluation
// map and the t0 identity right-hand side.
int h1_shift(const RankData& ctx, int i);

// True when the generators x^+-_{i,r} are odd (nodes 0 and m).
inline bool node_is_odd(const RankData& ctx, int i) { return i == 0 || i == ctx.m; }

}  // namespace glhat
