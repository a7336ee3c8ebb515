#include "glhat/cartan.hpp"

namespace glhat {

namespace {
int pow_m1(int parity) {
    return parity & 1 ? -1 : 1;
}

void check_node(const RankData& ctx, int i) {
    if (i < 0 || i > ctx.nodes() - 1) throw std::out_of_range("node index out of range");
}
}  // namespace

int parity(const RankData& ctx, int i) {
    if (i < 0 || i > ctx.size()) throw std::out_of_range("parity index out of range");
    if (i == 0) i = ctx.size();
    return i <= ctx.m ? 0 : 1;
}

int unit_parity(const RankData& ctx, int row, int col) {
    if (row < 1 || row > ctx.size() || col < 1 || col > ctx.size())
        throw std::out_of_range("matrix index out of range");
    return (parity(ctx, row) + parity(ctx, col)) & 1;
}

int cartan_a(const RankData& ctx, int i, int j) {
    check_node(ctx, i);
    check_node(ctx, j);
    int top = ctx.nodes() - 1;
    if (i == j) return pow_m1(parity(ctx, i)) + pow_m1(parity(ctx, i + 1));
    if (j == i + 1) return -pow_m1(parity(ctx, i + 1));
    if (j == i - 1) return -pow_m1(parity(ctx, i));
    if ((i == 0 && j == top) || (i == top && j == 0)) return 1;
    return 0;
}

int cartan_m(const RankData& ctx, int i, int j) {
    check_node(ctx, i);
    check_node(ctx, j);
    int top = ctx.nodes() - 1;
    if (i == 0 && j == top) return -1;
    if (i == top && j == 0) return 1;
    if (j == i + 1) return -pow_m1(parity(ctx, i + 1));
    if (j == i - 1) return pow_m1(parity(ctx, i));
    return 0;
}

int h1_shift(const RankData& ctx, int i) {
    check_node(ctx, i);
    if (i == 0) return ctx.m - ctx.n;
    return i - 2 * delta_leq(ctx.m + 1, i) * (i - ctx.m);
}

}  // namespace glhat
