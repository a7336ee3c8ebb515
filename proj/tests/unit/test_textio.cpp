#include "glhat/report.hpp"
#include "glhat/textio.hpp"
#include "glhat/evalmap.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

using namespace glhat;

#ifndef GLHAT_GOLDEN_DIR
#define GLHAT_GOLDEN_DIR "tests/golden"
#endif

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("completion element dump is stable") {
    RankData ctx(3, 2);
    CompletionElement img = canonicalize(ctx, ev_h1(ctx, 1));
    std::string text = to_text(ctx, img);
    std::string golden = read_file(std::string(GLHAT_GOLDEN_DIR) + "/dump_h11_3_2.txt");
    CHECK(text == golden);

    // serialization round: dumping twice is byte-identical
    CHECK(to_text(ctx, img) == text);

    CHECK(to_text(ctx, CompletionElement{}).find("zero") != std::string::npos);
}

TEST_CASE("scalar specialization of dumped elements") {
    RankData ctx(3, 2);
    CompletionElement img = CompletionElement::from_algebra(
        AlgebraElement::unit(Unit(1, 2, 0), Scalar::hbar()));
    CompletionElement sp = specialize_scalars(ctx, img, {{Var::Eps1, Rat(1)},
                                                         {Var::Eps2, Rat(2)}});
    CHECK(sp.finite == AlgebraElement::unit(Unit(1, 2, 0), Scalar(3)));
}

TEST_CASE("report json round-trip and determinism") {
    Report r;
    r.command = "verify-relations";
    r.config = {{"m", 3}, {"n", 2}, {"mode", "symbolic"}};
    r.entries.push_back({"eq2.2", "Theorem 2.2", "i=0,j=0", "holds", "", 1.25});
    r.entries.push_back({"eq2.5", "Theorem 2.2", "i=1,j=2,sign=+", "fails",
                         "eps1 * E(1,2|0)", 2.5});

    nlohmann::json j = to_json(r);
    Report back = report_from_json(j);
    CHECK(to_json(back) == j);

    CHECK(j["summary"]["total"] == 2);
    CHECK(j["summary"]["passed"] == 1);
    CHECK(j["summary"]["failed"] == 1);

    // byte determinism modulo the wall-time fields
    Report r2 = r;
    for (auto& e : r2.entries) e.wall_ms = 99.0;
    nlohmann::json j1 = to_json(r), j2 = to_json(r2);
    for (auto& e : j1["entries"]) e.erase("wall_ms");
    for (auto& e : j2["entries"]) e.erase("wall_ms");
    CHECK(j1.dump() == j2.dump());

    std::string text = to_text(r);
    CHECK(text.find("FAIL") != std::string::npos);
    CHECK(text.find("1/2 passed") != std::string::npos);
}
