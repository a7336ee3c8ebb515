#include "glhat/report.hpp"
#include "glhat/surjectivity.hpp"
#include "glhat/textio.hpp"
#include "glhat/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

using namespace glhat;

namespace {

struct CommonOpts {
    int m = 3;
    int n = 2;
    std::string format = "text";
    std::string out_path;
    std::string dump_path;
    std::string eps1, eps2, alpha;

    std::map<Var, Rat> bindings() const {
        std::map<Var, Rat> b;
        if (!eps1.empty()) b[Var::Eps1] = rat_from_string(eps1);
        if (!eps2.empty()) b[Var::Eps2] = rat_from_string(eps2);
        if (!alpha.empty()) b[Var::Alpha] = rat_from_string(alpha);
        return b;
    }
    std::optional<Rat> eps1_binding() const {
        if (eps1.empty()) return std::nullopt;
        return rat_from_string(eps1);
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--m", o.m, "even block size m (>= 2)");
    cmd->add_option("--n", o.n, "odd block size n (>= 2, n != m)");
    cmd->add_option("--format", o.format, "output format: text | json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--out", o.out_path, "write the report to this path");
    cmd->add_option("--eps1", o.eps1, "bind eps1 to a rational (p or p/q)");
    cmd->add_option("--eps2", o.eps2, "bind eps2 to a rational");
    cmd->add_option("--alpha", o.alpha, "bind alpha to a rational");
}

int emit(const Report& report, const CommonOpts& o) {
    std::string body =
        o.format == "json" ? to_json(report).dump(2) + "\n" : to_text(report);
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path);
        f << body;
    } else {
        std::cout << body;
    }
    return report.all_passed() ? 0 : 1;
}

nlohmann::json config_echo(const CommonOpts& o) {
    nlohmann::json c;
    c["m"] = o.m;
    c["n"] = o.n;
    if (!o.eps1.empty()) c["eps1"] = o.eps1;
    if (!o.eps2.empty()) c["eps2"] = o.eps2;
    if (!o.alpha.empty()) c["alpha"] = o.alpha;
    return c;
}

double ms_since(const std::chrono::steady_clock::time_point& t) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t)
        .count();
}

int cmd_verify_relations(const CommonOpts& o, const std::string& mode, int window, int smax,
                         const std::string& only, const std::string& skip) {
    RankData ctx(o.m, o.n);
    auto parse_ids = [](const std::string& csv) {
        std::set<std::string> ids;
        std::stringstream ss(csv);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) ids.insert(item);
        return ids;
    };
    std::set<std::string> only_ids = parse_ids(only);
    std::set<std::string> skip_ids = parse_ids(skip);

    Assignment asg = evaluation_assignment(ctx);
    std::vector<Relation> rels;
    for (auto& rel : minimal_relations(ctx)) {
        if (!only_ids.empty() && !only_ids.count(rel.id)) continue;
        if (skip_ids.count(rel.id)) continue;
        rels.push_back(std::move(rel));
    }

    std::vector<ReportEntry> entries(rels.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t k = next.fetch_add(1);
            if (k >= rels.size()) return;
            const Relation& rel = rels[k];
            ReportEntry e;
            e.id = rel.id;
            e.anchor = rel.anchor;
            e.instance = rel.instance;
            auto tic = std::chrono::steady_clock::now();
            try {
                Verdict v = mode == "symbolic"
                                ? evaluate_relation_symbolic(ctx, rel, asg)
                                : evaluate_relation_truncated(ctx, rel, asg,
                                                              TruncSpec{window, smax});
                e.verdict = v.holds ? "holds" : "fails";
                e.counterexample = v.counterexample;
            } catch (const UnsupportedShape& ex) {
                e.verdict = "error";
                e.counterexample = ex.what();
            }
            e.wall_ms = ms_since(tic);
            entries[k] = std::move(e);
        }
    };
    unsigned nw = std::max(1u, std::thread::hardware_concurrency());
    nw = std::min<unsigned>(nw, 8);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w + 1 < nw; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    Report report;
    report.command = "verify-relations";
    report.config = config_echo(o);
    report.config["mode"] = mode;
    if (mode == "truncated") {
        report.config["window"] = window;
        if (smax > 0) report.config["smax"] = smax;
    }
    if (!only.empty()) report.config["only"] = only;
    if (!skip.empty()) report.config["skip"] = skip;
    report.entries = std::move(entries);
    return emit(report, o);
}

int cmd_check_identity(const CommonOpts& o, const std::string& which, int node, long a, int term) {
    RankData ctx(o.m, o.n);
    Report report;
    report.command = "check-identity " + which;
    report.config = config_echo(o);
    std::ostringstream dump;

    auto tic = std::chrono::steady_clock::now();
    if (which == "t0") {
        T0Result r = t0_identity(ctx);
        ReportEntry e;
        e.id = "t0";
        e.anchor = "Theorem 3.1";
        e.verdict = r.holds ? "holds" : "fails";
        if (!r.holds) e.counterexample = r.diff.to_string();
        e.wall_ms = ms_since(tic);
        report.entries.push_back(e);
        report.entries.push_back({"t0.cancellation-1+3", "Theorem 3.1 proof", "",
                                  r.groups946_ok ? "holds" : "fails", "", 0.0});
        report.entries.push_back({"t0.cancellation-2+4", "Theorem 3.1 proof", "",
                                  r.groups947_ok ? "holds" : "fails", "", 0.0});
        dump << "# lhs (canonical)\n" << to_text(ctx, r.lhs) << "# rhs\n"
             << to_text(ctx, r.rhs);
    } else if (which == "thm33") {
        report.config["i"] = node;
        report.config["a"] = a;
        DiagCommutator r = h1_diag_commutator(ctx, node, a);
        ReportEntry e;
        e.id = "thm33";
        e.anchor = "Theorem 3.3";
        e.instance = "i=" + std::to_string(node) + ",a=" + std::to_string(a);
        bool ok = r.central_matches_formula && r.sl_ok && r.no_z_terms;
        e.verdict = ok ? "holds" : "fails";
        if (!ok)
            e.counterexample = std::string(r.central_matches_formula ? "" : "[central] ") +
                               (r.sl_ok ? "" : "[sl-membership] ") +
                               (r.no_z_terms ? "" : "[z-term] ");
        e.wall_ms = ms_since(tic);
        report.entries.push_back(e);
        dump << "# central part\n" << to_text(ctx, r.central_part) << "# sl part\n"
             << to_text(ctx, r.sl_part);
    } else if (which == "claim1") {
        report.config["i"] = node;
        report.config["a"] = a;
        report.config["term"] = term;
        Claim1Term r = claim1_terms(ctx, node, a, term);
        ReportEntry e;
        e.id = "claim1.term" + std::to_string(term);
        e.anchor = "Claim 1";
        e.instance = "i=" + std::to_string(node) + ",a=" + std::to_string(a);
        bool ok = r.matches && r.central_matches;
        e.verdict = ok ? "holds" : "fails";
        if (!r.matches) e.counterexample = "display mismatch";
        if (!r.central_matches) e.counterexample += " central-extraction mismatch";
        e.wall_ms = ms_since(tic);
        report.entries.push_back(e);
        dump << "# computed\n" << to_text(ctx, r.computed) << "# display\n"
             << to_text(ctx, r.display);
    } else {
        std::cerr << "unknown identity: " << which << "\n";
        return 2;
    }
    if (!o.dump_path.empty()) {
        std::ofstream f(o.dump_path);
        f << dump.str();
    }
    return emit(report, o);
}

int cmd_witness(const CommonOpts& o, int row, long a, int window) {
    RankData ctx(o.m, o.n);
    Report report;
    report.command = "witness";
    report.config = config_echo(o);
    report.config["row"] = row;
    report.config["a"] = a;

    auto tic = std::chrono::steady_clock::now();
    DensityReport rep = density_report(ctx, window, o.eps1_binding());
    const DensityEntry* found = nullptr;
    for (const auto& e : rep.entries)
        if (e.row == row && e.mode == a) found = &e;
    ReportEntry e;
    e.id = "witness";
    e.anchor = "Corollaries 3.2/3.5";
    e.instance = "target=E(" + std::to_string(row) + "," + std::to_string(row) + "|" +
                 std::to_string(a) + ")";
    if (!found) {
        e.verdict = "error";
        e.counterexample = "target outside window " + std::to_string(window);
    } else {
        e.verdict = found->verified ? "holds" : "fails";
        e.counterexample = found->verified ? "" : found->description;
        e.instance += ",rule=" + found->rule;
    }
    e.wall_ms = ms_since(tic);
    report.entries.push_back(e);
    return emit(report, o);
}

int cmd_density(const CommonOpts& o, int window) {
    RankData ctx(o.m, o.n);
    Report report;
    report.command = "density-report";
    report.config = config_echo(o);
    report.config["window"] = window;
    auto tic = std::chrono::steady_clock::now();
    DensityReport rep = density_report(ctx, window, o.eps1_binding());
    double total = ms_since(tic);
    for (const auto& d : rep.entries) {
        ReportEntry e;
        e.id = "density.E(" + std::to_string(d.row) + "," + std::to_string(d.row) + "|" +
               std::to_string(d.mode) + ")";
        e.anchor = "Corollary 3.5";
        e.instance = "rule=" + d.rule;
        e.verdict = d.verified ? "holds" : "fails";
        if (!d.verified) e.counterexample = d.description;
        e.wall_ms = total / rep.entries.size();
        report.entries.push_back(e);
    }
    report.config["smax"] = rep.s_max_used;
    return emit(report, o);
}

int cmd_dump_image(const CommonOpts& o, const std::string& gen, int node, int level) {
    RankData ctx(o.m, o.n);
    CompletionElement img;
    if (gen == "htilde") {
        img = ev_htilde1(ctx, node);
    } else if (gen == "h" && level == 1) {
        img = canonicalize(ctx, ev_h1(ctx, node));
    } else if (level == 0) {
        GenKind k = gen == "x+" ? GenKind::XPlus : gen == "x-" ? GenKind::XMinus : GenKind::H;
        img = CompletionElement::from_algebra(ev_level0(ctx, node, k));
    } else {
        Assignment asg = evaluation_assignment(ctx);
        YGen g{gen == "x+" ? YGen::Kind::XPlus : YGen::Kind::XMinus, node, level};
        img = asg.at(g);
    }
    img = specialize_scalars(ctx, img, o.bindings());
    std::string body = to_text(ctx, img);
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path);
        f << body;
    } else {
        std::cout << body;
    }
    return 0;
}

// Loads the JSON config and appends each key as a trailing flag unless the
// command line already carries it (flags win on conflict).
std::vector<std::string> inject_config(const std::vector<std::string>& args) {
    std::string path;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            ++i;
            continue;
        }
        out.push_back(args[i]);
    }
    if (path.empty()) return out;
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j = nlohmann::json::parse(f);
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string flag = "--" + it.key();
        bool present = false;
        for (const auto& a : out)
            if (a == flag) present = true;
        if (present) continue;
        out.push_back(flag);
        out.push_back(it.value().is_string() ? it.value().get<std::string>()
                                             : it.value().dump());
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic engine for the completed enveloping algebra of gl-hat(m|n)"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.footer("A JSON config file may supply any long option via --config <path>; "
               "explicit flags win on conflict.");

    CommonOpts vo, co, wo, dn, du;
    std::string mode = "symbolic", only, skip;
    int window = 4, smax = 0;
    auto* verify = app.add_subcommand("verify-relations",
                                      "check the minimalistic presentation on the ev images");
    add_common(verify, vo);
    verify->add_option("--mode", mode, "symbolic | truncated")
        ->check(CLI::IsMember({"symbolic", "truncated"}));
    verify->add_option("--window", window, "truncation window N");
    verify->add_option("--smax", smax, "tail expansion bound (0 = derive from guard band)");
    verify->add_option("--only", only, "comma-separated relation ids to include");
    verify->add_option("--skip", skip, "comma-separated relation ids to exclude");

    std::string identity = "t0";
    int inode = 1, iterm = 3;
    long imode_a = 1;
    auto* check = app.add_subcommand("check-identity", "verify a surjectivity identity");
    check->add_option("identity", identity, "t0 | thm33 | claim1")->required();
    add_common(check, co);
    check->add_option("--i", inode, "node index");
    check->add_option("--a", imode_a, "loop mode a");
    check->add_option("--term", iterm, "claim1 term selector (3..6)");
    check->add_option("--dump", co.dump_path, "write both sides' canonical forms to this path");

    int wrow = 5, wwin = 2;
    long wa = 0;
    auto* wit = app.add_subcommand("witness", "build one density witness");
    add_common(wit, wo);
    wit->add_option("--row", wrow, "diagonal index j of the target E_{j,j}(a)");
    wit->add_option("--a", wa, "loop mode a of the target");
    wit->add_option("--window", wwin, "verification window");

    int dwin = 2;
    auto* dens = app.add_subcommand("density-report", "witnesses for all windowed diagonals");
    add_common(dens, dn);
    dens->add_option("--window", dwin, "mode window N (<= 4)");

    std::string ggen = "h";
    int gnode = 1, glevel = 1;
    auto* dump = app.add_subcommand("dump-image", "print an evaluation image");
    add_common(dump, du);
    dump->add_option("--gen", ggen, "x+ | x- | h | htilde")
        ->check(CLI::IsMember({"x+", "x-", "h", "htilde"}));
    dump->add_option("--i", gnode, "node index");
    dump->add_option("--r", glevel, "level (0 or 1)");

    try {
        std::vector<std::string> raw(argv + 1, argv + argc);
        std::vector<std::string> args = inject_config(raw);
        // CLI11 consumes the argument list in reverse
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
        if (verify->parsed()) return cmd_verify_relations(vo, mode, window, smax, only, skip);
        if (check->parsed()) return cmd_check_identity(co, identity, inode, imode_a, iterm);
        if (wit->parsed()) return cmd_witness(wo, wrow, wa, wwin);
        if (dens->parsed()) return cmd_density(dn, dwin);
        if (dump->parsed()) return cmd_dump_image(du, ggen, gnode, glevel);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const DegenerateCentralCharge& e) {
        std::cerr << "error: degenerate central charge: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what()
                  << " (the construction requires m, n >= 2 and m != n)\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
