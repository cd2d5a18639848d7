// mochon-forge: command-line front end for ladder generation, game/TIPG
// verification, compilation to sequential games, protocol emission and
// certification, extraction, honest simulation, resource reporting, and
// diagnostic SVG rendering.
//
// Exit codes: 0 success, 1 verification failure, 2 malformed input or
// infeasible parameters (with a machine-readable error JSON on stderr).

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mforge/json_io.hpp"
#include "mforge/ladder.hpp"
#include "mforge/compiler.hpp"
#include "mforge/protocol.hpp"

namespace {

using namespace mforge;

void emit_error(const std::string& type, const std::string& message) {
    Json e;
    e["error"] = {{"type", type}, {"message", message}};
    std::cerr << e.dump() << '\n';
}

void write_or_print(const std::string& path, const Json& j) {
    if (path.empty())
        std::cout << j.dump(2) << '\n';
    else
        save_json(path, j);
}

// ---- ladder -------------------------------------------------------------

struct LadderArgs {
    int k = 1;
    std::string omega, out, report;
    long gamma = 0, zeta = -1;
    bool search = false;
};

int run_ladder(const LadderArgs& a) {
    const Rational omega = parse_rational(a.omega);
    long zeta = a.zeta;
    Rational alpha;
    if (a.search) {
        auto [z, al] = find_min_alpha(a.k, omega, a.gamma);
        zeta = z;
        alpha = al;
    } else {
        if (zeta < 0) throw std::invalid_argument("need --zeta or --search-alpha");
        alpha = Rational(zeta) * omega;
    }
    LadderParams p = LadderParams::make(a.k, omega, a.gamma, zeta);
    Tipg t = build_tipg(p);
    if (!a.out.empty()) save_json(a.out, tipg_to_json(t));
    Json rep;
    rep["format"] = 1;
    rep["k"] = a.k;
    rep["omega"] = to_string(omega);
    rep["gamma"] = a.gamma;
    rep["zeta"] = zeta;
    rep["alpha_min"] = to_string(alpha);
    rep["C"] = to_string(p.C);
    rep["rung_count"] = a.gamma - zeta + 1;
    rep["support_size"] = t.h.size() + t.v.size();
    write_or_print(a.report, rep);
    return 0;
}

// ---- render -------------------------------------------------------------

void render_frame(const SupportFunction2D& f, const Rational& span,
                  const std::string& path) {
    constexpr std::size_t kMaxPoints = 10000;
    std::vector<std::pair<Point2D, Rational>> pts(f.entries().begin(),
                                                  f.entries().end());
    if (pts.size() > kMaxPoints) {
        // Keep axis points and extremal rungs; thin the interior evenly.
        std::vector<std::pair<Point2D, Rational>> kept;
        std::size_t interior = 0;
        for (const auto& e : pts)
            if (!(e.first.x == 0 || e.first.y == 0)) ++interior;
        const std::size_t stride = interior / kMaxPoints + 1;
        std::size_t i = 0;
        for (const auto& e : pts) {
            if (e.first.x == 0 || e.first.y == 0 || i % stride == 0)
                kept.push_back(e);
            if (!(e.first.x == 0 || e.first.y == 0)) ++i;
        }
        pts = std::move(kept);
    }
    const double s = std::max(1e-12, to_double(span));
    double wmax = 1e-300;
    for (const auto& e : pts) wmax = std::max(wmax, std::abs(to_double(e.second)));
    std::ofstream out(path);
    if (!out) throw MalformedInput("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" "
           "height=\"600\" viewBox=\"0 0 600 600\">\n"
        << "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n"
        << "<line x1=\"40\" y1=\"560\" x2=\"580\" y2=\"560\" stroke=\"black\"/>\n"
        << "<line x1=\"40\" y1=\"560\" x2=\"40\" y2=\"20\" stroke=\"black\"/>\n";
    for (const auto& [p, w] : pts) {
        const double cx = 40 + 540 * to_double(p.x) / s;
        const double cy = 560 - 540 * to_double(p.y) / s;
        const double wd = to_double(w);
        const double r = 1.5 + 4.5 * std::sqrt(std::abs(wd) / wmax);
        out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r
            << "\" fill=\"" << (wd >= 0 ? "steelblue" : "crimson")
            << "\" fill-opacity=\"0.7\"/>\n";
    }
    out << "</svg>\n";
}

int run_render(const std::string& in, const std::string& prefix) {
    PointGame g = game_from_json(load_json(in));
    Rational span;
    for (const auto& f : g.frames)
        for (const auto& [p, w] : f.entries()) {
            (void)w;
            span = std::max(span, std::max(p.x, p.y));
        }
    const auto parent = std::filesystem::path(prefix).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    for (std::size_t i = 0; i < g.frames.size(); ++i) {
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "_%04zu.svg", i);
        render_frame(g.frames[i], span, prefix + suffix);
    }
    return 0;
}

// ---- main ---------------------------------------------------------------

int run(int argc, char** argv) {
    CLI::App app{"Exact point-game toolkit for weak coin flipping"};
    app.require_subcommand(1);

    LadderArgs la;
    auto* ladder = app.add_subcommand("ladder", "Generate a ladder TIPG");
    ladder->add_option("--k", la.k, "Ladder width")->required();
    ladder->add_option("--omega", la.omega, "Grid step p/q")->required();
    ladder->add_option("--gamma", la.gamma, "Top grid index")->required();
    ladder->add_option("--zeta", la.zeta, "Final-point grid index");
    ladder->add_flag("--search-alpha", la.search, "Search the minimal alpha");
    ladder->add_option("-o,--out", la.out, "TIPG output path");
    ladder->add_option("--report", la.report, "Parameter report path");

    std::string in, out, report, epsilon;
    double tol = 1e-9, cluster_tol = 1e-7;
    long den_bound = 1000000;
    bool strict = false;

    auto* verify = app.add_subcommand("verify", "Verify a sequential game");
    verify->add_option("input", in, "game.json")->required();
    verify->add_option("-o,--out", out, "Report output path");

    auto* vtipg = app.add_subcommand("verify-tipg", "Verify a TIPG");
    vtipg->add_option("input", in, "tipg.json")->required();
    vtipg->add_option("-o,--out", out, "Report output path");

    auto* compile = app.add_subcommand("compile", "TIPG -> sequential game");
    compile->add_option("input", in, "tipg.json")->required();
    compile->add_option("--epsilon", epsilon, "Final-point slack p/q")->required();
    compile->add_option("-o,--out", out, "game.json output path")->required();
    compile->add_option("--report", report, "Compiler plan output path");
    compile->add_flag("--strict", strict, "Apply the strictness shift");

    auto* emit = app.add_subcommand("emit", "Game -> protocol description");
    emit->add_option("input", in, "game.json")->required();
    emit->add_option("-o,--out", out, "protocol.json output path")->required();

    auto* vproto = app.add_subcommand("verify-protocol",
                                      "Check the dual certificate");
    vproto->add_option("input", in, "protocol.json")->required();
    vproto->add_option("--tol", tol, "Feasibility tolerance");
    vproto->add_option("-o,--out", out, "Report output path");

    auto* extract = app.add_subcommand("extract", "Protocol -> point game");
    extract->add_option("input", in, "protocol.json")->required();
    extract->add_option("-o,--out", out, "game.json output path")->required();
    extract->add_option("--cluster-tol", cluster_tol, "Eigenvalue cluster tol");
    extract->add_option("--den-bound", den_bound, "Rational snap denominator");

    auto* simulate = app.add_subcommand("simulate", "Run the honest strategy");
    simulate->add_option("input", in, "protocol.json")->required();
    simulate->add_option("-o,--out", out, "Report output path");

    auto* resource = app.add_subcommand("report", "Resource accounting");
    resource->add_option("input", in, "game.json")->required();
    resource->add_option("-o,--out", out, "Report output path");

    std::string prefix = "frames/frame";
    auto* render = app.add_subcommand("render", "SVG per frame (diagnostic)");
    render->add_option("input", in, "game.json")->required();
    render->add_option("-o,--out", prefix, "Output path prefix");

    CLI11_PARSE(app, argc, argv);

    if (ladder->parsed()) return run_ladder(la);
    if (verify->parsed()) {
        GameReport r = check_point_game(game_from_json(load_json(in)));
        write_or_print(out, game_report_to_json(r));
        return (r.structure_ok && r.all_valid) ? 0 : 1;
    }
    if (vtipg->parsed()) {
        TipgReport r = check_tipg(tipg_from_json(load_json(in)));
        write_or_print(out, tipg_report_to_json(r));
        return r.ok() ? 0 : 1;
    }
    if (compile->parsed()) {
        Tipg t = tipg_from_json(load_json(in));
        const Rational eps = parse_rational(epsilon);
        auto [g, plan] = tipg_to_sequential(t, eps);
        if (strict) g = shift_to_strict(g, eps);
        save_json(out, game_to_json(g));
        if (!report.empty()) save_json(report, plan_to_json(plan));
        return 0;
    }
    if (emit->parsed()) {
        ProtocolDescription p = emit_protocol(game_from_json(load_json(in)));
        save_json(out, protocol_to_json(p));
        return 0;
    }
    if (vproto->parsed()) {
        DualReport r =
            verify_dual_feasibility(protocol_from_json(load_json(in)), tol);
        write_or_print(out, dual_report_to_json(r));
        return r.ok ? 0 : 1;
    }
    if (extract->parsed()) {
        PointGame g = extract_point_game(protocol_from_json(load_json(in)),
                                         cluster_tol, den_bound);
        save_json(out, game_to_json(g));
        return 0;
    }
    if (simulate->parsed()) {
        HonestRun r = simulate_honest(protocol_from_json(load_json(in)));
        write_or_print(out, honest_run_to_json(r));
        return (r.replay_residual < 1e-6 && r.correctness_residual < 1e-6) ? 0
                                                                           : 1;
    }
    if (resource->parsed()) {
        ResourceReport r = resource_report(game_from_json(load_json(in)));
        write_or_print(out, resource_report_to_json(r));
        return 0;
    }
    if (render->parsed()) return run_render(in, prefix);
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mforge::MalformedInput& e) {
        emit_error("malformed_input", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        emit_error("invalid_argument", e.what());
        return 2;
    } catch (const std::exception& e) {
        emit_error("error", e.what());
        return 2;
    }
}
