#include "mforge/json_io.hpp"

#include <fstream>

namespace mforge {

namespace {

Rational rat(const Json& j, const char* what) {
    if (!j.is_string() && !j.is_number_integer())
        throw MalformedInput(std::string(what) + ": expected \"p/q\" string");
    if (j.is_number_integer()) return Rational(j.get<long>());
    auto r = try_parse_rational(j.get<std::string>());
    if (!r)
        throw MalformedInput(std::string(what) + ": not a rational: " +
                             j.get<std::string>());
    return *r;
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw MalformedInput(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

void check_format(const Json& j) {
    if (field(j, "format") != 1)
        throw MalformedInput("unsupported format version");
}

Json matrix_to_json(const Matrix& m) {
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    Json data = Json::array();
    for (long r = 0; r < m.rows(); ++r)
        for (long c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    j["data"] = std::move(data);
    return j;
}

Matrix matrix_from_json(const Json& j) {
    const long rows = field(j, "rows").get<long>();
    const long cols = field(j, "cols").get<long>();
    const Json& data = field(j, "data");
    if (!data.is_array() || static_cast<long>(data.size()) != rows * cols)
        throw MalformedInput("matrix data size mismatch");
    Matrix m(rows, cols);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) m(r, c) = data[r * cols + c].get<double>();
    return m;
}

Json vector_to_json(const Vector& v) {
    Json j = Json::array();
    for (long i = 0; i < v.size(); ++i) j.push_back(v(i));
    return j;
}

Vector vector_from_json(const Json& j) {
    if (!j.is_array()) throw MalformedInput("expected array for vector");
    Vector v(static_cast<long>(j.size()));
    for (long i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

const char* orient_str(Orientation o) {
    return o == Orientation::Horizontal ? "H" : "V";
}

Orientation orient_from(const Json& j) {
    const std::string s = j.get<std::string>();
    if (s == "H") return Orientation::Horizontal;
    if (s == "V") return Orientation::Vertical;
    throw MalformedInput("orientation must be \"H\" or \"V\"");
}

Json verdict_to_json(const ValidityVerdict& v) {
    Json j;
    switch (v.status) {
        case Validity::StrictlyValid: j["status"] = "strictly_valid"; break;
        case Validity::Valid: j["status"] = "valid"; break;
        case Validity::Invalid: j["status"] = "invalid"; break;
    }
    if (v.violation) {
        if (const auto* n = std::get_if<NonzeroSum>(&*v.violation)) {
            j["violation"] = {{"kind", "nonzero_sum"},
                              {"total", to_string(n->total)}};
        } else if (const auto* l = std::get_if<LambdaWitness>(&*v.violation)) {
            j["violation"] = {{"kind", "lambda_witness"},
                              {"lambda", to_string(l->lambda)},
                              {"value", to_string(l->value)}};
        } else {
            j["violation"] = {{"kind", "origin_weight"}};
        }
    }
    return j;
}

Json line_verdicts_to_json(const std::vector<LineVerdict>& ls) {
    Json j = Json::array();
    for (const auto& l : ls) {
        Json e;
        e["line"] = to_string(l.line);
        e["verdict"] = verdict_to_json(l.verdict);
        j.push_back(std::move(e));
    }
    return j;
}

}  // namespace

Json support2d_to_json(const SupportFunction2D& f) {
    Json j = Json::array();
    for (const auto& [p, w] : f.entries()) {
        Json e;
        e["x"] = to_string(p.x);
        e["y"] = to_string(p.y);
        e["w"] = to_string(w);
        j.push_back(std::move(e));
    }
    return j;
}

SupportFunction2D support2d_from_json(const Json& j) {
    if (!j.is_array()) throw MalformedInput("support function: expected array");
    SupportFunction2D f;
    for (const auto& e : j)
        f.add(rat(field(e, "x"), "x"), rat(field(e, "y"), "y"),
              rat(field(e, "w"), "w"));
    return f;
}

Json game_to_json(const PointGame& g) {
    Json j;
    j["format"] = 1;
    Json frames = Json::array();
    for (const auto& f : g.frames) frames.push_back(support2d_to_json(f));
    j["frames"] = std::move(frames);
    Json os = Json::array();
    for (auto o : g.orientations) os.push_back(orient_str(o));
    j["orientations"] = std::move(os);
    return j;
}

PointGame game_from_json(const Json& j) {
    check_format(j);
    PointGame g;
    for (const auto& f : field(j, "frames")) g.frames.push_back(support2d_from_json(f));
    for (const auto& o : field(j, "orientations"))
        g.orientations.push_back(orient_from(o));
    if (g.frames.size() != g.orientations.size() + 1)
        throw MalformedInput("need exactly one more frame than orientations");
    return g;
}

Json tipg_to_json(const Tipg& t) {
    Json j;
    j["format"] = 1;
    j["h"] = support2d_to_json(t.h);
    j["v"] = support2d_to_json(t.v);
    j["final_point"] = {{"x", to_string(t.final_point.x)},
                        {"y", to_string(t.final_point.y)}};
    j["final_weight"] = to_string(t.final_weight);
    return j;
}

Tipg tipg_from_json(const Json& j) {
    check_format(j);
    Tipg t;
    t.h = support2d_from_json(field(j, "h"));
    t.v = support2d_from_json(field(j, "v"));
    const Json& fp = field(j, "final_point");
    t.final_point = {rat(field(fp, "x"), "final_point.x"),
                     rat(field(fp, "y"), "final_point.y")};
    t.final_weight = rat(field(j, "final_weight"), "final_weight");
    return t;
}

Json plan_to_json(const CompilerPlan& p) {
    Json j;
    j["format"] = 1;
    j["epsilon"] = to_string(p.epsilon);
    j["gamma"] = to_string(p.gamma);
    j["gamma_prime"] = to_string(p.gamma_prime);
    j["m"] = to_string(p.m);
    j["a"] = to_string(p.a);
    j["b"] = to_string(p.b);
    j["m_x"] = to_string(p.m_x);
    j["m_y"] = to_string(p.m_y);
    j["n_x"] = to_string(p.n_x);
    j["n_y"] = to_string(p.n_y);
    j["delta"] = to_string(p.delta);
    j["delta_prime"] = to_string(p.delta_prime);
    j["loop_count"] = p.loop_count;
    j["transitions"] = p.transitions;
    j["catalyst_degenerate"] = p.catalyst_degenerate;
    return j;
}

Json protocol_to_json(const ProtocolDescription& p) {
    Json j;
    j["format"] = 1;
    Json sa = Json::array(), sb = Json::array();
    for (const auto& v : p.sa) sa.push_back(to_string(v));
    for (const auto& v : p.sb) sb.push_back(to_string(v));
    j["sa"] = std::move(sa);
    j["sb"] = std::move(sb);
    j["lambda_a"] = p.lambda_a;
    j["lambda_b"] = p.lambda_b;
    j["rounds"] = p.rounds;
    j["tol"] = p.tol;
    Json os = Json::array();
    for (auto o : p.round_orientation) os.push_back(orient_str(o));
    j["round_orientation"] = std::move(os);
    Json blocks = Json::array();
    for (const auto& round : p.unitary_blocks) {
        Json bs = Json::array();
        for (const auto& m : round) bs.push_back(matrix_to_json(m));
        blocks.push_back(std::move(bs));
    }
    j["unitary_blocks"] = std::move(blocks);
    Json honest = Json::array();
    for (const auto& v : p.honest) honest.push_back(vector_to_json(v));
    j["honest"] = std::move(honest);
    Json za = Json::array(), zb = Json::array();
    for (const auto& m : p.za) za.push_back(matrix_to_json(m));
    for (const auto& m : p.zb) zb.push_back(matrix_to_json(m));
    j["za"] = std::move(za);
    j["zb"] = std::move(zb);
    return j;
}

ProtocolDescription protocol_from_json(const Json& j) {
    check_format(j);
    ProtocolDescription p;
    for (const auto& v : field(j, "sa")) p.sa.push_back(rat(v, "sa"));
    for (const auto& v : field(j, "sb")) p.sb.push_back(rat(v, "sb"));
    p.lambda_a = field(j, "lambda_a").get<double>();
    p.lambda_b = field(j, "lambda_b").get<double>();
    p.rounds = field(j, "rounds").get<int>();
    p.tol = field(j, "tol").get<double>();
    for (const auto& o : field(j, "round_orientation"))
        p.round_orientation.push_back(orient_from(o));
    for (const auto& round : field(j, "unitary_blocks")) {
        std::vector<Matrix> ms;
        for (const auto& m : round) ms.push_back(matrix_from_json(m));
        p.unitary_blocks.push_back(std::move(ms));
    }
    for (const auto& v : field(j, "honest")) p.honest.push_back(vector_from_json(v));
    for (const auto& m : field(j, "za")) p.za.push_back(matrix_from_json(m));
    for (const auto& m : field(j, "zb")) p.zb.push_back(matrix_from_json(m));
    if (static_cast<int>(p.round_orientation.size()) != p.rounds ||
        static_cast<int>(p.unitary_blocks.size()) != p.rounds ||
        static_cast<int>(p.honest.size()) != p.rounds + 1 ||
        static_cast<int>(p.za.size()) != p.rounds + 1 ||
        static_cast<int>(p.zb.size()) != p.rounds + 1)
        throw MalformedInput("protocol: per-round array length mismatch");
    return p;
}

Json game_report_to_json(const GameReport& r) {
    Json j;
    j["format"] = 1;
    j["structure_ok"] = r.structure_ok;
    j["structural_failures"] = r.structural_failures;
    Json inv = Json::array();
    for (const auto& [i, lv] : r.invalid_lines) {
        Json e;
        e["transition"] = i;
        e["line"] = to_string(lv.line);
        e["verdict"] = verdict_to_json(lv.verdict);
        inv.push_back(std::move(e));
    }
    j["invalid_lines"] = std::move(inv);
    j["all_valid"] = r.all_valid;
    j["all_strictly_valid"] = r.all_strictly_valid;
    j["summary"] = r.summary();
    return j;
}

Json tipg_report_to_json(const TipgReport& r) {
    Json j;
    j["format"] = 1;
    j["identity_ok"] = r.identity_ok;
    if (!r.identity_ok)
        j["identity_residual"] = support2d_to_json(r.identity_residual);
    j["h_valid"] = r.h_valid;
    j["v_valid"] = r.v_valid;
    j["h_failures"] = line_verdicts_to_json(r.h_failures);
    j["v_failures"] = line_verdicts_to_json(r.v_failures);
    j["ok"] = r.ok();
    j["summary"] = r.summary();
    return j;
}

Json dual_report_to_json(const DualReport& r) {
    Json j;
    j["format"] = 1;
    j["ok"] = r.ok;
    j["beta"] = r.beta;
    j["alpha"] = r.alpha;
    j["min_lmi_margin"] = r.min_lmi_margin;
    j["max_equality_gap"] = r.max_equality_gap;
    j["eigvec_residual"] = r.eigvec_residual;
    j["failures"] = r.failures;
    return j;
}

Json honest_run_to_json(const HonestRun& r) {
    Json j;
    j["format"] = 1;
    j["p_a"] = r.p_a;
    j["p_b"] = r.p_b;
    j["correctness_residual"] = r.correctness_residual;
    j["replay_residual"] = r.replay_residual;
    return j;
}

Json resource_report_to_json(const ResourceReport& r) {
    Json j;
    j["format"] = 1;
    j["qubits"] = r.qubits;
    j["rounds"] = r.rounds;
    j["support_a"] = r.support_a;
    j["support_b"] = r.support_b;
    return j;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedInput(path + ": " + e.what());
    }
}

void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw MalformedInput("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace mforge
