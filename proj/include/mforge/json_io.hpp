#pragma once
// Deterministic JSON serialization for every artifact the CLI reads or
// writes. Rationals serialize as canonical "p/q" strings; insertion-ordered
// objects and the ordered support maps make output byte-stable. Every
// document carries the schema version field "format": 1.

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "mforge/compiler.hpp"
#include "mforge/ladder.hpp"
#include "mforge/point_game.hpp"
#include "mforge/protocol.hpp"
#include "mforge/validity.hpp"

namespace mforge {

using Json = nlohmann::ordered_json;

struct MalformedInput : std::runtime_error {
    explicit MalformedInput(const std::string& what)
        : std::runtime_error(what) {}
};

// Entries as [{"x":"p/q","y":"p/q","w":"p/q"}, ...] in map order.
Json support2d_to_json(const SupportFunction2D& f);
SupportFunction2D support2d_from_json(const Json& j);

// {"format":1, "frames":[...], "orientations":["V","H",...]}
Json game_to_json(const PointGame& g);
PointGame game_from_json(const Json& j);

// {"format":1, "h":[...], "v":[...], "final_point":{...}, "final_weight":...}
Json tipg_to_json(const Tipg& t);
Tipg tipg_from_json(const Json& j);

Json plan_to_json(const CompilerPlan& p);

// Dense row-major float matrices with a dimension header.
Json protocol_to_json(const ProtocolDescription& p);
ProtocolDescription protocol_from_json(const Json& j);

// Reports (write-only).
Json game_report_to_json(const GameReport& r);
Json tipg_report_to_json(const TipgReport& r);
Json dual_report_to_json(const DualReport& r);
Json honest_run_to_json(const HonestRun& r);
Json resource_report_to_json(const ResourceReport& r);

// File helpers. load_json throws MalformedInput on unreadable files or parse
// errors; save_json writes dump(2) plus a trailing newline.
Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);

}  // namespace mforge
