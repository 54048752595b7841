#pragma once
/**
 * @file report.hpp
 * @brief JSON encoding of every report type, input parsers, and the report schema.
 *
 * Conventions: field elements are their canonical index, points are [x, y],
 * slopes are an integer index or "inf", rationals are "num/den" strings.
 * Every report is wrapped in an envelope carrying the schema version, the
 * library version, q, and provenance (command line, seed).
 */

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kakeyalab/collinear.hpp"
#include "kakeyalab/kakeya.hpp"
#include "kakeyalab/permgraph.hpp"
#include "kakeyalab/search.hpp"

#ifndef KAKEYALAB_VERSION
#define KAKEYALAB_VERSION "1.0.0"
#endif

namespace kakeyalab {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = KAKEYALAB_VERSION;

// ---- primitives -------------------------------------------------------------

inline json to_json(const Point& p) { return json::array({p.x.v, p.y.v}); }

inline json slope_json(int slope_idx, int q) {
  return slope_idx == q ? json("inf") : json(slope_idx);
}

inline json slope_json(const Slope& s, int q) { return slope_json(slope_index(s, q), q); }

inline int parse_slope(const json& j, int q) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return q;
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used == s.size() && v >= 0 && v < q) return v;
    } catch (const std::exception&) {
    }
    throw FormatError("bad slope '" + s + "'");
  }
  if (j.is_number_integer()) {
    const int v = j.get<int>();
    if (v >= 0 && v < q) return v;
  }
  throw FormatError("bad slope " + j.dump());
}

inline json points_json(const PointSet& s) {
  json a = json::array();
  for (const auto& p : s) a.push_back(to_json(p));
  return a;
}

inline json points_json(const std::vector<Point>& v) {
  json a = json::array();
  for (const auto& p : v) a.push_back(to_json(p));
  return a;
}

inline Point parse_point(const json& j, int q) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw FormatError("point must be [x, y], got " + j.dump());
  const int x = j[0].get<int>(), y = j[1].get<int>();
  if (x < 0 || x >= q || y < 0 || y >= q) throw FormatError("point " + j.dump() + " outside the plane");
  return {Elem{static_cast<std::uint16_t>(x)}, Elem{static_cast<std::uint16_t>(y)}};
}

// ---- input formats ------------------------------------------------------------

/// A function table: one JSON array, or whitespace-separated integers.
inline std::vector<int> parse_function_table(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::vector<int> out;
  if (i < text.size() && text[i] == '[') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw FormatError(std::string("function table: ") + e.what());
    }
    if (!j.is_array()) throw FormatError("function table must be an array");
    for (const auto& v : j) {
      if (!v.is_number_integer()) throw FormatError("function table entries must be integers");
      out.push_back(v.get<int>());
    }
    return out;
  }
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw FormatError("");
    } catch (const std::exception&) {
      throw FormatError("function table: bad entry '" + tok + "'");
    }
  }
  if (out.empty()) throw FormatError("function table is empty");
  return out;
}

inline json function_table_json(const std::vector<int>& t) { return json(t); }

/// Cover file: {"inf": key, "0": key, ...}. Returns slope index -> key.
inline std::map<int, int> parse_cover_json(const json& j, int q) {
  if (!j.is_object()) throw FormatError("cover must be a JSON object of slope -> key");
  std::map<int, int> out;
  for (const auto& [k, v] : j.items()) {
    const int s = parse_slope(json(k), q);
    if (!v.is_number_integer()) throw FormatError("cover key for slope " + k + " must be an integer");
    out[s] = v.get<int>();
  }
  return out;
}

inline std::map<int, int> parse_cover(const std::string& text, int q) {
  try {
    return parse_cover_json(json::parse(text), q);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("cover file: ") + e.what());
  }
}

/// Keys in slope order: "0", "1", ..., "inf".
inline json cover_json(const BesicovitchCover& c) {
  json o = json::object();
  for (int s = 0; s <= c.q(); ++s) o[s == c.q() ? "inf" : std::to_string(s)] = c.keys()[s].v;
  return o;
}

inline json cover_json(const std::vector<int>& keys) {
  const int q = static_cast<int>(keys.size()) - 1;
  json o = json::object();
  for (int s = 0; s <= q; ++s) o[s == q ? "inf" : std::to_string(s)] = keys[s];
  return o;
}

// ---- report bodies --------------------------------------------------------------

inline json structure_json(const CollinearStructure& cs) {
  json sets = json::array();
  for (const auto& e : cs.maximal_sets())
    sets.push_back({{"slope", slope_json(e.line.slope, cs.q())}, {"key", e.line.key.v}, {"points", points_json(e.points)}});
  json lonely = points_json(lonely_points(cs));
  json iso = json::array();
  for (const auto& t : isolated_edges(cs)) iso.push_back(json::array({to_json(t[0]), to_json(t[1]), to_json(t[2])}));
  return {{"q", cs.q()},
          {"points", points_json(cs.points())},
          {"maximal_sets", sets},
          {"triple_count", cs.triple_count()},
          {"norm", to_string(cs.norm())},
          {"lonely_points", lonely},
          {"isolated_edges", iso}};
}

inline json function_json(const FunctionGraph& g) {
  json o = {{"q", g.field()->q()}, {"table", g.indices()}, {"kind", to_string(g.kind())}};
  if (g.semi()) {
    const auto& d = *g.semi();
    o["semipermutation"] = {{"a", d.a.v}, {"b", d.b.v}, {"z1", d.z1.v}, {"z2", d.z2.v}};
  }
  return o;
}

inline json identity_json(const IdentityReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"identity", x.identity}, {"at", to_json(x.at)}, {"detail", x.detail}});
  return {{"kind", to_string(r.kind)},
          {"checked", r.checked},
          {"violations", v},
          {"s2_orientation", {{"primary", r.s2_primary}, {"swapped", r.s2_swapped}}}};
}

inline json cover_report_json(const BesicovitchCover& c) {
  const auto inc = incidence_size(c);
  json rho = json::object();
  for (int s = 0; s <= c.q(); ++s) rho[s == c.q() ? "inf" : std::to_string(s)] = c.rho(s);
  return {{"q", c.q()},
          {"cover", cover_json(c)},
          {"size", c.size()},
          {"incidence", {{"direct", inc.direct}, {"formula", inc.formula}}},
          {"rho", rho},
          {"R", c.r_min()},
          {"rho_zero_slopes", check_rho_zero(c)},
          {"lower_bound", to_string(besicovitch_lower_bound(c.q()))}};
}

inline json affine_json(const AffineMap& m) {
  return {{"a11", m.a11.v}, {"a12", m.a12.v}, {"a21", m.a21.v}, {"a22", m.a22.v}, {"b1", m.b1.v}, {"b2", m.b2.v}};
}

inline json dualization_json(const Dualization& d) {
  const auto& f = *d.graph.field();
  const auto cs = build_structure(f, d.graph.points());
  return {{"graph", function_json(d.graph)},
          {"R", d.r_min},
          {"minimizer_slope", slope_json(d.minimizer_slope, f.q())},
          {"transform", affine_json(d.transform)},
          {"normalized_cover", cover_json(d.normalized)},
          {"size", d.normalized.size()},
          {"graph_norm", to_string(cs.norm())}};
}

inline json audit_json(const AuditReport& a) {
  json checks = json::array();
  for (const auto& c : a.checks)
    checks.push_back({{"id", c.id}, {"lhs", to_string(c.lhs)}, {"rhs", to_string(c.rhs)}, {"holds", c.holds()}});
  return {{"kind", a.kind}, {"q", a.q}, {"checks", checks}, {"details", a.details}, {"ok", a.ok()}};
}

inline json certificate_json(const ExhaustionCertificate& c) {
  json shards = json::array();
  for (const auto& s : c.shards)
    shards.push_back({{"prefix", s.prefix},
                      {"nodes", s.nodes},
                      {"leaves", s.leaves},
                      {"representatives", s.canonical_leaves},
                      {"covered", s.covered},
                      {"orbit_sum", s.orbit_sum},
                      {"budget_hit", s.budget_hit}});
  json o = {{"group_order", c.group_order},
            {"reduced_space", c.reduced_space},
            {"covered", c.covered()},
            {"shards", shards}};
  o["orbit_total"] = c.orbit_total ? json(*c.orbit_total) : json(nullptr);
  return o;
}

inline json search_json(const SearchReport& r) {
  json o = {{"q", r.q},
            {"objective", r.objective},
            {"value", to_string(r.value)},
            {"witness_kind", r.witness_kind},
            {"witnesses", r.witnesses},
            {"search_space_size", r.search_space_size},
            {"nodes_visited", r.nodes_visited},
            {"exhaustive", r.exhaustive},
            {"budget_exceeded", r.budget_exceeded},
            {"symmetry_group_order", r.symmetry_group_order},
            {"seed", r.seed},
            {"wall_time", r.wall_time},
            {"violations", r.violations},
            {"details", r.details}};
  o["certificate"] = r.certificate ? certificate_json(*r.certificate) : json(nullptr);
  return o;
}

/// Parses the witness list back from a search report body.
inline std::vector<std::vector<int>> parse_witnesses(const json& body) {
  return body.at("witnesses").get<std::vector<std::vector<int>>>();
}

// ---- envelope ---------------------------------------------------------------------

struct Provenance {
  std::vector<std::string> command;
  std::optional<std::uint64_t> seed;
};

inline json envelope(const std::string& type, int q, json result, bool ok, const std::vector<std::string>& violations,
                     const Provenance& prov) {
  json p = {{"command", prov.command}};
  p["seed"] = prov.seed ? json(*prov.seed) : json(nullptr);
  return {{"schema_version", kSchemaVersion},
          {"report_type", type},
          {"version", kVersion},
          {"q", q},
          {"provenance", p},
          {"ok", ok},
          {"violations", violations},
          {"result", std::move(result)}};
}

// ---- schema -------------------------------------------------------------------------

/// JSON Schema (draft 2020-12) for every report envelope, version 1.
inline json report_schema() {
  const json rational = {{"type", "string"}, {"pattern", "^-?[0-9]+/[0-9]+$"}};
  const json point = {{"type", "array"}, {"items", {{"type", "integer"}, {"minimum", 0}}}, {"minItems", 2}, {"maxItems", 2}};
  const json slope = {{"oneOf", json::array({{{"type", "integer"}, {"minimum", 0}}, {{"const", "inf"}}})}};
  const json cover = {{"type", "object"},
                      {"propertyNames", {{"pattern", "^(inf|[0-9]+)$"}}},
                      {"additionalProperties", {{"type", "integer"}, {"minimum", 0}}}};
  const json table = {{"type", "array"}, {"items", {{"type", "integer"}, {"minimum", 0}}}};
  auto obj = [](json props, std::vector<std::string> required) {
    return json{{"type", "object"}, {"properties", std::move(props)}, {"required", std::move(required)}};
  };
  json defs;
  defs["rational"] = rational;
  defs["point"] = point;
  defs["slope"] = slope;
  defs["cover"] = cover;
  defs["table"] = table;
  defs["function"] = obj({{"q", {{"type", "integer"}}},
                          {"table", {{"$ref", "#/$defs/table"}}},
                          {"kind", {{"enum", {"permutation", "semipermutation", "other"}}}}},
                         {"q", "table", "kind"});
  defs["structure"] = obj({{"q", {{"type", "integer"}}},
                           {"points", {{"type", "array"}, {"items", {{"$ref", "#/$defs/point"}}}}},
                           {"maximal_sets",
                            {{"type", "array"},
                             {"items", obj({{"slope", {{"$ref", "#/$defs/slope"}}},
                                            {"points", {{"type", "array"}, {"items", {{"$ref", "#/$defs/point"}}}}}},
                                           {"slope", "points"})}}},
                           {"triple_count", {{"type", "integer"}, {"minimum", 0}}},
                           {"norm", {{"$ref", "#/$defs/rational"}}}},
                          {"q", "points", "maximal_sets", "triple_count", "norm"});
  defs["cover_report"] = obj({{"q", {{"type", "integer"}}},
                              {"cover", {{"$ref", "#/$defs/cover"}}},
                              {"size", {{"type", "integer"}}},
                              {"incidence", obj({{"direct", {{"type", "integer"}}}, {"formula", {{"type", "integer"}}}},
                                                {"direct", "formula"})},
                              {"rho", {{"type", "object"}}},
                              {"R", {{"type", "integer"}}}},
                             {"q", "cover", "size", "incidence", "rho", "R"});
  defs["search"] = obj({{"q", {{"type", "integer"}}},
                        {"objective", {{"type", "string"}}},
                        {"value", {{"$ref", "#/$defs/rational"}}},
                        {"witness_kind", {{"enum", {"function_table", "cover_keys"}}}},
                        {"witnesses", {{"type", "array"}, {"items", {{"$ref", "#/$defs/table"}}}}},
                        {"search_space_size", {{"type", "string"}, {"pattern", "^[0-9]+$"}}},
                        {"nodes_visited", {{"type", "integer"}, {"minimum", 0}}},
                        {"exhaustive", {{"type", "boolean"}}},
                        {"symmetry_group_order", {{"type", "integer"}, {"minimum", 1}}},
                        {"seed", {{"type", "integer"}}},
                        {"wall_time", {{"type", "number"}}},
                        {"certificate",
                         {{"oneOf",
                           json::array({{{"type", "null"}},
                                        obj({{"group_order", {{"type", "integer"}}},
                                             {"shards",
                                              {{"type", "array"},
                                               {"items", obj({{"prefix", {{"type", "array"}}}, {"nodes", {{"type", "integer"}}}},
                                                             {"prefix", "nodes"})}}}},
                                            {"group_order", "shards"})})}}}},
                       {"q", "objective", "value", "witnesses", "search_space_size", "nodes_visited", "exhaustive",
                        "symmetry_group_order", "wall_time"});
  defs["audit"] = obj({{"kind", {{"enum", {"permutation", "semipermutation", "cover"}}}},
                       {"checks",
                        {{"type", "array"},
                         {"items", obj({{"id", {{"type", "string"}}},
                                        {"lhs", {{"$ref", "#/$defs/rational"}}},
                                        {"rhs", {{"$ref", "#/$defs/rational"}}},
                                        {"holds", {{"type", "boolean"}}}},
                                       {"id", "lhs", "rhs", "holds"})}}},
                       {"ok", {{"type", "boolean"}}}},
                      {"kind", "checks", "ok"});
  defs["suite"] = obj({{"checks",
                        {{"type", "array"},
                         {"items", obj({{"id", {{"type", "string"}}}, {"passed", {{"type", "boolean"}}}},
                                       {"id", "passed"})}}}},
                      {"checks"});

  json envelope_schema = obj({{"schema_version", {{"const", kSchemaVersion}}},
                              {"report_type",
                               {{"enum", {"verify", "construct", "dualize", "primalize", "search", "audit", "suite"}}}},
                              {"version", {{"type", "string"}}},
                              {"q", {{"type", "integer"}, {"minimum", 3}}},
                              {"provenance", obj({{"command", {{"type", "array"}, {"items", {{"type", "string"}}}}},
                                                  {"seed", {{"type", {"integer", "null"}}}}},
                                                 {"command", "seed"})},
                              {"ok", {{"type", "boolean"}}},
                              {"violations", {{"type", "array"}, {"items", {{"type", "string"}}}}},
                              {"result", {{"type", "object"}}}},
                             {"schema_version", "report_type", "version", "q", "provenance", "ok", "violations", "result"});
  // Result shape by report type.
  auto when = [](const std::string& type, json result_schema) {
    return json{{"if", {{"properties", {{"report_type", {{"const", type}}}}}}},
                {"then", {{"properties", {{"result", std::move(result_schema)}}}}}};
  };
  envelope_schema["allOf"] = json::array(
      {when("search", {{"$ref", "#/$defs/search"}}),
       when("audit", {{"type", "object"}, {"properties", {{"audits", {{"type", "array"}, {"items", {{"$ref", "#/$defs/audit"}}}}}}}}),
       when("suite", {{"$ref", "#/$defs/suite"}}),
       when("dualize", obj({{"graph", {{"$ref", "#/$defs/function"}}}, {"normalized_cover", {{"$ref", "#/$defs/cover"}}}},
                           {"graph", "normalized_cover", "R"})),
       when("primalize", {{"$ref", "#/$defs/cover_report"}})});
  envelope_schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  envelope_schema["$id"] = "https://kakeyalab.invalid/schema/report-v1.json";
  envelope_schema["title"] = "kakeyalab report, schema version 1";
  envelope_schema["$defs"] = defs;
  return envelope_schema;
}

}  // namespace kakeyalab
