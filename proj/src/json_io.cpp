#include "pwc/json_io.hpp"

#include <fstream>
#include <sstream>

namespace pwc {

namespace {

[[noreturn]] void bad_field(const std::string& where, const std::string& why) {
  throw PwcError(Errc::precondition_failed, where + ": " + why);
}

Rational require_rational(const Json& node, const std::string& where) {
  if (!node.is_string()) bad_field(where, "expected a \"p/q\" string");
  auto parsed = parse_rational(node.get<std::string>());
  if (!parsed) bad_field(where, "malformed rational '" + node.get<std::string>() + "'");
  return *parsed;
}

bool require_bool(const Json& node, const std::string& where) {
  if (!node.is_boolean()) bad_field(where, "expected a boolean");
  return node.get<bool>();
}

const Json& require_key(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) bad_field(where, "missing field '" + key + "'");
  return obj.at(key);
}

Json parse_document(const std::string& text, const std::string& what) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw PwcError(Errc::precondition_failed, what + ": not valid JSON");
  return doc;
}

}  // namespace

MapSpec parse_map_spec(const std::string& text) {
  Json doc = parse_document(text, "map spec");
  MapSpec spec;
  spec.name = doc.value("name", "");
  spec.notes = doc.value("notes", "");

  const Json& breaks = require_key(doc, "breakpoints", "map spec");
  const Json& pieces = require_key(doc, "pieces", "map spec");
  if (!breaks.is_array() || !pieces.is_array() || breaks.size() != pieces.size() + 1)
    bad_field("map spec", "need n pieces and n+1 breakpoints");
  if (pieces.empty()) bad_field("map spec", "need at least one piece");

  std::vector<Rational> xs;
  for (std::size_t i = 0; i < breaks.size(); ++i)
    xs.push_back(require_rational(breaks[i], "breakpoints[" + std::to_string(i) + "]"));
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string where = "pieces[" + std::to_string(i) + "]";
    const Json& p = pieces[i];
    Rational slope = require_rational(require_key(p, "slope", where), where + ".slope");
    Rational intercept = require_rational(require_key(p, "intercept", where), where + ".intercept");
    bool lo_closed = require_bool(require_key(p, "lo_closed", where), where + ".lo_closed");
    bool hi_closed = require_bool(require_key(p, "hi_closed", where), where + ".hi_closed");
    if (!(xs[i] < xs[i + 1])) bad_field(where, "breakpoints are not strictly increasing");
    spec.pieces.push_back(
        {std::move(slope), std::move(intercept), {xs[i], xs[i + 1], lo_closed, hi_closed}});
  }
  return spec;
}

std::string serialize_map_spec(const MapSpec& spec) {
  Json doc;
  doc["name"] = spec.name;
  doc["notes"] = spec.notes;
  Json breaks = Json::array();
  breaks.push_back(to_fraction_string(spec.pieces.front().domain.lo));
  for (const auto& p : spec.pieces) breaks.push_back(to_fraction_string(p.domain.hi));
  doc["breakpoints"] = std::move(breaks);
  Json pieces = Json::array();
  for (const auto& p : spec.pieces) {
    Json piece;
    piece["slope"] = to_fraction_string(p.slope);
    piece["intercept"] = to_fraction_string(p.intercept);
    piece["lo_closed"] = p.domain.lo_closed;
    piece["hi_closed"] = p.domain.hi_closed;
    pieces.push_back(std::move(piece));
  }
  doc["pieces"] = std::move(pieces);
  return doc.dump(2) + "\n";
}

SceneSpec parse_scene_spec(const std::string& text) {
  Json doc = parse_document(text, "scene spec");
  SceneSpec spec;
  spec.name = doc.value("name", "");
  spec.notes = doc.value("notes", "");

  const Json& vertices = require_key(doc, "vertices", "scene spec");
  if (!vertices.is_array() || vertices.size() < 3)
    bad_field("scene spec", "need at least 3 vertices");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string where = "vertices[" + std::to_string(i) + "]";
    if (!vertices[i].is_array() || vertices[i].size() != 2) bad_field(where, "expected [x, y]");
    spec.scene.vertices.push_back({require_rational(vertices[i][0], where + ".x"),
                                   require_rational(vertices[i][1], where + ".y")});
  }
  const Json& fields = require_key(doc, "fields", "scene spec");
  if (!fields.is_array()) bad_field("scene spec", "'fields' must be an array");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string where = "fields[" + std::to_string(i) + "]";
    const Json& f = fields[i];
    const Json& edge = require_key(f, "edge", where);
    if (!edge.is_number_unsigned()) bad_field(where + ".edge", "expected an edge index");
    Rational lo = require_rational(require_key(f, "arc_lo", where), where + ".arc_lo");
    Rational hi = require_rational(require_key(f, "arc_hi", where), where + ".arc_hi");
    bool lo_closed = require_bool(require_key(f, "lo_closed", where), where + ".lo_closed");
    bool hi_closed = require_bool(require_key(f, "hi_closed", where), where + ".hi_closed");
    const Json& dir = require_key(f, "direction", where);
    if (!dir.is_array() || dir.size() != 2) bad_field(where + ".direction", "expected [x, y]");
    if (!(lo < hi)) bad_field(where, "arc endpoints are not increasing");
    spec.scene.fields.push_back({edge.get<std::size_t>(),
                                 {std::move(lo), std::move(hi), lo_closed, hi_closed},
                                 {require_rational(dir[0], where + ".direction.x"),
                                  require_rational(dir[1], where + ".direction.y")}});
  }
  return spec;
}

std::string serialize_scene_spec(const SceneSpec& spec) {
  Json doc;
  doc["name"] = spec.name;
  doc["notes"] = spec.notes;
  Json vertices = Json::array();
  for (const auto& v : spec.scene.vertices)
    vertices.push_back(Json::array({to_fraction_string(v.x), to_fraction_string(v.y)}));
  doc["vertices"] = std::move(vertices);
  Json fields = Json::array();
  for (const auto& f : spec.scene.fields) {
    Json node;
    node["edge"] = f.edge;
    node["arc_lo"] = to_fraction_string(f.arc.lo);
    node["arc_hi"] = to_fraction_string(f.arc.hi);
    node["lo_closed"] = f.arc.lo_closed;
    node["hi_closed"] = f.arc.hi_closed;
    node["direction"] = Json::array(
        {to_fraction_string(f.direction.x), to_fraction_string(f.direction.y)});
    fields.push_back(std::move(node));
  }
  doc["fields"] = std::move(fields);
  return doc.dump(2) + "\n";
}

Json json_rational(const Rational& x) { return to_fraction_string(x); }

Json json_interval(const SidedInterval& J) {
  Json node;
  node["lo"] = to_fraction_string(J.lo);
  node["hi"] = to_fraction_string(J.hi);
  node["lo_closed"] = J.lo_closed;
  node["hi_closed"] = J.hi_closed;
  return node;
}

Json json_interval_list(const IntervalList& parts) {
  Json arr = Json::array();
  for (const auto& J : parts) arr.push_back(json_interval(J));
  return arr;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PwcError(Errc::precondition_failed, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PwcError(Errc::precondition_failed, "cannot write " + path);
  out << content;
}

}  // namespace pwc
