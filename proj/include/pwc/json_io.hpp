#pragma once

#include "pwc/billiard.hpp"
#include "pwc/map.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace pwc {

using Json = nlohmann::ordered_json;

/// A map description as stored on disk: breakpoints plus per-piece data, all
/// rationals as "p/q" strings.
struct MapSpec {
  std::string name;
  std::string notes;
  std::vector<AffinePiece> pieces;

  PiecewiseAffineContraction build() const { return PiecewiseAffineContraction(pieces); }
};

/// Parses a map spec document; malformed input raises PreconditionFailed with
/// the offending field named in the message.  Parsing does not validate the
/// dynamics: call build() + validate() for that.
MapSpec parse_map_spec(const std::string& text);

std::string serialize_map_spec(const MapSpec& spec);

struct SceneSpec {
  std::string name;
  std::string notes;
  PolygonScene scene;
};

SceneSpec parse_scene_spec(const std::string& text);

std::string serialize_scene_spec(const SceneSpec& spec);

/// JSON fragments for report files: exact "p/q" serialization throughout.
Json json_rational(const Rational& x);
Json json_interval(const SidedInterval& J);
Json json_interval_list(const IntervalList& parts);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace pwc
