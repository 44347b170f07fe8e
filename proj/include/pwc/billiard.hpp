#pragma once

#include "pwc/map.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pwc {

struct Vec2 {
  Rational x;
  Rational y;

  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
inline Rational cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// A constant inward direction assigned to part of one polygon edge.  The arc
/// lives in the edge chart: u in [0,1) runs from the edge's first vertex to
/// its second.
struct EdgeField {
  std::size_t edge = 0;
  SidedInterval arc{0, 1, true, false};
  Vec2 direction;
};

/// Strictly convex polygon (counterclockwise vertices, exact rational
/// coordinates) with a piecewise-constant inward field on its boundary.
struct PolygonScene {
  std::vector<Vec2> vertices;
  std::vector<EdgeField> fields;

  std::size_t edge_count() const { return vertices.size(); }
  Vec2 edge_vector(std::size_t k) const {
    return vertices[(k + 1) % vertices.size()] - vertices[k];
  }
};

/// Checks convexity, arc sanity (within [0,1), no overlaps per edge) and
/// strict inwardness of every field direction; throws NotInward or
/// PreconditionFailed.  Returns the scene unchanged on success.
const PolygonScene& validate_scene(const PolygonScene& scene);

/// A boundary point in the per-edge chart.
struct BoundaryPoint {
  std::size_t edge = 0;
  Rational u;  // in [0,1) along the edge

  bool operator==(const BoundaryPoint&) const = default;
};

Vec2 boundary_position(const PolygonScene& scene, const BoundaryPoint& p);

/// Follows the field direction from p until the next boundary hit (exact
/// ray-segment intersection).  Throws OutOfDomain when no field covers p,
/// NotInward for a grazing/exiting direction, CornerHit when the ray lands
/// exactly on a vertex.
BoundaryPoint first_return(const PolygonScene& scene, const BoundaryPoint& p);

/// One affine branch of the return map in edge charts:
/// u_target = slope * u + intercept for u in arc on the source edge.
struct ChartPiece {
  std::size_t source_edge = 0;
  SidedInterval arc{0, 1, true, false};
  std::size_t target_edge = 0;
  Rational slope;
  Rational intercept;
};

struct ReturnMapExtract {
  std::vector<ChartPiece> chart_pieces;          // exact for any rational polygon
  std::size_t field_discontinuities = 0;         // arcs in the input field
  std::size_t vertex_splits = 0;                 // extra breakpoints from vertex preimages

  bool commensurable = false;                    // all edge-length ratios rational
  std::vector<Rational> edge_weights;            // normalized edge lengths (sum 1)
  std::vector<AffinePiece> normalized_pieces;    // boundary map in arclength coordinate
  std::vector<std::pair<std::size_t, std::size_t>> piece_provenance;  // (source, target) edge
  bool contractive = false;                      // all normalized |slope| < 1
  std::optional<PiecewiseAffineContraction> map;  // emitted when it validates
  std::string map_omitted_reason;
};

/// Splits every field arc at vertex crossings of the ray family and computes
/// the exact affine branch per fragment.  With require_commensurable (the
/// default) incommensurable edge lengths raise IncommensurableEdges; without
/// it the extract carries chart pieces only.
ReturnMapExtract extract_return_map(const PolygonScene& scene,
                                    bool require_commensurable = true);

}  // namespace pwc
