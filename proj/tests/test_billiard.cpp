#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "pwc/billiard.hpp"
#include "pwc/census.hpp"
#include "pwc/gapflow.hpp"

using namespace pwc;
using fixtures::q;

namespace {

PolygonScene unit_square_transport() {
  PolygonScene s;
  s.vertices = {{q(0), q(0)}, {q(1), q(0)}, {q(1), q(1)}, {q(0), q(1)}};
  s.fields = {
      {0, SidedInterval::half_open(q(0), q(1)), {q(0), q(1)}},
      {1, SidedInterval::half_open(q(0), q(1)), {q(-1), q(0)}},
      {2, SidedInterval::half_open(q(0), q(1)), {q(0), q(-1)}},
      {3, SidedInterval::half_open(q(0), q(1)), {q(1), q(0)}},
  };
  return s;
}

PolygonScene right_isosceles() {
  PolygonScene s;
  s.vertices = {{q(0), q(0)}, {q(1), q(0)}, {q(0), q(1)}};
  s.fields = {{0, SidedInterval::half_open(q(0), q(1)), {q(1), q(1)}}};
  return s;
}

PolygonScene triangle_345() {
  PolygonScene s;
  s.vertices = {{q(0), q(0)}, {q(4), q(0)}, {q(0), q(3)}};
  s.fields = {
      {0, SidedInterval::half_open(q(0), q(1)), {q(4), q(1)}},
      {1, SidedInterval::half_open(q(0), q(1)), {q(-19), q(8)}},
      {2, SidedInterval::half_open(q(0), q(1)), {q(1), q(-4)}},
  };
  return s;
}

}  // namespace

TEST_CASE("scene validation") {
  CHECK_NOTHROW(validate_scene(unit_square_transport()));
  CHECK_NOTHROW(validate_scene(right_isosceles()));
  CHECK_NOTHROW(validate_scene(triangle_345()));

  PolygonScene cw = unit_square_transport();
  std::reverse(cw.vertices.begin(), cw.vertices.end());
  CHECK_THROWS_AS(validate_scene(cw), PwcError);

  PolygonScene dent = unit_square_transport();
  dent.vertices.insert(dent.vertices.begin() + 1, {q(1, 2), q(1, 2)});  // reflex vertex
  CHECK_THROWS_AS(validate_scene(dent), PwcError);

  PolygonScene parallel = right_isosceles();
  parallel.fields[0].direction = {q(1), q(0)};  // along its own edge
  CHECK_THROWS_AS(validate_scene(parallel), PwcError);
  PolygonScene outward = right_isosceles();
  outward.fields[0].direction = {q(0), q(-1)};
  CHECK_THROWS_AS(validate_scene(outward), PwcError);

  PolygonScene overlap = right_isosceles();
  overlap.fields.push_back({0, SidedInterval::half_open(q(1, 2), q(1)), {q(0), q(1)}});
  CHECK_THROWS_AS(validate_scene(overlap), PwcError);
}

TEST_CASE("first return on the unit square is a straight transport") {
  auto s = unit_square_transport();
  for (long k = 1; k < 16; ++k) {
    BoundaryPoint hit = first_return(s, {0, q(k, 16)});
    CHECK(hit == BoundaryPoint{2, 1 - q(k, 16)});  // top edge runs right-to-left
  }
  CHECK(first_return(s, {1, q(1, 3)}) == BoundaryPoint{3, q(2, 3)});

  PolygonScene partial = s;
  partial.fields.resize(1);
  CHECK_THROWS_AS(first_return(partial, {1, q(1, 3)}), PwcError);  // no field there

  PolygonScene diag = s;
  diag.fields = {{0, SidedInterval::half_open(q(0), q(1)), {q(1), q(1)}}};
  CHECK_THROWS_AS(first_return(diag, {0, q(0)}), PwcError);  // lands on the corner (1,1)
}

TEST_CASE("first return on the right triangle hits the hypotenuse") {
  auto s = right_isosceles();
  for (long k = 0; k < 16; ++k) {
    Rational t = q(k, 16);
    BoundaryPoint hit = first_return(s, {0, t});
    CHECK(hit.edge == 1);
    CHECK(hit.u == (1 - t) / 2);
    // substitution oracle: the hit point really is ((1+t)/2, (1-t)/2)
    Vec2 at = boundary_position(s, hit);
    CHECK(at.x == (1 + t) / 2);
    CHECK(at.y == (1 - t) / 2);
  }
}

TEST_CASE("chart extraction for incommensurable edges") {
  auto s = right_isosceles();
  CHECK_THROWS_AS(extract_return_map(s), PwcError);  // default requires commensurability

  auto ex = extract_return_map(s, false);
  CHECK(!ex.commensurable);
  CHECK(ex.map_omitted_reason == "incommensurable edge lengths");
  REQUIRE(ex.chart_pieces.size() == 1);
  const auto& cp = ex.chart_pieces[0];
  CHECK(cp.source_edge == 0);
  CHECK(cp.target_edge == 1);
  CHECK(cp.slope == q(-1, 2));
  CHECK(cp.intercept == q(1, 2));
  for (long k = 0; k < 256; ++k) {
    Rational u = q(k, 256);
    CHECK(first_return(s, {0, u}).u == cp.slope * u + cp.intercept);
  }
}

TEST_CASE("square transport extracts unit-slope pieces and no contraction") {
  auto ex = extract_return_map(unit_square_transport());
  CHECK(ex.commensurable);
  CHECK(ex.edge_weights == std::vector<Rational>{q(1, 4), q(1, 4), q(1, 4), q(1, 4)});
  REQUIRE(ex.normalized_pieces.size() == 4);
  for (const auto& p : ex.normalized_pieces) CHECK(rational_abs(p.slope) == 1);
  CHECK(!ex.contractive);
  CHECK(!ex.map.has_value());
  CHECK(ex.map_omitted_reason == "return map is not a contraction");
  CHECK(ex.vertex_splits == 0);
  CHECK(ex.chart_pieces.size() == ex.field_discontinuities + ex.vertex_splits);
}

TEST_CASE("a ray family crossing a vertex splits the arc") {
  PolygonScene s = unit_square_transport();
  s.fields = {{0, SidedInterval::half_open(q(0), q(1)), {q(1), q(2)}}};
  auto ex = extract_return_map(s);
  CHECK(ex.vertex_splits == 1);
  REQUIRE(ex.chart_pieces.size() == 2);
  CHECK(ex.chart_pieces[0].arc == SidedInterval::half_open(q(0), q(1, 2)));
  CHECK(ex.chart_pieces[0].target_edge == 2);
  CHECK(ex.chart_pieces[0].slope == q(-1));
  CHECK(ex.chart_pieces[0].intercept == q(1, 2));
  CHECK(ex.chart_pieces[1].arc == SidedInterval::half_open(q(1, 2), q(1)));
  CHECK(ex.chart_pieces[1].target_edge == 1);
  CHECK(ex.chart_pieces[1].slope == q(-2));
  CHECK(ex.chart_pieces[1].intercept == q(2));
  // sampling oracle on both fragments
  for (long k = 0; k < 256; ++k) {
    Rational u = q(k, 256);
    if (u == q(1, 2)) continue;  // the split point itself is a corner hit
    const auto& cp = ex.chart_pieces[u < q(1, 2) ? 0 : 1];
    BoundaryPoint hit = first_return(s, {0, u});
    CHECK(hit.edge == cp.target_edge);
    CHECK(hit.u == cp.slope * u + cp.intercept);
  }
  CHECK_THROWS_AS(first_return(s, {0, q(1, 2)}), PwcError);
}

TEST_CASE("the commensurable triangle yields a validated contraction") {
  auto ex = extract_return_map(triangle_345());
  CHECK(ex.commensurable);
  CHECK(ex.edge_weights == std::vector<Rational>{q(1, 3), q(5, 12), q(1, 4)});
  REQUIRE(ex.chart_pieces.size() == 3);
  CHECK(ex.chart_pieces[0].slope == q(-1, 4));
  CHECK(ex.chart_pieces[1].slope == q(-25, 57));
  CHECK(ex.chart_pieces[2].slope == q(-3, 16));
  REQUIRE(ex.normalized_pieces.size() == 3);
  CHECK(ex.normalized_pieces[0].slope == q(-5, 16));
  CHECK(ex.normalized_pieces[1].slope == q(-5, 19));
  CHECK(ex.normalized_pieces[2].slope == q(-1, 4));
  CHECK(ex.piece_provenance ==
        std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}, {2, 0}});
  CHECK(ex.contractive);
  REQUIRE(ex.map.has_value());
  CHECK(ex.map->kappa() == q(5, 16));

  // sampled agreement between the flow and the normalized map
  auto s = triangle_345();
  std::vector<Rational> V{q(0), q(1, 3), q(3, 4), q(1)};
  for (long k = 0; k < 256; ++k) {
    Rational t = q(k, 256);
    std::size_t edge = t < V[1] ? 0 : (t < V[2] ? 1 : 2);
    Rational u = (t - V[edge]) / (V[edge + 1] - V[edge]);
    BoundaryPoint hit = first_return(s, {edge, u});
    Rational mapped = V[hit.edge] + hit.u * (V[hit.edge + 1] - V[hit.edge]);
    CHECK(ex.map->evaluate(t) == mapped);
  }
}

TEST_CASE("extracted contraction feeds the analysis pipeline") {
  auto ex = extract_return_map(triangle_345());
  REQUIRE(ex.map.has_value());
  const auto& f = *ex.map;
  auto verdict = census_verdict(f, {.max_period = 12, .grid_seeds = 32});
  CHECK(verdict.regular_count + verdict.degenerate_count <= f.piece_count());
  auto E = compute_E(f);
  CHECK(E.size() <= f.piece_count() + 1);
  CHECK(total_length(E) >= 1 - f.kappa());
  auto atlas = propagate(f, compute_F(f), 20);
  CHECK(1 - atlas.layer_coverage() <= rational_pow(f.kappa(), 21));
}
