#include "pwc/billiard.hpp"

#include <algorithm>

namespace pwc {

namespace {

std::optional<Vec2> field_at(const PolygonScene& scene, const BoundaryPoint& p) {
  for (const auto& f : scene.fields)
    if (f.edge == p.edge && f.arc.contains(p.u)) return f.direction;
  return std::nullopt;
}

struct RayHit {
  std::size_t edge;
  Rational u;
  Rational time;
};

/// First strictly-positive-time boundary hit of the ray P + t*d.
RayHit shoot(const PolygonScene& scene, const Vec2& P, const Vec2& d) {
  std::optional<RayHit> best;
  for (std::size_t j = 0; j < scene.edge_count(); ++j) {
    const Vec2 A = scene.vertices[j];
    const Vec2 E = scene.edge_vector(j);
    Rational det = cross(E, d);
    if (det == 0) continue;  // parallel: no transversal hit
    const Vec2 rhs = A - P;
    Rational t = cross(E, rhs) / det;
    Rational u = cross(d, rhs) / det;
    if (t <= 0 || u < 0 || u > 1) continue;
    if (!best || t < best->time) best = RayHit{j, std::move(u), std::move(t)};
  }
  if (!best)
    throw PwcError(Errc::precondition_failed, "ray from the boundary misses the boundary");
  if (best->u == 0 || best->u == 1)
    throw PwcError(Errc::corner_hit, "ray lands exactly on a vertex");
  return *best;
}

std::string point_str(const BoundaryPoint& p) {
  return "edge " + std::to_string(p.edge) + ", u = " + to_fraction_string(p.u);
}

/// Exact square root of a non-negative integer, if it is a perfect square.
std::optional<Integer> exact_sqrt(const Integer& v) {
  Integer root = sqrt(v);
  if (root * root == v) return root;
  return std::nullopt;
}

}  // namespace

const PolygonScene& validate_scene(const PolygonScene& scene) {
  const std::size_t n = scene.vertices.size();
  if (n < 3) throw PwcError(Errc::precondition_failed, "polygon needs at least 3 vertices");
  for (std::size_t k = 0; k < n; ++k) {
    Vec2 e = scene.edge_vector(k);
    Vec2 next = scene.edge_vector((k + 1) % n);
    if (e.x == 0 && e.y == 0)
      throw PwcError(Errc::precondition_failed, "repeated polygon vertex");
    if (cross(e, next) <= 0)
      throw PwcError(Errc::precondition_failed,
                     "polygon is not strictly convex counterclockwise at vertex " +
                         std::to_string((k + 1) % n));
  }
  for (std::size_t i = 0; i < scene.fields.size(); ++i) {
    const auto& f = scene.fields[i];
    if (f.edge >= n) throw PwcError(Errc::precondition_failed, "field names a missing edge");
    if (f.arc.lo < 0 || f.arc.hi > 1)
      throw PwcError(Errc::precondition_failed, "field arc leaves the edge chart [0,1)");
    if (cross(scene.edge_vector(f.edge), f.direction) <= 0)
      throw PwcError(Errc::not_inward, "field direction does not point strictly inward on edge " +
                                           std::to_string(f.edge));
    for (std::size_t j = i + 1; j < scene.fields.size(); ++j)
      if (scene.fields[j].edge == f.edge && !f.arc.disjoint_from(scene.fields[j].arc))
        throw PwcError(Errc::precondition_failed,
                       "overlapping field arcs on edge " + std::to_string(f.edge));
  }
  return scene;
}

Vec2 boundary_position(const PolygonScene& scene, const BoundaryPoint& p) {
  if (p.edge >= scene.edge_count() || p.u < 0 || p.u >= 1)
    throw PwcError(Errc::out_of_domain, "no boundary point at " + point_str(p));
  const Vec2 A = scene.vertices[p.edge];
  const Vec2 E = scene.edge_vector(p.edge);
  return {A.x + p.u * E.x, A.y + p.u * E.y};
}

BoundaryPoint first_return(const PolygonScene& scene, const BoundaryPoint& p) {
  const Vec2 P = boundary_position(scene, p);
  auto d = field_at(scene, p);
  if (!d) throw PwcError(Errc::out_of_domain, "no field defined at " + point_str(p));
  if (cross(scene.edge_vector(p.edge), *d) <= 0)
    throw PwcError(Errc::not_inward, "direction grazes or exits at " + point_str(p));
  RayHit hit = shoot(scene, P, *d);
  return {hit.edge, std::move(hit.u)};
}

ReturnMapExtract extract_return_map(const PolygonScene& scene, bool require_commensurable) {
  validate_scene(scene);
  ReturnMapExtract out;
  out.field_discontinuities = scene.fields.size();

  std::vector<EdgeField> fields = scene.fields;
  std::sort(fields.begin(), fields.end(), [](const EdgeField& a, const EdgeField& b) {
    return a.edge != b.edge ? a.edge < b.edge : a.arc.lo < b.arc.lo;
  });

  for (const auto& f : fields) {
    const Vec2 A = scene.vertices[f.edge];
    const Vec2 E = scene.edge_vector(f.edge);
    const Vec2& d = f.direction;
    const Rational inward = cross(E, d);  // > 0 after validation

    // chart parameters at which the ray family sweeps through a vertex
    std::vector<Rational> cuts{f.arc.lo};
    for (std::size_t m = 0; m < scene.edge_count(); ++m) {
      const Vec2 C = scene.vertices[m];
      Rational u = cross(C - A, d) / inward;
      if (!(f.arc.lo < u && u < f.arc.hi)) continue;
      Vec2 P{A.x + u * E.x, A.y + u * E.y};
      Rational t = d.x != 0 ? (C.x - P.x) / d.x : (C.y - P.y) / d.y;
      if (t > 0) cuts.push_back(std::move(u));
    }
    cuts.push_back(f.arc.hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    out.vertex_splits += cuts.size() - 2;

    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      bool lo_closed = c == 0 ? f.arc.lo_closed : true;
      bool hi_closed = c + 2 == cuts.size() ? f.arc.hi_closed : false;
      SidedInterval arc(cuts[c], cuts[c + 1], lo_closed, hi_closed);
      Rational um = (arc.lo + arc.hi) / 2;
      RayHit probe = shoot(scene, {A.x + um * E.x, A.y + um * E.y}, d);
      const Vec2 Aj = scene.vertices[probe.edge];
      Rational det = cross(scene.edge_vector(probe.edge), d);
      Rational slope = inward / det;
      Rational intercept = cross(d, Aj - A) / det;
      if (slope * um + intercept != probe.u)
        throw PwcError(Errc::precondition_failed, "affine branch disagrees with ray probe");
      out.chart_pieces.push_back({f.edge, std::move(arc), probe.edge, std::move(slope),
                                  std::move(intercept)});
    }
  }

  // normalized arclength view, available when edge lengths are commensurable
  const std::size_t n = scene.edge_count();
  std::vector<Rational> relative(n);
  bool commensurable = true;
  Vec2 E0 = scene.edge_vector(0);
  Rational s0 = E0.x * E0.x + E0.y * E0.y;
  for (std::size_t k = 0; k < n && commensurable; ++k) {
    Vec2 Ek = scene.edge_vector(k);
    Rational ratio = (Ek.x * Ek.x + Ek.y * Ek.y) / s0;  // (len_k / len_0)^2
    auto num = exact_sqrt(numerator(ratio));
    auto den = exact_sqrt(denominator(ratio));
    if (num && den)
      relative[k] = Rational(*num) / Rational(*den);
    else
      commensurable = false;
  }
  out.commensurable = commensurable;
  if (!commensurable) {
    if (require_commensurable)
      throw PwcError(Errc::incommensurable_edges,
                     "edge lengths have irrational ratios; no arclength normalization");
    out.map_omitted_reason = "incommensurable edge lengths";
    return out;
  }

  Rational total = 0;
  for (const auto& c : relative) total += c;
  for (const auto& c : relative) out.edge_weights.push_back(c / total);
  std::vector<Rational> V{0};  // vertex positions in the normalized coordinate
  for (const auto& w : out.edge_weights) V.push_back(V.back() + w);

  out.contractive = true;
  for (const auto& cp : out.chart_pieces) {
    const Rational& wk = out.edge_weights[cp.source_edge];
    const Rational& wj = out.edge_weights[cp.target_edge];
    Rational slope = cp.slope * wj / wk;
    Rational intercept = V[cp.target_edge] + cp.intercept * wj - slope * V[cp.source_edge];
    SidedInterval domain(V[cp.source_edge] + cp.arc.lo * wk, V[cp.source_edge] + cp.arc.hi * wk,
                         cp.arc.lo_closed, cp.arc.hi_closed);
    if (rational_abs(slope) >= 1) out.contractive = false;
    out.normalized_pieces.push_back({std::move(slope), std::move(intercept), std::move(domain)});
    out.piece_provenance.push_back({cp.source_edge, cp.target_edge});
  }

  if (!out.contractive) {
    out.map_omitted_reason = "return map is not a contraction";
    return out;
  }
  PiecewiseAffineContraction candidate(out.normalized_pieces);
  auto report = candidate.validate();
  if (report.ok())
    out.map = std::move(candidate);
  else
    out.map_omitted_reason = violation_name(report.violations.front().first) + ": " +
                             report.violations.front().second;
  return out;
}

}  // namespace pwc
