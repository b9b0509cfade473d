#include "mfr/model_builder.hpp"

#include <cmath>
#include <numbers>

#include "mfr/errors.hpp"

namespace mfr {

Segment line_seg(const Vec3& a, const Vec3& b) { return {a, b, std::nullopt}; }

Segment arc_seg(const Vec3& a, const Vec3& b, const Vec3& center, const Vec3& axis) {
  return {a, b, CircularArc{center, normalized(axis), distance(a, center)}};
}

std::vector<Segment> polygon(const std::vector<Vec3>& pts) {
  std::vector<Segment> out;
  out.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out.push_back(line_seg(pts[i], pts[(i + 1) % pts.size()]));
  return out;
}

double segment_sweep(const Segment& s) {
  if (!s.arc) return 0.0;
  const CircularArc& a = *s.arc;
  if (distance(s.from, s.to) <= 1e-12) return 2.0 * std::numbers::pi;
  const Vec3 r0 = normalized(s.from - a.center);
  const Vec3 r1 = normalized(s.to - a.center);
  double sweep = std::atan2(dot(cross(r0, r1), a.axis), dot(r0, r1));
  if (sweep <= 0) sweep += 2.0 * std::numbers::pi;
  return sweep;
}

Vec3 segment_point(const Segment& s, double t) {
  if (!s.arc) return s.from + (s.to - s.from) * t;
  const CircularArc& a = *s.arc;
  return a.center + rotate(normalized(s.from - a.center), a.axis, segment_sweep(s) * t) * a.radius;
}

Segment reversed(const Segment& s) {
  Segment r{s.to, s.from, s.arc};
  if (r.arc) r.arc->axis = -r.arc->axis;
  return r;
}

std::vector<Segment> reversed(const std::vector<Segment>& loop) {
  std::vector<Segment> out;
  out.reserve(loop.size());
  for (auto it = loop.rbegin(); it != loop.rend(); ++it) out.push_back(reversed(*it));
  return out;
}

int ModelBuilder::vertex_for(const Vec3& p) {
  for (const Vertex& v : vertices_) {
    if (distance(v.point, p) <= tol_) return v.id;
  }
  const int id = static_cast<int>(vertices_.size()) + 1;
  vertices_.push_back({id, p});
  return id;
}

Coedge ModelBuilder::coedge_for(const Segment& s) {
  const int a = vertex_for(s.from);
  const int b = vertex_for(s.to);
  const Vec3 mid = segment_point(s, 0.5);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (s.arc.has_value() != std::holds_alternative<CircularArc>(e.curve)) continue;
    const bool same = e.start_vertex == a && e.end_vertex == b;
    const bool flipped = e.start_vertex == b && e.end_vertex == a;
    if (!same && !flipped) continue;
    if (distance(edge_mid_[i], mid) > tol_) continue;
    if (s.arc) {
      const auto& ea = std::get<CircularArc>(e.curve);
      return {e.id, dot(ea.axis, s.arc->axis) < 0};
    }
    // A closed line cannot occur; same/flipped are exclusive for lines.
    return {e.id, !same};
  }
  Edge e;
  e.id = static_cast<int>(edges_.size()) + 1;
  e.start_vertex = a;
  e.end_vertex = b;
  if (s.arc) {
    e.curve = *s.arc;
  } else {
    if (a == b) throw TopologyError("degenerate line segment at a single vertex");
    e.curve = LineCurve{};
  }
  edges_.push_back(e);
  edge_mid_.push_back(mid);
  return {e.id, false};
}

int ModelBuilder::add_face(const SurfaceGeometry& surface, bool sense,
                           const std::vector<std::vector<Segment>>& loops) {
  Face f;
  f.id = static_cast<int>(faces_.size()) + 1;
  f.surface = surface;
  f.sense = sense;
  for (std::size_t li = 0; li < loops.size(); ++li) {
    Loop loop;
    loop.kind = li == 0 ? LoopKind::Outer : LoopKind::Inner;
    for (const Segment& s : loops[li]) loop.coedges.push_back(coedge_for(s));
    f.loops.push_back(std::move(loop));
  }
  faces_.push_back(std::move(f));
  shells_.back().face_ids.push_back(faces_.back().id);
  return faces_.back().id;
}

void ModelBuilder::start_shell() {
  if (!shells_.back().face_ids.empty()) shells_.push_back(Shell{});
}

Model ModelBuilder::build(std::string length_unit) const {
  std::vector<Shell> shells = shells_;
  if (shells.size() == 1) shells.clear();
  return Model(std::move(length_unit), vertices_, edges_, faces_, std::move(shells));
}

}  // namespace mfr
