#include "mfr/brep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "mfr/errors.hpp"
#include "mfr/surface.hpp"

namespace mfr {

std::string_view to_string(FaceType t) {
  switch (t) {
    case FaceType::Plan: return "PLAN";
    case FaceType::Cyli: return "CYLI";
    case FaceType::Coni: return "CONI";
    case FaceType::Sphe: return "SPHE";
    case FaceType::Toro: return "TORO";
    case FaceType::Any: return "ANY";
  }
  return "ANY";
}

std::optional<FaceType> face_type_from_string(std::string_view s) {
  for (FaceType t : {FaceType::Plan, FaceType::Cyli, FaceType::Coni, FaceType::Sphe, FaceType::Toro,
                     FaceType::Any}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

FaceType face_type_of(const SurfaceGeometry& s) {
  switch (s.index()) {
    case 0: return FaceType::Plan;
    case 1: return FaceType::Cyli;
    case 2: return FaceType::Coni;
    case 3: return FaceType::Sphe;
    default: return FaceType::Toro;
  }
}

bool is_rotational(const SurfaceGeometry& s) {
  return std::holds_alternative<Cylinder>(s) || std::holds_alternative<Cone>(s) ||
         std::holds_alternative<Torus>(s);
}

std::string_view to_string(LoopKind k) { return k == LoopKind::Outer ? "OUTER" : "INNER"; }

// ---------------------------------------------------------------------------

Model::Model(std::string length_unit, std::vector<Vertex> vertices, std::vector<Edge> edges,
             std::vector<Face> faces, std::vector<Shell> shells)
    : length_unit_(std::move(length_unit)),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      faces_(std::move(faces)),
      shells_(std::move(shells)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) vertex_index_.emplace(vertices_[i].id, i);
  for (std::size_t i = 0; i < edges_.size(); ++i) edge_index_.emplace(edges_[i].id, i);
  for (std::size_t i = 0; i < faces_.size(); ++i) face_index_.emplace(faces_[i].id, i);

  if (shells_.empty()) {
    Shell all;
    for (const Face& f : faces_) all.face_ids.push_back(f.id);
    shells_.push_back(std::move(all));
  }
  for (std::size_t s = 0; s < shells_.size(); ++s) {
    for (int fid : shells_[s].face_ids) face_shell_.emplace(fid, s);
  }

  for (const Face& f : faces_) {
    for (std::size_t li = 0; li < f.loops.size(); ++li) {
      const auto& co = f.loops[li].coedges;
      for (std::size_t ci = 0; ci < co.size(); ++ci) {
        uses_[co[ci].edge_id].push_back(EdgeUse{f.id, li, ci, co[ci].reversed});
      }
    }
  }

  if (!vertices_.empty()) {
    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
    Vec3 hi = -lo;
    for (const Vertex& v : vertices_) {
      lo = {std::min(lo.x, v.point.x), std::min(lo.y, v.point.y), std::min(lo.z, v.point.z)};
      hi = {std::max(hi.x, v.point.x), std::max(hi.y, v.point.y), std::max(hi.z, v.point.z)};
    }
    // Full circles carry a single vertex; include arc extents.
    for (const Edge& e : edges_) {
      if (const auto* arc = std::get_if<CircularArc>(&e.curve)) {
        const Vec3 r{arc->radius, arc->radius, arc->radius};
        lo = {std::min(lo.x, arc->center.x - r.x), std::min(lo.y, arc->center.y - r.y),
              std::min(lo.z, arc->center.z - r.z)};
        hi = {std::max(hi.x, arc->center.x + r.x), std::max(hi.y, arc->center.y + r.y),
              std::max(hi.z, arc->center.z + r.z)};
      }
    }
    const double d = norm(hi - lo);
    diagonal_ = d > 0 ? d : 1.0;
  }
}

const Face& Model::face(int id) const {
  auto it = face_index_.find(id);
  if (it == face_index_.end()) throw UnknownFace("unknown face " + std::to_string(id));
  return faces_[it->second];
}

const Edge& Model::edge(int id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) throw TopologyError("unknown edge " + std::to_string(id));
  return edges_[it->second];
}

const Vertex& Model::vertex(int id) const {
  auto it = vertex_index_.find(id);
  if (it == vertex_index_.end()) throw TopologyError("unknown vertex " + std::to_string(id));
  return vertices_[it->second];
}

const std::vector<EdgeUse>& Model::edge_uses(int edge_id) const {
  static const std::vector<EdgeUse> kEmpty;
  auto it = uses_.find(edge_id);
  return it == uses_.end() ? kEmpty : it->second;
}

std::size_t Model::shell_of(int face_id) const {
  auto it = face_shell_.find(face_id);
  if (it == face_shell_.end()) throw UnknownFace("face " + std::to_string(face_id) + " is in no shell");
  return it->second;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 arc_start_radial(const Model& m, const Edge& e, const CircularArc& arc) {
  return normalized(m.vertex(e.start_vertex).point - arc.center);
}

}  // namespace

double arc_sweep(const Model& m, const Edge& e) {
  const auto& arc = std::get<CircularArc>(e.curve);
  if (e.start_vertex == e.end_vertex) return kTwoPi;
  const Vec3 a = arc_start_radial(m, e, arc);
  const Vec3 b = normalized(m.vertex(e.end_vertex).point - arc.center);
  double ang = std::atan2(dot(cross(a, b), arc.axis), dot(a, b));
  if (ang <= 0) ang += kTwoPi;
  return ang;
}

Vec3 edge_point(const Model& m, const Edge& e, double t) {
  if (std::holds_alternative<LineCurve>(e.curve)) {
    const Vec3 a = m.vertex(e.start_vertex).point;
    const Vec3 b = m.vertex(e.end_vertex).point;
    return a + (b - a) * t;
  }
  const auto& arc = std::get<CircularArc>(e.curve);
  const Vec3 r0 = arc_start_radial(m, e, arc);
  return arc.center + rotate(r0, arc.axis, arc_sweep(m, e) * t) * arc.radius;
}

Vec3 edge_tangent(const Model& m, const Edge& e, double t) {
  if (std::holds_alternative<LineCurve>(e.curve)) {
    return normalized(m.vertex(e.end_vertex).point - m.vertex(e.start_vertex).point);
  }
  const auto& arc = std::get<CircularArc>(e.curve);
  const Vec3 r = rotate(arc_start_radial(m, e, arc), arc.axis, arc_sweep(m, e) * t);
  return normalized(cross(arc.axis, r));
}

Vec3 coedge_point(const Model& m, const Coedge& c, double t) {
  return edge_point(m, m.edge(c.edge_id), c.reversed ? 1.0 - t : t);
}

Vec3 coedge_tangent(const Model& m, const Coedge& c, double t) {
  const Vec3 d = edge_tangent(m, m.edge(c.edge_id), c.reversed ? 1.0 - t : t);
  return c.reversed ? -d : d;
}

int coedge_start_vertex(const Model& m, const Coedge& c) {
  const Edge& e = m.edge(c.edge_id);
  return c.reversed ? e.end_vertex : e.start_vertex;
}

int coedge_end_vertex(const Model& m, const Coedge& c) {
  const Edge& e = m.edge(c.edge_id);
  return c.reversed ? e.start_vertex : e.end_vertex;
}

// ---------------------------------------------------------------------------

namespace {

void check_surface(const Face& f, std::vector<Diagnostic>& out) {
  auto unit = [](const Vec3& v) { return std::fabs(norm(v) - 1.0) <= 1e-9; };
  auto bad = [&](const std::string& msg) { out.push_back({"surface", f.id, msg}); };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Plane>) {
          if (!unit(s.normal)) bad("plane normal is not unit length");
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          if (!(s.radius > 0)) bad("cylinder radius must be positive");
          if (!unit(s.axis_dir)) bad("cylinder axis is not unit length");
        } else if constexpr (std::is_same_v<T, Cone>) {
          if (!(s.half_angle > 0 && s.half_angle < std::numbers::pi / 2))
            bad("cone half angle must lie in (0, pi/2)");
          if (!unit(s.axis_dir)) bad("cone axis is not unit length");
        } else if constexpr (std::is_same_v<T, Sphere>) {
          if (!(s.radius > 0)) bad("sphere radius must be positive");
        } else {
          if (!(s.minor_radius > 0 && s.minor_radius < s.major_radius))
            bad("torus radii must satisfy 0 < minor < major");
          if (!unit(s.axis_dir)) bad("torus axis is not unit length");
        }
      },
      f.surface);
}

}  // namespace

std::vector<Diagnostic> validate_topology(const Model& m) {
  std::vector<Diagnostic> out;
  const double tol = 1e-7 * m.bbox_diagonal();

  {
    std::set<int> seen;
    for (const Face& f : m.faces()) {
      if (!seen.insert(f.id).second) out.push_back({"face", f.id, "duplicate face id"});
    }
    std::set<int> seen_e;
    for (const Edge& e : m.edges()) {
      if (!seen_e.insert(e.id).second) out.push_back({"edge", e.id, "duplicate edge id"});
    }
    std::set<int> seen_v;
    for (const Vertex& v : m.vertices()) {
      if (!seen_v.insert(v.id).second) out.push_back({"vertex", v.id, "duplicate vertex id"});
    }
  }

  for (const Edge& e : m.edges()) {
    if (!m.has_vertex(e.start_vertex) || !m.has_vertex(e.end_vertex)) {
      out.push_back({"edge", e.id, "references an unknown vertex"});
      continue;
    }
    if (const auto* arc = std::get_if<CircularArc>(&e.curve)) {
      if (!(arc->radius > 0)) out.push_back({"edge", e.id, "arc radius must be positive"});
      for (int vid : {e.start_vertex, e.end_vertex}) {
        const Vec3 p = m.vertex(vid).point;
        const Vec3 d = p - arc->center;
        if (std::fabs(norm(d) - arc->radius) > tol || std::fabs(dot(d, arc->axis)) > tol) {
          out.push_back({"edge", e.id, "vertex " + std::to_string(vid) + " is not on the arc"});
        }
      }
    } else if (e.start_vertex == e.end_vertex) {
      out.push_back({"edge", e.id, "line edge has coincident end vertices"});
    }
  }

  for (const Face& f : m.faces()) {
    check_surface(f, out);
    const auto outer = std::count_if(f.loops.begin(), f.loops.end(),
                                     [](const Loop& l) { return l.kind == LoopKind::Outer; });
    if (outer != 1) {
      out.push_back({"face", f.id,
                     "face has " + std::to_string(outer) + " OUTER loops (expected exactly one)"});
    }
    for (std::size_t li = 0; li < f.loops.size(); ++li) {
      const Loop& loop = f.loops[li];
      const int loop_id = f.id * 100 + static_cast<int>(li);
      if (loop.coedges.empty()) {
        out.push_back({"loop", loop_id, "empty loop"});
        continue;
      }
      bool known = true;
      for (const Coedge& c : loop.coedges) {
        if (!m.has_edge(c.edge_id)) {
          out.push_back({"loop", loop_id, "references unknown edge " + std::to_string(c.edge_id)});
          known = false;
        }
      }
      if (!known) continue;
      for (std::size_t ci = 0; ci < loop.coedges.size(); ++ci) {
        const Coedge& cur = loop.coedges[ci];
        const Coedge& next = loop.coedges[(ci + 1) % loop.coedges.size()];
        const Edge& ce = m.edge(cur.edge_id);
        if (!m.has_vertex(ce.start_vertex) || !m.has_vertex(ce.end_vertex)) continue;
        if (coedge_end_vertex(m, cur) != coedge_start_vertex(m, next)) {
          out.push_back({"loop", loop_id,
                         "gap between edge " + std::to_string(cur.edge_id) + " and edge " +
                             std::to_string(next.edge_id)});
          break;
        }
      }
      for (const Coedge& c : loop.coedges) {
        const Edge& e = m.edge(c.edge_id);
        if (!m.has_vertex(e.start_vertex) || !m.has_vertex(e.end_vertex)) continue;
        for (double t : {0.0, 0.5, 1.0}) {
          if (distance_to_surface(f.surface, edge_point(m, e, t)) > tol) {
            out.push_back({"face", f.id,
                           "edge " + std::to_string(e.id) + " does not lie on the face surface"});
            break;
          }
        }
      }
    }
  }

  for (const Edge& e : m.edges()) {
    const auto& uses = m.edge_uses(e.id);
    if (uses.size() != 2) {
      out.push_back({"edge", e.id,
                     "edge is used by " + std::to_string(uses.size()) + " coedges (expected 2)"});
    } else if (uses[0].reversed == uses[1].reversed) {
      out.push_back({"edge", e.id, "coedges of the edge do not have opposite orientation"});
    }
  }
  return out;
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  for (const Diagnostic& d : diags) os << d.entity << ' ' << d.id << ": " << d.message << '\n';
  return os.str();
}

std::optional<EdgeUse> mate_use(const Model& m, int face_id, const Coedge& c) {
  const auto& uses = m.edge_uses(c.edge_id);
  for (const EdgeUse& u : uses) {
    if (u.reversed != c.reversed) {
      if (u.face_id == face_id) return std::nullopt;  // seam
      return u;
    }
  }
  return std::nullopt;
}

std::vector<Adjacency> adjacent_faces(const Model& m, int face_id, LoopKind kind) {
  const Face& f = m.face(face_id);
  std::vector<Adjacency> out;
  for (const Loop& loop : f.loops) {
    if (loop.kind != kind) continue;
    for (const Coedge& c : loop.coedges) {
      if (auto mate = mate_use(m, face_id, c)) out.push_back({mate->face_id, c});
    }
  }
  return out;
}

}  // namespace mfr
