#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mfr/errors.hpp"
#include "mfr/step.hpp"

namespace mfr {

namespace {

const std::set<std::string, std::less<>> kSupported = {
    "CARTESIAN_POINT", "DIRECTION",        "VECTOR",           "AXIS2_PLACEMENT_3D", "PLANE",
    "CYLINDRICAL_SURFACE", "CONICAL_SURFACE", "SPHERICAL_SURFACE", "TOROIDAL_SURFACE", "LINE",
    "CIRCLE",          "VERTEX_POINT",     "EDGE_CURVE",       "ORIENTED_EDGE",      "EDGE_LOOP",
    "FACE_BOUND",      "FACE_OUTER_BOUND", "ADVANCED_FACE",    "CLOSED_SHELL",       "MANIFOLD_SOLID_BREP"};

class Mapper {
 public:
  explicit Mapper(const StepFile& f) : f_(f) {}

  StepImport run() {
    std::vector<int> shells = roots();
    check_reachable(shells);
    std::vector<Shell> out_shells;
    for (int sid : shells) {
      Shell sh;
      for (int fid : refs(arg(entity(sid, "CLOSED_SHELL"), 1))) sh.face_ids.push_back(face(fid));
      out_shells.push_back(std::move(sh));
    }
    StepImport r;
    r.model = Model("mm", std::move(vertices_), std::move(edges_), std::move(faces_), std::move(out_shells));
    r.diagnostics = std::move(diag_);
    if (auto d = validate_topology(r.model); !d.empty()) {
      throw TopologyError("STEP model failed validation:\n" + format_diagnostics(d));
    }
    return r;
  }

 private:
  [[noreturn]] void bad(const StepEntity& e, const std::string& what) const {
    throw SchemaError("#" + std::to_string(e.id) + " " + e.keyword + ": " + what);
  }

  const StepEntity& entity(int id, std::string_view keyword = {}) const {
    auto it = f_.entities.find(id);
    if (it == f_.entities.end()) throw DanglingReference("missing #" + std::to_string(id));
    const StepEntity& e = it->second;
    if (!e.records.empty() && !keyword.empty()) throw UnsupportedEntity(e.keyword);
    if (!keyword.empty() && e.keyword != keyword) {
      throw SchemaError("#" + std::to_string(id) + " is " + e.keyword + ", expected " + std::string(keyword));
    }
    return e;
  }

  const StepValue& arg(const StepEntity& e, std::size_t i) const {
    if (i >= e.args.size()) bad(e, "too few parameters");
    return e.args[i];
  }

  int ref(const StepEntity& e, std::size_t i) const {
    const auto* r = std::get_if<StepRef>(&arg(e, i).v);
    if (!r) bad(e, "parameter " + std::to_string(i + 1) + " is not a reference");
    return r->id;
  }

  std::vector<int> refs(const StepValue& v) const {
    std::vector<int> out;
    if (const auto* l = std::get_if<StepList>(&v.v)) {
      for (const StepValue& x : l->items) {
        if (const auto* r = std::get_if<StepRef>(&x.v)) out.push_back(r->id);
      }
    }
    return out;
  }

  double real(const StepEntity& e, std::size_t i) const {
    const StepValue& v = arg(e, i);
    if (const auto* d = std::get_if<double>(&v.v)) return *d;
    if (const auto* n = std::get_if<long long>(&v.v)) return static_cast<double>(*n);
    // typed measure such as LENGTH_MEASURE(2.5)
    if (const auto* l = std::get_if<StepList>(&v.v); l && l->items.size() == 1) {
      if (const auto* d = std::get_if<double>(&l->items[0].v)) return *d;
    }
    bad(e, "parameter " + std::to_string(i + 1) + " is not a number");
  }

  bool flag(const StepEntity& e, std::size_t i) const {
    const auto* en = std::get_if<StepEnum>(&arg(e, i).v);
    if (!en || (en->name != "T" && en->name != "F")) bad(e, "parameter " + std::to_string(i + 1) + " is not a boolean");
    return en->name == "T";
  }

  Vec3 triple(const StepEntity& e) const {
    const auto* l = std::get_if<StepList>(&arg(e, 1).v);
    if (!l || l->items.size() != 3) bad(e, "expected three coordinates");
    double c[3];
    for (int k = 0; k < 3; ++k) {
      if (const auto* d = std::get_if<double>(&l->items[k].v)) {
        c[k] = *d;
      } else if (const auto* n = std::get_if<long long>(&l->items[k].v)) {
        c[k] = static_cast<double>(*n);
      } else {
        bad(e, "coordinate is not a number");
      }
    }
    return {c[0], c[1], c[2]};
  }

  Vec3 point(int id) const { return triple(entity(id, "CARTESIAN_POINT")); }

  Vec3 direction(int id) const {
    const StepEntity& e = entity(id, "DIRECTION");
    const Vec3 d = triple(e);
    if (norm(d) < 1e-300) bad(e, "zero direction");
    return normalized(d);
  }

  struct Placement {
    Vec3 origin;
    Vec3 axis{0, 0, 1};
  };

  Placement placement(int id) const {
    const StepEntity& e = entity(id, "AXIS2_PLACEMENT_3D");
    Placement p{point(ref(e, 1))};
    if (std::holds_alternative<StepRef>(arg(e, 2).v)) p.axis = direction(ref(e, 2));
    return p;
  }

  SurfaceGeometry surface(int id) const {
    auto it = f_.entities.find(id);
    if (it == f_.entities.end()) throw DanglingReference("missing #" + std::to_string(id));
    const StepEntity& e = it->second;
    if (!e.records.empty() || !kSupported.count(e.keyword)) throw UnsupportedEntity(e.keyword);
    const Placement p = placement(ref(e, 1));
    if (e.keyword == "PLANE") return Plane{p.origin, p.axis};
    if (e.keyword == "CYLINDRICAL_SURFACE") return Cylinder{p.origin, p.axis, real(e, 2)};
    if (e.keyword == "SPHERICAL_SURFACE") return Sphere{p.origin, real(e, 2)};
    if (e.keyword == "TOROIDAL_SURFACE") return Torus{p.origin, p.axis, real(e, 2), real(e, 3)};
    if (e.keyword == "CONICAL_SURFACE") {
      const double r = real(e, 2), semi = real(e, 3);
      if (!(semi > 0.0 && semi < M_PI / 2)) bad(e, "semi-angle outside (0, pi/2)");
      return Cone{p.origin - p.axis * (r / std::tan(semi)), p.axis, semi};
    }
    bad(e, "not a surface");
  }

  int vertex(int id) {
    if (auto it = vertex_ids_.find(id); it != vertex_ids_.end()) return it->second;
    const StepEntity& e = entity(id, "VERTEX_POINT");
    const int vid = static_cast<int>(vertices_.size()) + 1;
    vertices_.push_back({vid, point(ref(e, 1))});
    vertex_ids_[id] = vid;
    return vid;
  }

  int edge(int id) {
    if (auto it = edge_ids_.find(id); it != edge_ids_.end()) return it->second;
    const StepEntity& e = entity(id, "EDGE_CURVE");
    Edge out;
    out.start_vertex = vertex(ref(e, 1));
    out.end_vertex = vertex(ref(e, 2));
    const bool same_sense = flag(e, 4);
    const StepEntity& c = entity(ref(e, 3));
    if (!c.records.empty() || !kSupported.count(c.keyword)) throw UnsupportedEntity(c.keyword);
    if (c.keyword == "LINE") {
      out.curve = LineCurve{};
    } else if (c.keyword == "CIRCLE") {
      const Placement p = placement(ref(c, 1));
      out.curve = CircularArc{p.origin, same_sense ? p.axis : -p.axis, real(c, 2)};
    } else {
      bad(e, "curve " + c.keyword + " is not a LINE or CIRCLE");
    }
    out.id = static_cast<int>(edges_.size()) + 1;
    edges_.push_back(out);
    edge_ids_[id] = out.id;
    return out.id;
  }

  struct Bound {
    Loop loop;
    bool outer_tagged = false;
    double extent = 0.0;
  };

  Bound bound(int id) {
    const StepEntity& b = entity(id);
    if (b.keyword != "FACE_BOUND" && b.keyword != "FACE_OUTER_BOUND") bad(b, "expected a face bound");
    const StepEntity& l = entity(ref(b, 1), "EDGE_LOOP");
    Bound out;
    out.outer_tagged = b.keyword == "FACE_OUTER_BOUND";
    for (int oid : refs(arg(l, 1))) {
      const StepEntity& oe = entity(oid, "ORIENTED_EDGE");
      out.loop.coedges.push_back({edge(ref(oe, 3)), !flag(oe, 4)});
    }
    if (out.loop.coedges.empty()) bad(l, "empty loop");
    if (!flag(b, 2)) {
      std::reverse(out.loop.coedges.begin(), out.loop.coedges.end());
      for (Coedge& c : out.loop.coedges) c.reversed = !c.reversed;
    }
    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Vec3 hi = -lo;
    auto grow = [&](const Vec3& p) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    };
    for (const Coedge& c : out.loop.coedges) {
      const Edge& ed = edges_[static_cast<std::size_t>(c.edge_id - 1)];
      grow(vertices_[static_cast<std::size_t>(ed.start_vertex - 1)].point);
      if (const auto* a = std::get_if<CircularArc>(&ed.curve)) {
        // the full circle bounds any arc of it; good enough for ranking loops
        Vec3 u, v;
        orthonormal_frame(a->axis, u, v);
        for (const Vec3& d : {u, -u, v, -v}) grow(a->center + d * a->radius);
      }
    }
    out.extent = distance(lo, hi);
    return out;
  }

  int face(int id) {
    const StepEntity& e = entity(id, "ADVANCED_FACE");
    Face out;
    out.surface = surface(ref(e, 2));
    out.sense = flag(e, 3);
    std::vector<Bound> bounds;
    for (int bid : refs(arg(e, 1))) bounds.push_back(bound(bid));
    if (bounds.empty()) bad(e, "face has no bounds");
    auto outer = std::find_if(bounds.begin(), bounds.end(), [](const Bound& b) { return b.outer_tagged; });
    if (outer == bounds.end()) {
      outer = std::max_element(bounds.begin(), bounds.end(),
                               [](const Bound& a, const Bound& b) { return a.extent < b.extent; });
      if (bounds.size() > 1) {
        diag_.push_back("#" + std::to_string(id) + " ADVANCED_FACE has no FACE_OUTER_BOUND; largest loop #" +
                        std::to_string(refs(arg(e, 1))[static_cast<std::size_t>(outer - bounds.begin())]) +
                        " promoted to outer");
      } else {
        diag_.push_back("#" + std::to_string(id) + " ADVANCED_FACE has no FACE_OUTER_BOUND; its only loop is outer");
      }
    }
    out.id = static_cast<int>(faces_.size()) + 1;
    out.loops.push_back({LoopKind::Outer, outer->loop.coedges});
    for (auto it = bounds.begin(); it != bounds.end(); ++it) {
      if (it != outer) out.loops.push_back({LoopKind::Inner, it->loop.coedges});
    }
    faces_.push_back(std::move(out));
    return faces_.back().id;
  }

  std::vector<int> roots() {
    std::vector<int> solids, shells;
    for (const auto& [id, e] : f_.entities) {
      if (e.keyword == "MANIFOLD_SOLID_BREP") solids.push_back(id);
      if (e.keyword == "CLOSED_SHELL") shells.push_back(id);
    }
    if (!solids.empty()) {
      shells.clear();
      for (int s : solids) shells.push_back(ref(entity(s, "MANIFOLD_SOLID_BREP"), 1));
      return shells;
    }
    if (shells.empty()) throw SchemaError("no MANIFOLD_SOLID_BREP or CLOSED_SHELL in STEP file");
    return shells;
  }

  void check_reachable(const std::vector<int>& shells) {
    std::set<int> seen;
    std::vector<int> stack(shells.begin(), shells.end());
    while (!stack.empty()) {
      const int id = stack.back();
      stack.pop_back();
      if (!seen.insert(id).second) continue;
      const StepEntity& e = entity(id);
      if (!e.records.empty() || !kSupported.count(e.keyword)) throw UnsupportedEntity(e.keyword);
      for (int r : step_references(e)) stack.push_back(r);
    }
    std::map<std::string, int> ignored;
    for (const auto& [id, e] : f_.entities) {
      if (!seen.count(id) && !kSupported.count(e.keyword) && e.keyword != "MANIFOLD_SOLID_BREP") ++ignored[e.keyword];
    }
    for (const auto& [kw, n] : ignored) {
      diag_.push_back("ignored " + std::to_string(n) + " unreachable " + kw + " entit" + (n == 1 ? "y" : "ies"));
    }
  }

  const StepFile& f_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
  std::map<int, int> vertex_ids_, edge_ids_;
  std::vector<std::string> diag_;
};

}  // namespace

StepImport step_to_model(const StepFile& file) { return Mapper(file).run(); }

StepImport import_step(const std::filesystem::path& path) { return step_to_model(read_step(path)); }

}  // namespace mfr
