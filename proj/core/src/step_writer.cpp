#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "mfr/step.hpp"

namespace mfr {

namespace {

/// Part 21 real: shortest round-trip form that always carries a '.'.
std::string real(double x) {
  if (x == 0.0) x = 0.0;  // drop negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17G", x);
  std::string s = buf;
  for (int prec = 1; prec < 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*G", prec, x);
    if (std::strtod(buf, nullptr) == x) {
      s = buf;
      break;
    }
  }
  if (s.find('.') == std::string::npos) {
    const auto e = s.find('E');
    s.insert(e == std::string::npos ? s.size() : e, ".");
  }
  return s;
}

std::string quoted(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

std::string flag(bool b) { return b ? ".T." : ".F."; }

class Writer {
 public:
  int add(const std::string& keyword, const std::string& args) {
    const int id = next_++;
    body_ << '#' << id << '=' << keyword << '(' << args << ");\n";
    return id;
  }

  static std::string ref(int id) { return '#' + std::to_string(id); }

  static std::string refs(const std::vector<int>& ids) {
    std::string out = "(";
    for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + ref(ids[i]);
    return out + ")";
  }

  int point(const Vec3& p) { return add("CARTESIAN_POINT", "''," + triple(p)); }
  int direction(const Vec3& d) { return add("DIRECTION", "''," + triple(d)); }

  int placement(const Vec3& origin, const Vec3& axis) {
    Vec3 u, v;
    orthonormal_frame(axis, u, v);
    const int p = point(origin), a = direction(axis), r = direction(u);
    return add("AXIS2_PLACEMENT_3D", "''," + ref(p) + "," + ref(a) + "," + ref(r));
  }

  std::string body() const { return body_.str(); }

 private:
  static std::string triple(const Vec3& p) { return "(" + real(p.x) + "," + real(p.y) + "," + real(p.z) + ")"; }

  std::ostringstream body_;
  int next_ = 1;
};

int write_surface(Writer& w, const SurfaceGeometry& s) {
  return std::visit(
      [&](const auto& g) -> int {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Plane>) {
          return w.add("PLANE", "''," + Writer::ref(w.placement(g.origin, g.normal)));
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return w.add("CYLINDRICAL_SURFACE",
                       "''," + Writer::ref(w.placement(g.axis_origin, g.axis_dir)) + "," + real(g.radius));
        } else if constexpr (std::is_same_v<T, Cone>) {
          return w.add("CONICAL_SURFACE",
                       "''," + Writer::ref(w.placement(g.apex, g.axis_dir)) + ",0.," + real(g.half_angle));
        } else if constexpr (std::is_same_v<T, Sphere>) {
          return w.add("SPHERICAL_SURFACE", "''," + Writer::ref(w.placement(g.center, {0, 0, 1})) + "," + real(g.radius));
        } else {
          return w.add("TOROIDAL_SURFACE", "''," + Writer::ref(w.placement(g.center, g.axis_dir)) + "," +
                                               real(g.major_radius) + "," + real(g.minor_radius));
        }
      },
      s);
}

}  // namespace

std::string model_to_step(const Model& m, const std::string& name) {
  Writer w;
  std::map<int, int> vertex_ids, edge_ids;
  for (const Vertex& v : m.vertices()) {
    vertex_ids[v.id] = w.add("VERTEX_POINT", "''," + Writer::ref(w.point(v.point)));
  }
  for (const Edge& e : m.edges()) {
    const Vec3 a = m.vertex(e.start_vertex).point;
    int curve = 0;
    if (const auto* arc = std::get_if<CircularArc>(&e.curve)) {
      curve = w.add("CIRCLE", "''," + Writer::ref(w.placement(arc->center, arc->axis)) + "," + real(arc->radius));
    } else {
      const Vec3 d = m.vertex(e.end_vertex).point - a;
      const int p = w.point(a);
      const int vec = w.add("VECTOR", "''," + Writer::ref(w.direction(normalized(d))) + "," + real(norm(d)));
      curve = w.add("LINE", "''," + Writer::ref(p) + "," + Writer::ref(vec));
    }
    edge_ids[e.id] = w.add("EDGE_CURVE", "''," + Writer::ref(vertex_ids.at(e.start_vertex)) + "," +
                                             Writer::ref(vertex_ids.at(e.end_vertex)) + "," + Writer::ref(curve) + ",.T.");
  }
  std::map<int, int> face_ids;
  for (const Face& f : m.faces()) {
    std::vector<int> bounds;
    for (const Loop& l : f.loops) {
      std::vector<int> oriented;
      for (const Coedge& c : l.coedges) {
        oriented.push_back(w.add("ORIENTED_EDGE", "'',*,*," + Writer::ref(edge_ids.at(c.edge_id)) + "," + flag(!c.reversed)));
      }
      const int loop = w.add("EDGE_LOOP", "''," + Writer::refs(oriented));
      bounds.push_back(w.add(l.kind == LoopKind::Outer ? "FACE_OUTER_BOUND" : "FACE_BOUND", "''," + Writer::ref(loop) + ",.T."));
    }
    const int surf = write_surface(w, f.surface);
    face_ids[f.id] = w.add("ADVANCED_FACE", "''," + Writer::refs(bounds) + "," + Writer::ref(surf) + "," + flag(f.sense));
  }
  std::vector<Shell> shells = m.shells();
  if (shells.empty()) {
    Shell all;
    for (const Face& f : m.faces()) all.face_ids.push_back(f.id);
    shells.push_back(all);
  }
  for (const Shell& s : shells) {
    std::vector<int> ids;
    for (int fid : s.face_ids) ids.push_back(face_ids.at(fid));
    const int shell = w.add("CLOSED_SHELL", "''," + Writer::refs(ids));
    w.add("MANIFOLD_SOLID_BREP", quoted(name) + "," + Writer::ref(shell));
  }

  std::ostringstream out;
  out << "ISO-10303-21;\nHEADER;\n"
      << "FILE_DESCRIPTION(('analytic B-rep'),'2;1');\n"
      << "FILE_NAME(" << quoted(name) << ",'',(''),(''),'mfr','mfr','');\n"
      << "FILE_SCHEMA(('AUTOMOTIVE_DESIGN'));\n"
      << "ENDSEC;\nDATA;\n"
      << w.body() << "ENDSEC;\nEND-ISO-10303-21;\n";
  return out.str();
}

}  // namespace mfr
