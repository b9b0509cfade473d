#include "mfr/geom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "mfr/errors.hpp"
#include "mfr/surface.hpp"

namespace mfr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBig = 1e9;

double unwrap_near(double x, double ref) {
  while (x - ref > kPi) x -= kTwoPi;
  while (x - ref < -kPi) x += kTwoPi;
  return x;
}

int arc_samples(double sweep) {
  return std::max(4, static_cast<int>(std::ceil(96.0 * sweep / kTwoPi)));
}

/// Band loops wrap once around a periodic direction without closing. Replicate
/// them over several periods and close the chain far out on the other axis so
/// even-odd counting still works.
std::vector<Vec2> close_band(const std::vector<Vec2>& pts, double period_shift, bool along_u) {
  std::vector<Vec2> out;
  for (int k = -2; k <= 2; ++k) {
    for (const Vec2& p : pts) {
      out.push_back(along_u ? Vec2{p.u + k * period_shift, p.v} : Vec2{p.u, p.v + k * period_shift});
    }
  }
  const Vec2 last = out.back();
  const Vec2 first = out.front();
  if (along_u) {
    out.push_back({last.u, kBig});
    out.push_back({first.u, kBig});
  } else {
    out.push_back({kBig, last.v});
    out.push_back({kBig, first.v});
  }
  return out;
}

bool even_odd(const std::vector<Vec2>& poly, Vec2 q) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.v > q.v) != (b.v > q.v)) {
      const double x = a.u + (q.v - a.v) * (b.u - a.u) / (b.v - a.v);
      if (q.u < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

std::string_view to_string(Convexity c) { return c == Convexity::Convex ? "CONVEX" : "CONCAVE"; }

std::string_view to_string(ContinuityClass c) { return c == ContinuityClass::C0 ? "C0" : "HIGHER"; }

std::string_view to_string(AngleClass a) {
  switch (a) {
    case AngleClass::Parallel: return "PARALLEL";
    case AngleClass::Perpendicular: return "PERPENDICULAR";
    case AngleClass::Acute: return "ACUTE";
    case AngleClass::Obtuse: return "OBTUSE";
  }
  return "PARALLEL";
}

void validate(const Tolerances& tol) {
  if (!(tol.angular > 0) || !(tol.length_rel > 0) || !(tol.ray_epsilon > 0)) {
    throw SchemaError("tolerances must be positive");
  }
}

// ---------------------------------------------------------------------------
// GeomContext

GeomContext::GeomContext(const Model& m, Tolerances tol) : model_(&m), tol_(tol) {
  validate(tol_);
  for (const Face& f : m.faces()) {
    const SurfaceChart chart = chart_of(f.surface);
    FaceData fd;
    fd.vmin = std::numeric_limits<double>::max();
    fd.vmax = std::numeric_limits<double>::lowest();
    for (std::size_t li = 0; li < f.loops.size(); ++li) {
      std::vector<Vec3> pts3;
      for (const Coedge& c : f.loops[li].coedges) {
        const Edge& e = m.edge(c.edge_id);
        const int n = std::holds_alternative<LineCurve>(e.curve) ? 1 : arc_samples(arc_sweep(m, e));
        for (int i = 0; i < n; ++i) pts3.push_back(coedge_point(m, c, static_cast<double>(i) / n));
      }
      if (li == 0) fd.outer3d = pts3;
      std::vector<Vec2> poly;
      poly.reserve(pts3.size());
      for (const Vec3& p : pts3) {
        Vec2 uv = to_param(f.surface, p);
        if (!poly.empty()) {
          if (chart.periodic_u) uv.u = unwrap_near(uv.u, poly.back().u);
          if (chart.periodic_v) uv.v = unwrap_near(uv.v, poly.back().v);
        }
        poly.push_back(uv);
        fd.vmin = std::min(fd.vmin, uv.v);
        fd.vmax = std::max(fd.vmax, uv.v);
      }
      if (poly.empty()) continue;
      const Vec2 first = poly.front();
      const Vec2 last = poly.back();
      const double du = chart.periodic_u ? unwrap_near(first.u, last.u) - first.u : 0.0;
      const double dv = chart.periodic_v ? unwrap_near(first.v, last.v) - first.v : 0.0;
      if (std::fabs(du) > kPi) {
        poly = close_band(poly, -du, true);
      } else if (std::fabs(dv) > kPi) {
        poly = close_band(poly, -dv, false);
      }
      fd.polys.push_back(std::move(poly));
    }
    index_.emplace(f.id, faces_.size());
    face_ids_.push_back(f.id);
    faces_.push_back(std::move(fd));
  }

  // Centers need contains_param, which needs every polygon in place.
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    FaceData& fd = faces_[i];
    const int fid = face_ids_[i];
    if (fd.polys.empty()) continue;
    const auto& outer = fd.polys.front();
    double a2 = 0, cu = 0, cv = 0;
    for (std::size_t k = 0, j = outer.size() - 1; k < outer.size(); j = k++) {
      const double cr = outer[j].u * outer[k].v - outer[k].u * outer[j].v;
      a2 += cr;
      cu += (outer[j].u + outer[k].u) * cr;
      cv += (outer[j].v + outer[k].v) * cr;
    }
    const bool band = std::any_of(outer.begin(), outer.end(), [](const Vec2& p) {
      return std::fabs(p.u) >= kBig || std::fabs(p.v) >= kBig;
    });
    if (!band && std::fabs(a2) > 1e-300) {
      const Vec2 c{cu / (3.0 * a2), cv / (3.0 * a2)};
      if (contains_param(fd, fid, c)) {
        fd.center = c;
        continue;
      }
    }
    // Fall back to the widest interior span on a few horizontal scanlines.
    bool found = false;
    double best = -1;
    for (double frac : {0.5, 0.25, 0.75, 0.375, 0.625, 0.125, 0.875}) {
      const double v = fd.vmin + (fd.vmax - fd.vmin) * frac;
      std::vector<double> xs;
      for (const auto& poly : fd.polys) {
        for (std::size_t k = 0, j = poly.size() - 1; k < poly.size(); j = k++) {
          const Vec2& a = poly[k];
          const Vec2& b = poly[j];
          if ((a.v > v) != (b.v > v)) xs.push_back(a.u + (v - a.v) * (b.u - a.u) / (b.v - a.v));
        }
      }
      std::sort(xs.begin(), xs.end());
      for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const double w = xs[k + 1] - xs[k];
        const Vec2 mid{0.5 * (xs[k] + xs[k + 1]), v};
        if (w > best && std::fabs(mid.u) < kBig && contains_param(fd, fid, mid)) {
          best = w;
          fd.center = mid;
          found = true;
        }
      }
      if (found) break;
    }
    if (!found) fd.center = outer.front();
  }
}

const GeomContext::FaceData& GeomContext::data(int face_id) const {
  if (auto it = index_.find(face_id); it != index_.end()) return faces_[it->second];
  throw UnknownFace("unknown face " + std::to_string(face_id));
}

bool GeomContext::contains_param(const FaceData& fd, int face_id, Vec2 uv) const {
  const SurfaceChart chart = chart_of(model_->face(face_id).surface);
  const int ku = chart.periodic_u ? 1 : 0;
  const int kv = chart.periodic_v ? 1 : 0;
  for (int i = -ku; i <= ku; ++i) {
    for (int j = -kv; j <= kv; ++j) {
      const Vec2 q{uv.u + i * kTwoPi, uv.v + j * kTwoPi};
      bool inside = false;
      for (const auto& poly : fd.polys) {
        if (even_odd(poly, q)) inside = !inside;
      }
      if (inside) return true;
    }
  }
  return false;
}

bool GeomContext::point_in_face(int face_id, const Vec3& p) const {
  const Face& f = model_->face(face_id);
  return contains_param(data(face_id), face_id, to_param(f.surface, p));
}

Vec3 GeomContext::face_center(int face_id) const {
  return from_param(model_->face(face_id).surface, data(face_id).center);
}

Vec3 GeomContext::sensed_normal(int face_id, const Vec3& p) const {
  const Face& f = model_->face(face_id);
  const Vec3 n = surface_normal(f.surface, p);
  return f.sense ? n : -n;
}

const std::vector<Vec3>& GeomContext::outer_samples(int face_id) const { return data(face_id).outer3d; }

std::pair<double, double> GeomContext::v_range(int face_id) const {
  const FaceData& fd = data(face_id);
  return {fd.vmin, fd.vmax};
}

int GeomContext::crossings(const Vec3& p, const Vec3& dir, std::size_t shell) const {
  const double reach = 10.0 * model_->bbox_diagonal() + norm(p);
  int count = 0;
  for (int fid : model_->shells()[shell].face_ids) {
    const Face& f = model_->face(fid);
    for (double t : intersect_ray(f.surface, p, dir, 0.0, reach)) {
      if (point_in_face(fid, p + dir * t)) ++count;
    }
  }
  return count;
}

bool GeomContext::point_in_solid(const Vec3& p, std::size_t shell) const {
  // Skewed directions make edge and tangent hits unlikely; vote to absorb one.
  static const std::array<Vec3, 3> dirs = {normalized(Vec3{0.5773, 0.6123, 0.5402}),
                                           normalized(Vec3{-0.7071, 0.3162, 0.6325}),
                                           normalized(Vec3{0.2673, -0.8018, 0.5345})};
  int votes = 0;
  for (const Vec3& d : dirs) votes += crossings(p, d, shell) % 2;
  return votes >= 2;
}

}  // namespace mfr

namespace mfr {

// ---------------------------------------------------------------------------
// Predicates

namespace {

EdgeUse require_mate(const Model& m, int face_a, int face_b, const Coedge& c) {
  const auto mate = mate_use(m, face_a, c);
  if (!mate || mate->face_id != face_b) {
    throw NotAdjacent("faces " + std::to_string(face_a) + " and " + std::to_string(face_b) +
                      " do not share edge " + std::to_string(c.edge_id));
  }
  return *mate;
}

Vec3 mate_coedge_tangent(const Model& m, const EdgeUse& u, double t_of_a) {
  const Coedge& cb = m.face(u.face_id).loops[u.loop_index].coedges[u.coedge_index];
  return coedge_tangent(m, cb, 1.0 - t_of_a);
}

}  // namespace

Convexity convexity(const GeomContext& ctx, int face_a, int face_b, const Coedge& coedge_of_a) {
  const Model& m = ctx.model();
  const EdgeUse mate = require_mate(m, face_a, face_b, coedge_of_a);
  const Vec3 p = coedge_point(m, coedge_of_a, 0.5);
  const Vec3 na = ctx.sensed_normal(face_a, p);
  const Vec3 nb = ctx.sensed_normal(face_b, p);
  const Vec3 dc = coedge_tangent(m, coedge_of_a, 0.5);
  const double s = dot(dc, cross(na, nb));
  if (s > ctx.tolerances().angular) return Convexity::Convex;
  if (s < -ctx.tolerances().angular) return Convexity::Concave;

  // Tangent faces: step into each face, then ask whether the chord between
  // the two probes runs through material.
  const double diag = m.bbox_diagonal();
  const Vec3 db = mate_coedge_tangent(m, mate, 0.5);
  const Face& fa = m.face(face_a);
  const Face& fb = m.face(face_b);
  for (double step : {1e-3, 1e-2, 3e-2}) {
    const double delta = step * diag;
    const Vec3 pa = project_to_surface(fa.surface, p + normalized(cross(na, dc)) * delta);
    const Vec3 pb = project_to_surface(fb.surface, p + normalized(cross(nb, db)) * delta);
    const Vec3 mid = (pa + pb) * 0.5;
    const double sag = std::min(distance_to_surface(fa.surface, mid), distance_to_surface(fb.surface, mid));
    if (sag <= 10.0 * ctx.length_tol()) continue;
    return ctx.point_in_solid(mid, m.shell_of(face_a)) ? Convexity::Convex : Convexity::Concave;
  }
  return Convexity::Convex;
}

ContinuityClass continuity(const GeomContext& ctx, int face_a, int face_b, int edge_id) {
  const Model& m = ctx.model();
  bool shared = false;
  for (const EdgeUse& u : m.edge_uses(edge_id)) {
    if (u.face_id == face_b) shared = true;
  }
  bool on_a = false;
  for (const EdgeUse& u : m.edge_uses(edge_id)) {
    if (u.face_id == face_a) on_a = true;
  }
  if (!shared || !on_a) {
    throw NotAdjacent("faces " + std::to_string(face_a) + " and " + std::to_string(face_b) +
                      " do not share edge " + std::to_string(edge_id));
  }
  const Edge& e = m.edge(edge_id);
  for (double t : {0.25, 0.5, 0.75}) {
    const Vec3 p = edge_point(m, e, t);
    if (angle_between(ctx.sensed_normal(face_a, p), ctx.sensed_normal(face_b, p)) > ctx.tolerances().angular) {
      return ContinuityClass::C0;
    }
  }
  return ContinuityClass::Higher;
}

Vec3 base_vector(const GeomContext& ctx, int face_id) {
  const Face& f = ctx.model().face(face_id);
  if (auto axis = surface_axis(f.surface)) return normalized(axis->dir);
  return ctx.sensed_normal(face_id, ctx.face_center(face_id));
}

AngleClass angle_class(const Vec3& v1, const Vec3& v2, double angular_tol, bool fold) {
  if (norm(v1) < 1e-12 || norm(v2) < 1e-12) throw ZeroVector("angle_class on a zero-length vector");
  double theta = angle_between(v1, v2);
  if (fold && theta > kPi / 2) theta = kPi - theta;
  if (theta <= angular_tol) return AngleClass::Parallel;
  if (std::fabs(theta - kPi / 2) <= angular_tol) return AngleClass::Perpendicular;
  return theta < kPi / 2 ? AngleClass::Acute : AngleClass::Obtuse;
}

bool coaxial(const GeomContext& ctx, int face_1, int face_2) {
  const auto a1 = surface_axis(ctx.model().face(face_1).surface);
  const auto a2 = surface_axis(ctx.model().face(face_2).surface);
  if (!a1 || !a2) return false;
  const Vec3 d1 = normalized(a1->dir);
  const Vec3 d2 = normalized(a2->dir);
  double theta = angle_between(d1, d2);
  theta = std::min(theta, kPi - theta);
  if (theta > ctx.tolerances().angular) return false;
  const Vec3 off = a2->origin - a1->origin;
  return norm(off - d1 * dot(off, d1)) <= ctx.length_tol();
}

ParallelPair parallel_pair(const GeomContext& ctx, int face_id) {
  const Model& m = ctx.model();
  std::vector<int> planes;
  for (const Adjacency& a : adjacent_faces(m, face_id, LoopKind::Outer)) {
    if (std::holds_alternative<Plane>(m.face(a.face_id).surface) &&
        std::find(planes.begin(), planes.end(), a.face_id) == planes.end()) {
      planes.push_back(a.face_id);
    }
  }
  ParallelPair best;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    for (std::size_t j = i + 1; j < planes.size(); ++j) {
      const Face& f1 = m.face(planes[i]);
      const Face& f2 = m.face(planes[j]);
      const auto& p1 = std::get<Plane>(f1.surface);
      const auto& p2 = std::get<Plane>(f2.surface);
      const Vec3 n1 = normalized(f1.sense ? p1.normal : -p1.normal);
      const Vec3 n2 = normalized(f2.sense ? p2.normal : -p2.normal);
      if (angle_between(n1, -n2) > ctx.tolerances().angular) continue;
      const double w = dot(p2.origin - p1.origin, n1);
      if (w <= ctx.length_tol()) continue;
      if (!best.found || w < *best.width) {
        best.found = true;
        best.width = w;
        best.face_1 = f1.id;
        best.face_2 = f2.id;
      }
    }
  }
  return best;
}

double min_rect_short_side(std::vector<Vec2> pts) {
  if (pts.size() < 2) return 0.0;
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.u < b.u || (a.u == b.u && a.v < b.v);
  });
  auto turn = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
  };
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  if (hull.size() < 3) {
    return 0.0;
  }
  double best_area = std::numeric_limits<double>::max();
  double best_short = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.u - a.u, b.v - a.v);
    if (len <= 0) continue;
    const double ex = (b.u - a.u) / len, ey = (b.v - a.v) / len;
    double lo_s = 0, hi_s = 0, lo_t = 0, hi_t = 0;
    for (const Vec2& p : hull) {
      const double s = (p.u - a.u) * ex + (p.v - a.v) * ey;
      const double t = -(p.u - a.u) * ey + (p.v - a.v) * ex;
      lo_s = std::min(lo_s, s);
      hi_s = std::max(hi_s, s);
      lo_t = std::min(lo_t, t);
      hi_t = std::max(hi_t, t);
    }
    const double w = hi_s - lo_s, h = hi_t - lo_t;
    if (w * h < best_area) {
      best_area = w * h;
      best_short = std::min(w, h);
    }
  }
  return best_short;
}

double face_width(const GeomContext& ctx, int face_id) {
  const Face& f = ctx.model().face(face_id);
  if (const auto* c = std::get_if<Cylinder>(&f.surface)) return c->radius;
  if (const auto* s = std::get_if<Sphere>(&f.surface)) return s->radius;
  if (const auto* t = std::get_if<Torus>(&f.surface)) return t->minor_radius;
  if (const auto* cone = std::get_if<Cone>(&f.surface)) {
    const auto [lo, hi] = ctx.v_range(face_id);
    return (hi - lo) / std::cos(cone->half_angle);
  }
  std::vector<Vec2> pts;
  for (const Vec3& p : ctx.outer_samples(face_id)) pts.push_back(to_param(f.surface, p));
  return min_rect_short_side(std::move(pts));
}

bool interference(const GeomContext& ctx, int face_id) {
  const Model& m = ctx.model();
  const Vec3 c = ctx.face_center(face_id);
  const Vec3 n = normalized(ctx.sensed_normal(face_id, c));
  const double diag = m.bbox_diagonal();
  const Vec3 origin = c + n * (ctx.tolerances().ray_epsilon * diag);
  for (int fid : m.shells()[m.shell_of(face_id)].face_ids) {
    if (fid == face_id) continue;
    const Face& f = m.face(fid);
    for (double t : intersect_ray(f.surface, origin, n, 0.0, 10.0 * diag)) {
      if (ctx.point_in_face(fid, origin + n * t)) return true;
    }
  }
  return false;
}

}  // namespace mfr
