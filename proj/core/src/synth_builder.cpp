#include <cmath>

#include "mfr/errors.hpp"
#include "mfr/surface.hpp"
#include "synth_internal.hpp"

namespace mfr::synth {

namespace {

constexpr int kSamplesPerSegment = 16;

double signed_area(const LoopSegs& loop, const Vec3& n) {
  Vec3 e1, e2;
  orthonormal_frame(normalized(n), e1, e2);
  std::vector<Vec2> pts;
  for (const Segment& s : loop) {
    for (int k = 0; k < kSamplesPerSegment; ++k) {
      const Vec3 p = segment_point(s, static_cast<double>(k) / kSamplesPerSegment);
      pts.push_back({dot(p, e1), dot(p, e2)});
    }
  }
  double a = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % pts.size()];
    a += p.u * q.v - q.u * p.v;
  }
  return 0.5 * a;
}

Vec3 axis_point(const SurfaceGeometry& s) {
  if (const auto* c = std::get_if<Cylinder>(&s)) return c->axis_origin;
  if (const auto* c = std::get_if<Cone>(&s)) return c->apex;
  if (const auto* t = std::get_if<Torus>(&s)) return t->center;
  throw InvalidDimensions("patch needs a cylinder, cone or torus");
}

Vec3 axis_dir(const SurfaceGeometry& s) {
  if (const auto* c = std::get_if<Cylinder>(&s)) return normalized(c->axis_dir);
  if (const auto* c = std::get_if<Cone>(&s)) return normalized(c->axis_dir);
  if (const auto* t = std::get_if<Torus>(&s)) return normalized(t->axis_dir);
  throw InvalidDimensions("patch needs a cylinder, cone or torus");
}

bool full_turn(double ua, double ub) { return std::abs(ub - ua - 2 * kPi) < 1e-9; }

}  // namespace

LoopSegs oriented(const LoopSegs& loop, const Vec3& n, bool ccw) {
  const bool is_ccw = signed_area(loop, n) > 0;
  return is_ccw == ccw ? loop : reversed(loop);
}

FaceRecipe plane_face(const Vec3& outward, std::vector<LoopSegs> loops) {
  if (loops.empty() || loops.front().empty()) throw InvalidDimensions("planar face without boundary");
  const Vec3 n = normalized(outward);
  for (std::size_t i = 0; i < loops.size(); ++i) loops[i] = oriented(loops[i], n, i == 0);
  return {Plane{loops.front().front().from, n}, true, std::move(loops)};
}

Segment iso_v(const SurfaceGeometry& s, double v, double ua, double ub) {
  const Vec3 a = from_param(s, {ua, v});
  const Vec3 b = full_turn(ua, ub) ? a : from_param(s, {ub, v});
  const Vec3 o = axis_point(s);
  const Vec3 d = axis_dir(s);
  return arc_seg(a, b, o + d * dot(a - o, d), d);
}

Segment iso_u(const SurfaceGeometry& s, double u, double va, double vb) {
  const auto* t = std::get_if<Torus>(&s);
  if (!t) return line_seg(from_param(s, {u, va}), from_param(s, {u, vb}));
  if (vb < va) return reversed(iso_u(s, u, vb, va));
  Vec3 e1, e2;
  orthonormal_frame(normalized(t->axis_dir), e1, e2);
  const Vec3 radial = e1 * std::cos(u) + e2 * std::sin(u);
  return arc_seg(from_param(s, {u, va}), from_param(s, {u, vb}), t->center + radial * t->major_radius,
                 cross(radial, normalized(t->axis_dir)));
}

FaceRecipe patch(const SurfaceGeometry& s, bool sense, double u0, double u1, double v0, double v1,
                 int pieces0, int pieces1) {
  if (!(u1 > u0) || !(v1 > v0)) throw InvalidDimensions("empty parameter patch");
  auto chain = [&](double v, int pieces) {
    LoopSegs out;
    const double step = (u1 - u0) / pieces;
    for (int k = 0; k < pieces; ++k) out.push_back(iso_v(s, v, u0 + k * step, u0 + (k + 1) * step));
    if (full_turn(u0, u1) && pieces > 1) out.back().to = out.front().from;
    return out;
  };
  LoopSegs loop = chain(v0, pieces0);
  loop.push_back(iso_u(s, u1, v0, v1));
  for (const Segment& seg : reversed(chain(v1, pieces1))) loop.push_back(seg);
  loop.push_back(iso_u(s, u0, v1, v0));
  if (!sense) loop = reversed(loop);
  return {s, sense, {std::move(loop)}};
}

LoopSegs circle_at(const SurfaceGeometry& s, double v, double u0, int pieces) {
  LoopSegs out;
  const double step = 2 * kPi / pieces;
  for (int k = 0; k < pieces; ++k) out.push_back(iso_v(s, v, u0 + k * step, u0 + (k + 1) * step));
  if (pieces > 1) out.back().to = out.front().from;
  return out;
}

double angle_of(const SurfaceGeometry& s, const Vec3& p) { return to_param(s, p).u; }

int pieces_of(HoleRepresentation rep) { return rep == HoleRepresentation::TwoHalfCylinders ? 2 : 1; }

std::vector<int> bore(Cut& cut, const Cylinder& cyl, double z0, double z1, int pieces) {
  std::vector<int> ids;
  const double step = 2 * kPi / pieces;
  for (int k = 0; k < pieces; ++k) ids.push_back(cut.add(patch(cyl, false, k * step, (k + 1) * step, z0, z1)));
  return ids;
}

double dim(const FeatureSpec& spec, const char* key, double fallback) {
  const auto it = spec.dims.find(key);
  return it == spec.dims.end() ? fallback : it->second;
}

}  // namespace mfr::synth
