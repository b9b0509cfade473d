#include "mfr/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mfr {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Radial unit direction of `p` away from an axis, or a frame vector on the axis.
Vec3 radial_dir(const Vec3& origin, const Vec3& axis, const Vec3& p) {
  const Vec3 q = p - origin;
  const Vec3 r = q - axis * dot(q, axis);
  const double n = norm(r);
  if (n > 1e-300) return r / n;
  Vec3 u, v;
  orthonormal_frame(axis, u, v);
  return u;
}

void sorted_push(std::vector<double>& out, double t, double t_min, double t_max) {
  if (t > t_min && t < t_max) out.push_back(t);
}

void solve_quadratic(double a, double b, double c, double t_min, double t_max,
                     std::vector<double>& out) {
  if (std::fabs(a) < 1e-300) {
    if (std::fabs(b) > 1e-300) sorted_push(out, -c / b, t_min, t_max);
    return;
  }
  const double disc = b * b - 4 * a * c;
  if (disc < 0) return;
  const double sq = std::sqrt(disc);
  // Numerically stable pair.
  const double q = -0.5 * (b + std::copysign(sq, b));
  const double t1 = q / a;
  const double t2 = std::fabs(q) > 1e-300 ? c / q : t1;
  sorted_push(out, t1, t_min, t_max);
  if (std::fabs(t2 - t1) > 0) sorted_push(out, t2, t_min, t_max);
}

double torus_implicit(const Torus& t, const Vec3& p) {
  const Vec3 q = p - t.center;
  const double h = dot(q, t.axis_dir);
  const Vec3 radial = q - t.axis_dir * h;
  const double rho = norm(radial) - t.major_radius;
  return rho * rho + h * h - t.minor_radius * t.minor_radius;
}

}  // namespace

Vec3 surface_normal(const SurfaceGeometry& s, const Vec3& p) {
  return std::visit(
      Overloaded{
          [](const Plane& pl) { return normalized(pl.normal); },
          [&](const Cylinder& c) { return radial_dir(c.axis_origin, c.axis_dir, p); },
          [&](const Cone& c) {
            const Vec3 r = radial_dir(c.apex, c.axis_dir, p);
            // Outward normal tilts against the axis by the half angle.
            return normalized(r * std::cos(c.half_angle) - c.axis_dir * std::sin(c.half_angle));
          },
          [&](const Sphere& sp) {
            const Vec3 d = p - sp.center;
            return norm(d) > 1e-300 ? normalized(d) : Vec3{0, 0, 1};
          },
          [&](const Torus& t) {
            const Vec3 r = radial_dir(t.center, t.axis_dir, p);
            const Vec3 tube_center = t.center + r * t.major_radius;
            const Vec3 d = p - tube_center;
            return norm(d) > 1e-300 ? normalized(d) : r;
          },
      },
      s);
}

Vec3 project_to_surface(const SurfaceGeometry& s, const Vec3& p) {
  return std::visit(
      Overloaded{
          [&](const Plane& pl) {
            const Vec3 n = normalized(pl.normal);
            return p - n * dot(p - pl.origin, n);
          },
          [&](const Cylinder& c) {
            const Vec3 q = p - c.axis_origin;
            const double h = dot(q, c.axis_dir);
            return c.axis_origin + c.axis_dir * h + radial_dir(c.axis_origin, c.axis_dir, p) * c.radius;
          },
          [&](const Cone& c) {
            const Vec3 r = radial_dir(c.apex, c.axis_dir, p);
            const Vec3 gen = normalized(c.axis_dir * std::cos(c.half_angle) + r * std::sin(c.half_angle));
            const double along = std::max(0.0, dot(p - c.apex, gen));
            return c.apex + gen * along;
          },
          [&](const Sphere& sp) {
            return sp.center + surface_normal(s, p) * sp.radius;
          },
          [&](const Torus& t) {
            const Vec3 r = radial_dir(t.center, t.axis_dir, p);
            const Vec3 tube_center = t.center + r * t.major_radius;
            const Vec3 d = normalized(p - tube_center);
            return tube_center + (norm(d) > 0 ? d : r) * t.minor_radius;
          },
      },
      s);
}

double distance_to_surface(const SurfaceGeometry& s, const Vec3& p) {
  return distance(p, project_to_surface(s, p));
}

std::optional<AxisLine> surface_axis(const SurfaceGeometry& s) {
  return std::visit(Overloaded{
                        [](const Plane&) -> std::optional<AxisLine> { return std::nullopt; },
                        [](const Sphere&) -> std::optional<AxisLine> { return std::nullopt; },
                        [](const Cylinder& c) -> std::optional<AxisLine> {
                          return AxisLine{c.axis_origin, c.axis_dir};
                        },
                        [](const Cone& c) -> std::optional<AxisLine> {
                          return AxisLine{c.apex, c.axis_dir};
                        },
                        [](const Torus& t) -> std::optional<AxisLine> {
                          return AxisLine{t.center, t.axis_dir};
                        },
                    },
                    s);
}

SurfaceChart chart_of(const SurfaceGeometry& s) {
  return std::visit(Overloaded{
                        [](const Plane&) { return SurfaceChart{false, false}; },
                        [](const Cylinder&) { return SurfaceChart{true, false}; },
                        [](const Cone&) { return SurfaceChart{true, false}; },
                        [](const Sphere&) { return SurfaceChart{true, false}; },
                        [](const Torus&) { return SurfaceChart{true, true}; },
                    },
                    s);
}

Vec2 to_param(const SurfaceGeometry& s, const Vec3& p) {
  return std::visit(
      Overloaded{
          [&](const Plane& pl) {
            Vec3 u, v;
            orthonormal_frame(normalized(pl.normal), u, v);
            const Vec3 q = p - pl.origin;
            return Vec2{dot(q, u), dot(q, v)};
          },
          [&](const Cylinder& c) {
            Vec3 u, v;
            orthonormal_frame(c.axis_dir, u, v);
            const Vec3 q = p - c.axis_origin;
            return Vec2{std::atan2(dot(q, v), dot(q, u)), dot(q, c.axis_dir)};
          },
          [&](const Cone& c) {
            Vec3 u, v;
            orthonormal_frame(c.axis_dir, u, v);
            const Vec3 q = p - c.apex;
            return Vec2{std::atan2(dot(q, v), dot(q, u)), dot(q, c.axis_dir)};
          },
          [&](const Sphere& sp) {
            const Vec3 q = normalized(p - sp.center);
            return Vec2{std::atan2(q.y, q.x), std::asin(std::clamp(q.z, -1.0, 1.0))};
          },
          [&](const Torus& t) {
            Vec3 u, v;
            orthonormal_frame(t.axis_dir, u, v);
            const Vec3 q = p - t.center;
            const double theta = std::atan2(dot(q, v), dot(q, u));
            const double h = dot(q, t.axis_dir);
            const Vec3 radial = q - t.axis_dir * h;
            const double rho = norm(radial) - t.major_radius;
            return Vec2{theta, std::atan2(h, rho)};
          },
      },
      s);
}

Vec3 from_param(const SurfaceGeometry& s, const Vec2& uv) {
  return std::visit(
      Overloaded{
          [&](const Plane& pl) {
            Vec3 u, v;
            orthonormal_frame(normalized(pl.normal), u, v);
            return pl.origin + u * uv.u + v * uv.v;
          },
          [&](const Cylinder& c) {
            Vec3 u, v;
            orthonormal_frame(c.axis_dir, u, v);
            const Vec3 r = u * std::cos(uv.u) + v * std::sin(uv.u);
            return c.axis_origin + c.axis_dir * uv.v + r * c.radius;
          },
          [&](const Cone& c) {
            Vec3 u, v;
            orthonormal_frame(c.axis_dir, u, v);
            const Vec3 r = u * std::cos(uv.u) + v * std::sin(uv.u);
            return c.apex + c.axis_dir * uv.v + r * (uv.v * std::tan(c.half_angle));
          },
          [&](const Sphere& sp) {
            const Vec3 d{std::cos(uv.v) * std::cos(uv.u), std::cos(uv.v) * std::sin(uv.u),
                         std::sin(uv.v)};
            return sp.center + d * sp.radius;
          },
          [&](const Torus& t) {
            Vec3 u, v;
            orthonormal_frame(t.axis_dir, u, v);
            const Vec3 r = u * std::cos(uv.u) + v * std::sin(uv.u);
            return t.center + r * (t.major_radius + t.minor_radius * std::cos(uv.v)) +
                   t.axis_dir * (t.minor_radius * std::sin(uv.v));
          },
      },
      s);
}

std::vector<double> intersect_ray(const SurfaceGeometry& s, const Vec3& o, const Vec3& d,
                                  double t_min, double t_max) {
  std::vector<double> out;
  std::visit(
      Overloaded{
          [&](const Plane& pl) {
            const Vec3 n = normalized(pl.normal);
            const double denom = dot(d, n);
            if (std::fabs(denom) < 1e-14) return;
            sorted_push(out, dot(pl.origin - o, n) / denom, t_min, t_max);
          },
          [&](const Cylinder& c) {
            const Vec3 q = o - c.axis_origin;
            const Vec3 dp = d - c.axis_dir * dot(d, c.axis_dir);
            const Vec3 qp = q - c.axis_dir * dot(q, c.axis_dir);
            solve_quadratic(dot(dp, dp), 2 * dot(dp, qp), dot(qp, qp) - c.radius * c.radius, t_min,
                            t_max, out);
          },
          [&](const Cone& c) {
            const Vec3 q = o - c.apex;
            const double cos2 = std::cos(c.half_angle) * std::cos(c.half_angle);
            const double da = dot(d, c.axis_dir);
            const double qa = dot(q, c.axis_dir);
            std::vector<double> raw;
            solve_quadratic(da * da - cos2, 2 * (da * qa - cos2 * dot(d, q)),
                            qa * qa - cos2 * dot(q, q), t_min, t_max, raw);
            for (double t : raw) {
              if (qa + t * da >= 0) out.push_back(t);  // keep the +axis nappe
            }
          },
          [&](const Sphere& sp) {
            const Vec3 q = o - sp.center;
            solve_quadratic(1.0, 2 * dot(d, q), dot(q, q) - sp.radius * sp.radius, t_min, t_max,
                            out);
          },
          [&](const Torus& t) {
            // Bracket sign changes of the implicit function on a fine sampling,
            // then bisect. Step is a fraction of the tube radius so no crossing
            // pair is skipped.
            const double span = std::min(t_max, 1e12) - t_min;
            const double step = t.minor_radius / 16.0;
            const int n = static_cast<int>(std::min(2e6, std::ceil(span / step)));
            double prev_t = t_min;
            double prev_f = torus_implicit(t, o + d * prev_t);
            for (int i = 1; i <= n; ++i) {
              const double cur_t = t_min + span * i / n;
              const double cur_f = torus_implicit(t, o + d * cur_t);
              if ((prev_f < 0) != (cur_f < 0)) {
                double lo = prev_t, hi = cur_t, flo = prev_f;
                for (int k = 0; k < 80; ++k) {
                  const double mid = 0.5 * (lo + hi);
                  const double fm = torus_implicit(t, o + d * mid);
                  if ((fm < 0) == (flo < 0)) {
                    lo = mid;
                    flo = fm;
                  } else {
                    hi = mid;
                  }
                }
                sorted_push(out, 0.5 * (lo + hi), t_min, t_max);
              }
              prev_t = cur_t;
              prev_f = cur_f;
            }
          },
      },
      s);
  std::sort(out.begin(), out.end());
  return out;
}

SurfaceGeometry transform_surface(const SurfaceGeometry& s, const Vec3& axis, double angle,
                                  const Vec3& tr) {
  auto pt = [&](const Vec3& p) { return rotate(p, axis, angle) + tr; };
  auto dir = [&](const Vec3& v) { return normalized(rotate(v, axis, angle)); };
  return std::visit(Overloaded{
                        [&](const Plane& p) -> SurfaceGeometry {
                          return Plane{pt(p.origin), dir(p.normal)};
                        },
                        [&](const Cylinder& c) -> SurfaceGeometry {
                          return Cylinder{pt(c.axis_origin), dir(c.axis_dir), c.radius};
                        },
                        [&](const Cone& c) -> SurfaceGeometry {
                          return Cone{pt(c.apex), dir(c.axis_dir), c.half_angle};
                        },
                        [&](const Sphere& sp) -> SurfaceGeometry {
                          return Sphere{pt(sp.center), sp.radius};
                        },
                        [&](const Torus& t) -> SurfaceGeometry {
                          return Torus{pt(t.center), dir(t.axis_dir), t.major_radius,
                                       t.minor_radius};
                        },
                    },
                    s);
}

SurfaceGeometry scale_surface(const SurfaceGeometry& s, double f) {
  return std::visit(Overloaded{
                        [&](const Plane& p) -> SurfaceGeometry { return Plane{p.origin * f, p.normal}; },
                        [&](const Cylinder& c) -> SurfaceGeometry {
                          return Cylinder{c.axis_origin * f, c.axis_dir, c.radius * f};
                        },
                        [&](const Cone& c) -> SurfaceGeometry {
                          return Cone{c.apex * f, c.axis_dir, c.half_angle};
                        },
                        [&](const Sphere& sp) -> SurfaceGeometry {
                          return Sphere{sp.center * f, sp.radius * f};
                        },
                        [&](const Torus& t) -> SurfaceGeometry {
                          return Torus{t.center * f, t.axis_dir, t.major_radius * f,
                                       t.minor_radius * f};
                        },
                    },
                    s);
}

}  // namespace mfr
