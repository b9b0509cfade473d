#pragma once

// Closed-form evaluation of the five analytic surface kinds: normals,
// projection, parameterization and ray intersection.

#include <optional>
#include <vector>

#include "mfr/brep.hpp"

namespace mfr {

/// Geometric (unsensed) unit normal at a point on or near the surface.
Vec3 surface_normal(const SurfaceGeometry& s, const Vec3& p);

/// Closest point on the (untrimmed) surface.
Vec3 project_to_surface(const SurfaceGeometry& s, const Vec3& p);

double distance_to_surface(const SurfaceGeometry& s, const Vec3& p);

struct AxisLine {
  Vec3 origin;
  Vec3 dir;
};

/// Axis of a rotational surface.
std::optional<AxisLine> surface_axis(const SurfaceGeometry& s);

/// Parameter-space chart. Angular coordinates are in radians; `periodic_u` /
/// `periodic_v` report a 2*pi period.
struct SurfaceChart {
  bool periodic_u = false;
  bool periodic_v = false;
};

SurfaceChart chart_of(const SurfaceGeometry& s);

/// (u, v) parameters of a point: plane (x, y) in a deterministic in-plane
/// frame; cylinder/cone (angle, height along axis); sphere (longitude,
/// latitude); torus (major angle, minor angle).
Vec2 to_param(const SurfaceGeometry& s, const Vec3& p);
Vec3 from_param(const SurfaceGeometry& s, const Vec2& uv);

/// Ray parameters t in (t_min, t_max) where origin + t*dir meets the surface.
/// `dir` must be unit length. Results are sorted ascending.
std::vector<double> intersect_ray(const SurfaceGeometry& s, const Vec3& origin, const Vec3& dir,
                                  double t_min, double t_max);

/// Apply a rigid motion (rotation about `axis` through the origin, then
/// translation) to a surface.
SurfaceGeometry transform_surface(const SurfaceGeometry& s, const Vec3& axis, double angle,
                                  const Vec3& translation);

/// Uniform scale about the origin.
SurfaceGeometry scale_surface(const SurfaceGeometry& s, double factor);

}  // namespace mfr
