#pragma once

// Geometric predicates and measurements over a Model: convexity, continuity,
// angle classes, coaxiality, parallel wall pairs, face width and ray
// interference.

#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mfr/brep.hpp"

namespace mfr {

enum class Convexity { Convex, Concave };
enum class ContinuityClass { C0, Higher };
enum class AngleClass { Parallel, Perpendicular, Acute, Obtuse };

std::string_view to_string(Convexity c);
std::string_view to_string(ContinuityClass c);
std::string_view to_string(AngleClass a);

struct Tolerances {
  double angular = 1e-6;      // radians
  double length_rel = 1e-7;   // times the model bounding-box diagonal
  double ray_epsilon = 1e-6;  // ray origin offset, times the diagonal
};

/// Throws SchemaError unless every tolerance is positive.
void validate(const Tolerances& tol);

/// Precomputed parameter-space boundaries for every face. Construction is the
/// only mutation; every query is const.
class GeomContext {
 public:
  explicit GeomContext(const Model& m, Tolerances tol = {});

  const Model& model() const { return *model_; }
  const Tolerances& tolerances() const { return tol_; }
  double length_tol() const { return tol_.length_rel * model_->bbox_diagonal(); }

  /// `p` is assumed to lie on the face's surface.
  bool point_in_face(int face_id, const Vec3& p) const;

  /// Even-odd ray parity against the faces of one shell.
  bool point_in_solid(const Vec3& p, std::size_t shell) const;

  /// Interior point of the face at its parameter-domain center.
  Vec3 face_center(int face_id) const;

  /// Outward material normal at a point of the face.
  Vec3 sensed_normal(int face_id, const Vec3& p) const;

  /// Sampled outer-loop boundary in 3D.
  const std::vector<Vec3>& outer_samples(int face_id) const;

  /// Extent of the face's parameter polygon along v (all loops).
  std::pair<double, double> v_range(int face_id) const;

 private:
  struct FaceData {
    std::vector<std::vector<Vec2>> polys;  // closed, unwrapped
    std::vector<Vec3> outer3d;
    Vec2 center;
    double vmin = 0, vmax = 0;
  };
  const FaceData& data(int face_id) const;
  bool contains_param(const FaceData& fd, int face_id, Vec2 uv) const;
  int crossings(const Vec3& p, const Vec3& dir, std::size_t shell) const;

  const Model* model_;
  Tolerances tol_;
  std::vector<FaceData> faces_;
  std::vector<int> face_ids_;
  std::unordered_map<int, std::size_t> index_;
};

/// Dihedral sign at the shared edge's midpoint: CONVEX iff d_c . (n_a x n_b) > 0,
/// where d_c is F_a's coedge direction. Tangent faces fall back to a chord
/// probe: CONVEX when the chord between points just inside each face runs
/// through material. Throws NotAdjacent.
Convexity convexity(const GeomContext& ctx, int face_a, int face_b, const Coedge& coedge_of_a);

/// HIGHER iff the sensed normals agree at three points along the edge.
ContinuityClass continuity(const GeomContext& ctx, int face_a, int face_b, int edge_id);

/// Axis of rotational faces; sensed normal at the face center otherwise.
Vec3 base_vector(const GeomContext& ctx, int face_id);

/// Angle between two vectors, folded to [0, pi/2] unless `fold` is false.
/// Throws ZeroVector.
AngleClass angle_class(const Vec3& v1, const Vec3& v2, double angular_tol, bool fold = true);

bool coaxial(const GeomContext& ctx, int face_1, int face_2);

struct ParallelPair {
  bool found = false;
  std::optional<double> width;
  int face_1 = 0;
  int face_2 = 0;
};

/// Closest pair of outer-loop planar neighbours whose sensed normals are
/// anti-parallel and face each other.
ParallelPair parallel_pair(const GeomContext& ctx, int face_id);

/// Radius for cylinders and spheres, minor radius for tori, slant length for
/// cones, and the short side of the minimum-area bounding rectangle for planes.
double face_width(const GeomContext& ctx, int face_id);

/// True iff a ray from the face center along the sensed normal meets another
/// face of the same shell.
bool interference(const GeomContext& ctx, int face_id);

/// Short side of the minimum-area rectangle enclosing the points.
double min_rect_short_side(std::vector<Vec2> pts);

}  // namespace mfr
