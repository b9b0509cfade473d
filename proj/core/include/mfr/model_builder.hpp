#pragma once

// Incremental construction of a Model from face boundaries given as chains of
// geometric segments. Shared vertices and edges are merged by position, so
// callers describe each face independently.

#include <optional>
#include <string>
#include <vector>

#include "mfr/brep.hpp"

namespace mfr {

struct Segment {
  Vec3 from;
  Vec3 to;
  /// Unset for a straight line. For arcs the sweep runs counter-clockwise
  /// about `arc->axis` from `from` to `to`; from == to is a full circle.
  std::optional<CircularArc> arc;
};

Segment line_seg(const Vec3& a, const Vec3& b);
Segment arc_seg(const Vec3& a, const Vec3& b, const Vec3& center, const Vec3& axis);

/// Angle swept by an arc segment in (0, 2pi]; 0 for lines.
double segment_sweep(const Segment& s);
/// Point at fraction t of the segment (arc length for arcs).
Vec3 segment_point(const Segment& s, double t);
Segment reversed(const Segment& s);
std::vector<Segment> reversed(const std::vector<Segment>& loop);

/// Closed polygon through the points in order.
std::vector<Segment> polygon(const std::vector<Vec3>& pts);

class ModelBuilder {
 public:
  explicit ModelBuilder(double merge_tol = 1e-7) : tol_(merge_tol) {}

  /// Adds a face; loops[0] is the outer loop, the rest are inner loops.
  /// Returns the new face id (1-based, sequential).
  int add_face(const SurfaceGeometry& surface, bool sense,
               const std::vector<std::vector<Segment>>& loops);

  /// Faces added after this call belong to a new shell.
  void start_shell();

  int face_count() const { return static_cast<int>(faces_.size()); }

  Model build(std::string length_unit = "mm") const;

 private:
  int vertex_for(const Vec3& p);
  Coedge coedge_for(const Segment& s);

  double tol_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Vec3> edge_mid_;
  std::vector<Face> faces_;
  std::vector<Shell> shells_{Shell{}};
};

}  // namespace mfr
