#pragma once

// Analytic boundary-representation model: five surface kinds, line and
// circular-arc edges, explicit loop/coedge topology.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mfr/vec3.hpp"

namespace mfr {

// ---------------------------------------------------------------------------
// Surfaces

struct Plane {
  Vec3 origin;
  Vec3 normal;
};

struct Cylinder {
  Vec3 axis_origin;
  Vec3 axis_dir;
  double radius = 0.0;
};

/// Single nappe opening along +axis_dir from the apex.
struct Cone {
  Vec3 apex;
  Vec3 axis_dir;
  double half_angle = 0.0;
};

struct Sphere {
  Vec3 center;
  double radius = 0.0;
};

struct Torus {
  Vec3 center;
  Vec3 axis_dir;
  double major_radius = 0.0;
  double minor_radius = 0.0;
};

using SurfaceGeometry = std::variant<Plane, Cylinder, Cone, Sphere, Torus>;

enum class FaceType { Plan, Cyli, Coni, Sphe, Toro, Any };

std::string_view to_string(FaceType t);
std::optional<FaceType> face_type_from_string(std::string_view s);

FaceType face_type_of(const SurfaceGeometry& s);

/// Cylinder, cone and torus have an axis; planes and spheres do not.
bool is_rotational(const SurfaceGeometry& s);

// ---------------------------------------------------------------------------
// Topology

struct Vertex {
  int id = 0;
  Vec3 point;
};

struct LineCurve {};

/// Arc swept counter-clockwise about `axis` from the edge's start vertex to its
/// end vertex. Equal start and end vertices denote a full circle.
struct CircularArc {
  Vec3 center;
  Vec3 axis;
  double radius = 0.0;
};

using Curve = std::variant<LineCurve, CircularArc>;

struct Edge {
  int id = 0;
  Curve curve;
  int start_vertex = 0;
  int end_vertex = 0;
};

struct Coedge {
  int edge_id = 0;
  bool reversed = false;

  bool operator==(const Coedge&) const = default;
};

enum class LoopKind { Outer, Inner };

std::string_view to_string(LoopKind k);

/// Outer loops run counter-clockwise about the face's outward normal, inner
/// loops clockwise; the face interior is on the left of every coedge.
struct Loop {
  LoopKind kind = LoopKind::Outer;
  std::vector<Coedge> coedges;
};

struct Face {
  int id = 0;
  SurfaceGeometry surface;
  /// True when the surface's geometric normal is the outward material normal.
  bool sense = true;
  std::vector<Loop> loops;
};

struct Shell {
  std::vector<int> face_ids;
};

/// One use of an edge by a face loop.
struct EdgeUse {
  int face_id = 0;
  std::size_t loop_index = 0;
  std::size_t coedge_index = 0;
  bool reversed = false;
};

/// Immutable B-rep solid. Lookup tables are built on construction; all
/// queries are const and safe to share between threads.
class Model {
 public:
  Model() = default;
  Model(std::string length_unit, std::vector<Vertex> vertices, std::vector<Edge> edges,
        std::vector<Face> faces, std::vector<Shell> shells = {});

  const std::string& length_unit() const { return length_unit_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<Shell>& shells() const { return shells_; }

  bool has_face(int id) const { return face_index_.count(id) != 0; }
  bool has_edge(int id) const { return edge_index_.count(id) != 0; }
  bool has_vertex(int id) const { return vertex_index_.count(id) != 0; }

  /// Throws UnknownFace.
  const Face& face(int id) const;
  /// Throws TopologyError for unknown ids.
  const Edge& edge(int id) const;
  const Vertex& vertex(int id) const;

  const std::vector<EdgeUse>& edge_uses(int edge_id) const;

  /// Index into shells() of the shell owning `face_id`.
  std::size_t shell_of(int face_id) const;

  /// Diagonal of the axis-aligned box around all vertices (1 for empty models).
  double bbox_diagonal() const { return diagonal_; }

 private:
  std::string length_unit_ = "mm";
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
  std::vector<Shell> shells_;
  std::unordered_map<int, std::size_t> vertex_index_;
  std::unordered_map<int, std::size_t> edge_index_;
  std::unordered_map<int, std::size_t> face_index_;
  std::unordered_map<int, std::vector<EdgeUse>> uses_;
  std::unordered_map<int, std::size_t> face_shell_;
  double diagonal_ = 1.0;
};

// ---------------------------------------------------------------------------
// Edge geometry

/// Angular sweep of an arc edge in (0, 2*pi].
double arc_sweep(const Model& m, const Edge& e);

/// Point at normalized parameter t in [0, 1] along the edge's own direction.
Vec3 edge_point(const Model& m, const Edge& e, double t);

/// Unit tangent at t along the edge's own direction.
Vec3 edge_tangent(const Model& m, const Edge& e, double t);

/// Point and tangent at t along a coedge (respecting its orientation).
Vec3 coedge_point(const Model& m, const Coedge& c, double t);
Vec3 coedge_tangent(const Model& m, const Coedge& c, double t);

int coedge_start_vertex(const Model& m, const Coedge& c);
int coedge_end_vertex(const Model& m, const Coedge& c);

// ---------------------------------------------------------------------------
// Validation and queries

struct Diagnostic {
  std::string entity;  // "face", "loop", "edge", "vertex", "surface", "model"
  int id = 0;
  std::string message;
};

/// Empty iff the model is a valid closed manifold with consistent geometry.
/// Loop ids are reported as face_id * 100 + loop index.
std::vector<Diagnostic> validate_topology(const Model& m);

std::string format_diagnostics(const std::vector<Diagnostic>& diags);

struct Adjacency {
  int face_id = 0;
  Coedge coedge;  // the queried face's coedge on the shared edge
};

/// Mate faces across every coedge of the selected loop kind, one entry per
/// shared edge. Seam edges used twice by the same face are skipped.
std::vector<Adjacency> adjacent_faces(const Model& m, int face_id, LoopKind kind);

/// The other face's use of the coedge's edge; nullopt on a seam.
std::optional<EdgeUse> mate_use(const Model& m, int face_id, const Coedge& c);

// ---------------------------------------------------------------------------
// JSON interchange (schema_version 1)

inline constexpr int kModelSchemaVersion = 1;

/// Throws SchemaError on malformed input and TopologyError when validation fails.
Model model_from_json(std::string_view text);
Model load_model(const std::filesystem::path& path);

std::string model_to_json(const Model& m);
void save_model(const Model& m, const std::filesystem::path& path);

}  // namespace mfr
