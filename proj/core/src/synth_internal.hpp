#pragma once

// Face construction helpers shared by the fixture generators.

#include <numbers>
#include <vector>

#include "mfr/model_builder.hpp"
#include "mfr/synth.hpp"

namespace mfr::synth {

inline constexpr double kPi = std::numbers::pi;
inline constexpr Vec3 kX{1, 0, 0};
inline constexpr Vec3 kY{0, 1, 0};
inline constexpr Vec3 kZ{0, 0, 1};

using LoopSegs = std::vector<Segment>;

struct FaceRecipe {
  SurfaceGeometry surface;
  bool sense = true;
  std::vector<LoopSegs> loops;
};

/// Planar face with the given outward normal. loops[0] is made
/// counter-clockwise about the normal, the others clockwise.
FaceRecipe plane_face(const Vec3& outward, std::vector<LoopSegs> loops);

/// Reorders a chain so it runs counter-clockwise (ccw) or clockwise about n.
LoopSegs oriented(const LoopSegs& loop, const Vec3& n, bool ccw);

/// Patch [u0,u1] x [v0,v1] of a cylinder, cone or torus. A full turn in u
/// closes on a seam edge used twice. The v0 and v1 boundaries are split into
/// `pieces0` and `pieces1` equal arcs so they can meet split neighbours.
FaceRecipe patch(const SurfaceGeometry& s, bool sense, double u0, double u1, double v0, double v1,
                 int pieces0 = 1, int pieces1 = 1);

/// Arc at constant v from u = ua to u = ub (ub > ua), counter-clockwise about
/// the surface axis.
Segment iso_v(const SurfaceGeometry& s, double v, double ua, double ub);
/// Generator line (cylinder, cone) or minor arc (torus) at constant u.
Segment iso_u(const SurfaceGeometry& s, double u, double va, double vb);

/// Full circle at v split into `pieces` arcs starting at u0.
LoopSegs circle_at(const SurfaceGeometry& s, double v, double u0, int pieces);

double angle_of(const SurfaceGeometry& s, const Vec3& p);

/// Axis-aligned footprint on the top face used for placement checks.
struct Box2 {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool overlaps(const Box2& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
};

struct TruthRecipe {
  FeatureType feature = FeatureType::SimpleHole;
  std::vector<int> base;     // indices into Cut::faces
  std::vector<int> members;  // indices into Cut::faces
};

/// Geometry one feature contributes: its own faces, loops cut into the host
/// top and bottom faces, and truth records.
struct Cut {
  std::vector<LoopSegs> top_loops;
  std::vector<LoopSegs> bottom_loops;
  std::vector<FaceRecipe> faces;
  std::vector<TruthRecipe> truth;
  Box2 footprint;

  int add(FaceRecipe f) {
    faces.push_back(std::move(f));
    return static_cast<int>(faces.size()) - 1;
  }
};

/// Interior features are placed on a flat top face at z = top above a flat
/// bottom face at z = bottom.
struct Host {
  double top = 0, bottom = 0;
};

double dim(const FeatureSpec& spec, const char* key, double fallback);

int pieces_of(HoleRepresentation rep);

/// Cylinder wall of a hole between z0 and z1 (axis +z), split into `pieces`
/// faces starting at parameter angle 0.
std::vector<int> bore(Cut& cut, const Cylinder& cyl, double z0, double z1, int pieces);

/// Interior features; throw InvalidDimensions for impossible sizes.
Cut interior_cut(const FeatureSpec& spec, const Host& host);

/// Stock faces of a part plus any feature that reshapes the stock boundary.
/// Interior cuts add inner loops to one of the top pieces and to the bottom.
struct Frame {
  struct TopPiece {
    LoopSegs outline;
    Box2 region;
  };
  std::vector<TopPiece> top;
  LoopSegs bottom;
  std::vector<FaceRecipe> sides;
  Cut cut;                     // faces and truth of the boundary features
  std::vector<Box2> reserved;  // top-face areas already used
  double disk_radius = 0;      // rotational stock: interior footprints must fit this disk
  double top_z = 0;
};

/// `edge` holds the boundary-reshaping features of the part (possibly none).
Frame cuboid_frame(const CuboidStock& stock, const std::vector<FeatureSpec>& edge);
Frame rotational_frame(const RotationalStock& stock, const std::vector<FeatureSpec>& edge);

/// True when the feature reshapes the stock boundary rather than cutting
/// into the top face.
bool is_boundary_feature(const FeatureSpec& spec, bool rotational);

}  // namespace mfr::synth
