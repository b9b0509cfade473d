#include <cmath>
#include <string>

#include "mfr/errors.hpp"
#include "mfr/surface.hpp"
#include "synth_internal.hpp"

namespace mfr::synth {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidDimensions(what);
}

std::vector<int> all_faces(const Cut& cut) {
  std::vector<int> out(cut.faces.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(i);
  return out;
}

LoopSegs rect_x(double x, double y0, double y1, double z0, double z1) {
  return polygon({{x, y0, z0}, {x, y1, z0}, {x, y1, z1}, {x, y0, z1}});
}
LoopSegs rect_y(double y, double x0, double x1, double z0, double z1) {
  return polygon({{x0, y, z0}, {x1, y, z0}, {x1, y, z1}, {x0, y, z1}});
}
LoopSegs rect_z(double z, double x0, double x1, double y0, double y1) {
  return polygon({{x0, y0, z}, {x1, y0, z}, {x1, y1, z}, {x0, y1, z}});
}

/// Plain block faces; the edge features below overwrite some of them.
struct BlockFaces {
  std::vector<Frame::TopPiece> top;
  LoopSegs bottom;
  std::vector<std::pair<Vec3, LoopSegs>> sides;  // outward normal, outline
};

BlockFaces plain_block(const CuboidStock& s) {
  BlockFaces b;
  b.top.push_back({rect_z(s.h, 0, s.w, 0, s.l), {0, 0, s.w, s.l}});
  b.bottom = rect_z(0, 0, s.w, 0, s.l);
  b.sides = {{-kY, rect_y(0, 0, s.w, 0, s.h)},
             {kY, rect_y(s.l, 0, s.w, 0, s.h)},
             {-kX, rect_x(0, 0, s.l, 0, s.h)},
             {kX, rect_x(s.w, 0, s.l, 0, s.h)}};
  return b;
}

// Rounded or bevelled edge between the top face and the y = 0 face.
void edge_treatment(const FeatureSpec& spec, const CuboidStock& s, BlockFaces& b, Cut& cut) {
  const bool round = spec.feature == FeatureType::OuterFillet;
  const double r = dim(spec, round ? "radius" : "size", round ? 4 : 3);
  require(r > 0 && r < s.h && r < s.l, "edge treatment larger than the stock");
  b.top = {{rect_z(s.h, 0, s.w, r, s.l), {0, r, s.w, s.l}}};
  b.sides[0].second = rect_y(0, 0, s.w, 0, s.h - r);
  for (const int side : {2, 3}) {
    const double x = side == 2 ? 0 : s.w;
    const Vec3 a{x, r, s.h}, c{x, 0, s.h - r};
    LoopSegs loop{line_seg({x, 0, 0}, {x, s.l, 0}), line_seg({x, s.l, 0}, {x, s.l, s.h}), line_seg({x, s.l, s.h}, a)};
    loop.push_back(round ? arc_seg(a, c, {x, r, s.h - r}, kX) : line_seg(a, c));
    loop.push_back(line_seg(c, {x, 0, 0}));
    b.sides[side].second = loop;
  }
  int face = 0;
  if (round) {
    const Cylinder cyl{{0, r, s.h - r}, kX, r};
    const double u0 = angle_of(cyl, {0, r, s.h});
    face = cut.add(patch(cyl, true, u0, u0 + kPi / 2, 0, s.w));
  } else {
    face = cut.add(plane_face(normalized(Vec3{0, -1, 1}), {polygon({{0, r, s.h}, {s.w, r, s.h}, {s.w, 0, s.h - r}, {0, 0, s.h - r}})}));
  }
  cut.truth.push_back({spec.feature, {face}, {face}});
}

// Channel running along x across the whole block, optionally with an island
// standing on its floor.
void channel(const FeatureSpec& spec, const CuboidStock& s, BlockFaces& b, Cut& cut) {
  const double w = dim(spec, "width", 40), d = dim(spec, "depth", 12);
  const double y0 = spec.y - w / 2, y1 = spec.y + w / 2, zf = s.h - d;
  require(w > 0 && d > 0 && d < s.h && y0 > 0 && y1 < s.l, "channel does not fit the stock");
  b.top = {{rect_z(s.h, 0, s.w, 0, y0), {0, 0, s.w, y0}}, {rect_z(s.h, 0, s.w, y1, s.l), {0, y1, s.w, s.l}}};
  for (const int side : {2, 3}) {
    const double x = side == 2 ? 0 : s.w;
    b.sides[side].second = polygon({{x, 0, 0}, {x, s.l, 0}, {x, s.l, s.h}, {x, y1, s.h}, {x, y1, zf}, {x, y0, zf},
                                    {x, y0, s.h}, {x, 0, s.h}});
  }
  cut.add(plane_face(kY, {rect_y(y0, 0, s.w, zf, s.h)}));
  cut.add(plane_face(-kY, {rect_y(y1, 0, s.w, zf, s.h)}));
  std::vector<LoopSegs> floor_loops{rect_z(zf, 0, s.w, y0, y1)};
  const bool island = spec.feature == FeatureType::OpenedIsland;
  if (island) {
    const double ix = dim(spec, "island_length", 16), iy = dim(spec, "island_width", 12);
    const double ih = dim(spec, "island_height", 8);
    const double x0 = spec.x - ix / 2, x1 = spec.x + ix / 2, iy0 = spec.y - iy / 2, iy1 = spec.y + iy / 2;
    require(ix > 0 && iy > 0 && x0 > 0 && x1 < s.w && iy0 > y0 && iy1 < y1, "island must fit inside the channel");
    require(ih > 0 && ih < d, "island height out of range");
    const double zi = zf + ih;
    floor_loops.push_back(rect_z(zf, x0, x1, iy0, iy1));
    cut.add(plane_face(-kY, {rect_y(iy0, x0, x1, zf, zi)}));
    cut.add(plane_face(kY, {rect_y(iy1, x0, x1, zf, zi)}));
    cut.add(plane_face(-kX, {rect_x(x0, iy0, iy1, zf, zi)}));
    cut.add(plane_face(kX, {rect_x(x1, iy0, iy1, zf, zi)}));
    cut.add(plane_face(kZ, {rect_z(zi, x0, x1, iy0, iy1)}));
  }
  const int floor = cut.add(plane_face(kZ, floor_loops));
  cut.truth.push_back({FeatureType::OpenedPocket, {floor}, all_faces(cut)});
  if (island) cut.truth.push_back({FeatureType::OpenedIsland, {floor}, all_faces(cut)});
}

// Through-thickness slot entering the block from the x = w face.
void notch(const FeatureSpec& spec, const CuboidStock& s, BlockFaces& b, Cut& cut) {
  const double w = dim(spec, "width", 10), dx = dim(spec, "length", 15);
  const double y0 = spec.y - w / 2, y1 = spec.y + w / 2, xe = s.w - dx;
  require(w > 0 && dx > 0 && xe > 0 && y0 > 0 && y1 < s.l, "notch does not fit the stock");
  auto outline = [&](double z) {
    return polygon({{0, 0, z}, {s.w, 0, z}, {s.w, y0, z}, {xe, y0, z}, {xe, y1, z}, {s.w, y1, z}, {s.w, s.l, z}, {0, s.l, z}});
  };
  b.top = {{outline(s.h), {0, 0, xe, s.l}}};
  b.bottom = outline(0);
  b.sides[3].second = rect_x(s.w, 0, y0, 0, s.h);
  b.sides.push_back({kX, rect_x(s.w, y1, s.l, 0, s.h)});
  cut.add(plane_face(kY, {rect_y(y0, xe, s.w, 0, s.h)}));
  cut.add(plane_face(-kY, {rect_y(y1, xe, s.w, 0, s.h)}));
  const int end = cut.add(plane_face(kX, {rect_x(xe, y0, y1, 0, s.h)}));
  cut.truth.push_back({FeatureType::FloorlessSlot, {end}, all_faces(cut)});
}

// Counterbore whose large bore breaks through the x = w face: the bore is two
// partial cylinders split opposite the opening and the annulus is open on
// that side.
void breakout_counterbore(const FeatureSpec& spec, const CuboidStock& s, BlockFaces& b, Cut& cut) {
  const double r1 = dim(spec, "large_radius", 14), d1 = dim(spec, "large_depth", 10);
  const double r2 = dim(spec, "small_radius", 7), off = dim(spec, "offset", 8);
  require(r2 > 0 && r2 < off && off < r1, "breakout needs small_radius < offset < large_radius");
  require(d1 > 0 && d1 < s.h, "counterbore depth out of range");
  const double cx = s.w - off, cy = spec.y, zc = s.h - d1;
  require(cy - r1 > 0 && cy + r1 < s.l && cx - r1 > 0, "counterbore does not fit the stock");
  const Cylinder large{{cx, cy, 0}, kZ, r1};
  const Cylinder small{{cx, cy, 0}, kZ, r2};
  const double theta = std::acos(off / r1);
  const double ua = angle_of(large, {s.w, cy + r1 * std::sin(theta), 0});
  const double um = ua + kPi - theta, ue = ua + 2 * kPi - 2 * theta;
  const Segment top1 = iso_v(large, s.h, ua, um), top2 = iso_v(large, s.h, um, ue);
  const Segment low1 = iso_v(large, zc, ua, um), low2 = iso_v(large, zc, um, ue);
  const Vec3 pb_top = top1.from, pa_top = top2.to, pb_low = low1.from, pa_low = low2.to;

  b.top = {{LoopSegs{top1, top2, line_seg(pa_top, {s.w, 0, s.h}), line_seg({s.w, 0, s.h}, {0, 0, s.h}),
                     line_seg({0, 0, s.h}, {0, s.l, s.h}), line_seg({0, s.l, s.h}, {s.w, s.l, s.h}),
                     line_seg({s.w, s.l, s.h}, pb_top)},
            {0, 0, s.w, s.l}}};
  b.sides[3].second = polygon({{s.w, 0, 0}, {s.w, s.l, 0}, {s.w, s.l, s.h}, pb_top, pb_low, pa_low, pa_top, {s.w, 0, s.h}});

  const int pieces = pieces_of(spec.representation);
  cut.add(patch(large, false, ua, um, zc, s.h));
  cut.add(patch(large, false, um, ue, zc, s.h));
  const int annulus = cut.add(plane_face(kZ, {LoopSegs{low1, low2, line_seg(pa_low, pb_low)}, circle_at(small, zc, 0, pieces)}));
  bore(cut, small, 0, zc, pieces);
  cut.bottom_loops.push_back(circle_at(small, 0, 0, pieces));
  cut.truth.push_back({FeatureType::CounterboreHole, {annulus}, all_faces(cut)});
  cut.footprint = {cx - r1, cy - r1, s.w, cy + r1};
}

}  // namespace

bool is_boundary_feature(const FeatureSpec& spec, bool rotational) {
  switch (spec.feature) {
    case FeatureType::OuterFillet:
    case FeatureType::OuterChamfer: return true;
    case FeatureType::OpenedPocket:
    case FeatureType::OpenedIsland:
    case FeatureType::FloorlessSlot: return !rotational;
    case FeatureType::CounterboreHole: return !rotational && spec.variant == "breakout";
    default: return false;
  }
}

Frame cuboid_frame(const CuboidStock& s, const std::vector<FeatureSpec>& edge) {
  require(s.w > 0 && s.l > 0 && s.h > 0, "stock dimensions must be positive");
  if (edge.size() > 1) throw PlacementError("a cuboid part takes at most one boundary feature");
  BlockFaces b = plain_block(s);
  Frame f;
  f.top_z = s.h;
  if (!edge.empty()) {
    const FeatureSpec& spec = edge.front();
    switch (spec.feature) {
      case FeatureType::OuterFillet:
      case FeatureType::OuterChamfer: edge_treatment(spec, s, b, f.cut); break;
      case FeatureType::OpenedPocket:
      case FeatureType::OpenedIsland: channel(spec, s, b, f.cut); break;
      case FeatureType::FloorlessSlot: notch(spec, s, b, f.cut); break;
      default: breakout_counterbore(spec, s, b, f.cut); f.reserved.push_back(f.cut.footprint); break;
    }
  }
  f.top = b.top;
  f.bottom = b.bottom;
  for (auto& [n, loop] : b.sides) f.sides.push_back(plane_face(n, {loop}));
  return f;
}

Frame rotational_frame(const RotationalStock& s, const std::vector<FeatureSpec>& edge) {
  require(s.radius > 0 && s.height > 0, "stock dimensions must be positive");
  const FeatureSpec* chamfer = nullptr;
  const FeatureSpec* fillet = nullptr;
  for (const FeatureSpec& e : edge) {
    const FeatureSpec*& slot = e.feature == FeatureType::OuterChamfer ? chamfer : fillet;
    if (slot) throw PlacementError("each rim takes at most one treatment");
    slot = &e;
  }
  const double c = chamfer ? dim(*chamfer, "size", 3) : 0;
  const double rho = fillet ? dim(*fillet, "radius", 4) : 0;
  require(c >= 0 && rho >= 0 && c + rho < s.height && c < s.radius && rho < s.radius, "rim treatment larger than the stock");
  const int pieces = s.split_wall ? 2 : 1;
  const Cylinder wall{{0, 0, 0}, kZ, s.radius};
  Frame f;
  f.top_z = s.height;
  f.disk_radius = s.radius - c;
  const double step = 2 * kPi / pieces;
  for (int k = 0; k < pieces; ++k) f.sides.push_back(patch(wall, true, k * step, (k + 1) * step, rho, s.height - c));

  if (chamfer) {
    const Cone cone{{0, 0, s.height - c + s.radius}, -kZ, kPi / 4};
    const double u0 = angle_of(cone, from_param(wall, {0, s.height - c}));
    const int face = f.cut.add(patch(cone, true, u0, u0 + 2 * kPi, s.radius - c, s.radius, 1, pieces));
    f.cut.truth.push_back({FeatureType::OuterChamfer, {face}, {face}});
    f.top.push_back({circle_at(cone, s.radius - c, u0, 1), {-f.disk_radius, -f.disk_radius, f.disk_radius, f.disk_radius}});
  } else {
    f.top.push_back({circle_at(wall, s.height, 0, pieces), {-s.radius, -s.radius, s.radius, s.radius}});
  }
  if (fillet) {
    const Torus torus{{0, 0, rho}, kZ, s.radius - rho, rho};
    const int face = f.cut.add(patch(torus, true, 0, 2 * kPi, -kPi / 2, 0, 1, pieces));
    f.cut.truth.push_back({FeatureType::OuterFillet, {face}, {face}});
    f.bottom = circle_at(torus, -kPi / 2, 0, 1);
  } else {
    f.bottom = circle_at(wall, 0, 0, pieces);
  }
  return f;
}

}  // namespace mfr::synth
