#include <algorithm>
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

Segment lift(const Segment& s, double z) {
  Segment out = s;
  out.from.z += z;
  out.to.z += z;
  if (out.arc) out.arc->center.z += z;
  return out;
}

LoopSegs lift(const LoopSegs& loop, double z) {
  LoopSegs out;
  for (const Segment& s : loop) out.push_back(lift(s, z));
  return out;
}

Box2 circle_box(double x, double y, double r) { return {x - r, y - r, x + r, y + r}; }

std::vector<int> all_faces(const Cut& cut) {
  std::vector<int> out(cut.faces.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(i);
  return out;
}

/// Floor at zf, or a through opening in the bottom face.
void close_bottom(Cut& cut, const LoopSegs& at_floor, const LoopSegs& at_bottom, bool through) {
  if (through) {
    cut.bottom_loops.push_back(at_bottom);
  } else {
    cut.add(plane_face(kZ, {at_floor}));
  }
}

Cut simple_hole(const FeatureSpec& spec, const Host& h) {
  const double r = dim(spec, "radius", 8);
  const double depth = dim(spec, "depth", 0);
  const bool through = depth <= 0;
  require(r > 0, "hole radius must be positive");
  require(through || depth < h.top - h.bottom, "blind hole deeper than the stock");
  const Cylinder cyl{{spec.x, spec.y, 0}, kZ, r};
  const int pieces = pieces_of(spec.representation);
  const double zf = through ? h.bottom : h.top - depth;
  Cut cut;
  const std::vector<int> walls = bore(cut, cyl, zf, h.top, pieces);
  cut.top_loops.push_back(circle_at(cyl, h.top, 0, pieces));
  close_bottom(cut, circle_at(cyl, zf, 0, pieces), circle_at(cyl, h.bottom, 0, pieces), through);
  cut.truth.push_back({FeatureType::SimpleHole, walls, all_faces(cut)});
  cut.footprint = circle_box(spec.x, spec.y, r);
  return cut;
}

Cut taper_hole(const FeatureSpec& spec, const Host& h) {
  const double r_top = dim(spec, "top_radius", 10);
  const double r_bot = dim(spec, "bottom_radius", 6);
  require(r_bot > 0 && r_top > r_bot, "taper hole needs top_radius > bottom_radius > 0");
  const double height = h.top - h.bottom;
  const double tan_a = (r_top - r_bot) / height;
  const double z_apex = h.bottom - r_bot / tan_a;
  const Cone cone{{spec.x, spec.y, z_apex}, kZ, std::atan(tan_a)};
  const double v0 = h.bottom - z_apex;
  const double v1 = h.top - z_apex;
  Cut cut;
  const int wall = cut.add(patch(cone, false, 0, 2 * kPi, v0, v1));
  cut.top_loops.push_back(circle_at(cone, v1, 0, 1));
  cut.bottom_loops.push_back(circle_at(cone, v0, 0, 1));
  cut.truth.push_back({FeatureType::TaperHole, {wall}, {wall}});
  cut.footprint = circle_box(spec.x, spec.y, r_top);
  return cut;
}

/// Small hole below a step at z = zc: through to the bottom or blind.
std::vector<int> lower_hole(Cut& cut, const FeatureSpec& spec, const Host& h, const Cylinder& small, double zc) {
  const double depth = dim(spec, "small_depth", 0);
  const bool through = depth <= 0;
  require(through || zc - depth > h.bottom, "small hole deeper than the stock");
  const int pieces = pieces_of(spec.representation);
  const double zf = through ? h.bottom : zc - depth;
  std::vector<int> walls = bore(cut, small, zf, zc, pieces);
  close_bottom(cut, circle_at(small, zf, 0, pieces), circle_at(small, h.bottom, 0, pieces), through);
  return walls;
}

Cut counterbore(const FeatureSpec& spec, const Host& h) {
  const double r1 = dim(spec, "large_radius", 14);
  const double d1 = dim(spec, "large_depth", 10);
  const double r2 = dim(spec, "small_radius", 7);
  require(r2 > 0 && r1 > r2, "counterbore needs large_radius > small_radius > 0");
  require(d1 > 0 && d1 < h.top - h.bottom, "counterbore depth out of range");
  const double zc = h.top - d1;
  const Cylinder large{{spec.x, spec.y, 0}, kZ, r1};
  const Cylinder small{{spec.x, spec.y, 0}, kZ, r2};
  Cut cut;
  bore(cut, large, zc, h.top, 1);
  cut.top_loops.push_back(circle_at(large, h.top, 0, 1));
  const int annulus =
      cut.add(plane_face(kZ, {circle_at(large, zc, 0, 1), circle_at(small, zc, 0, pieces_of(spec.representation))}));
  lower_hole(cut, spec, h, small, zc);
  cut.truth.push_back({FeatureType::CounterboreHole, {annulus}, all_faces(cut)});
  cut.footprint = circle_box(spec.x, spec.y, r1);
  return cut;
}

Cut counterdrilled(const FeatureSpec& spec, const Host& h) {
  const double r1 = dim(spec, "large_radius", 10);
  const double d1 = dim(spec, "large_depth", 8);
  const double r2 = dim(spec, "small_radius", 6);
  const double alpha = dim(spec, "half_angle_deg", 59) * kPi / 180;
  require(r2 > 0 && r1 > r2, "counterdrilled hole needs large_radius > small_radius > 0");
  require(alpha > 0 && alpha < kPi / 2, "cone half angle must lie in (0, 90) degrees");
  const double zc = h.top - d1;
  const double z_apex = zc - r1 / std::tan(alpha);
  const double v_small = r2 / std::tan(alpha);
  const double z_small = z_apex + v_small;
  require(d1 > 0 && z_small > h.bottom, "counterdrilled hole does not fit the stock");
  const Cylinder large{{spec.x, spec.y, 0}, kZ, r1};
  const Cylinder small{{spec.x, spec.y, 0}, kZ, r2};
  const Cone cone{{spec.x, spec.y, z_apex}, kZ, alpha};
  const int pieces = pieces_of(spec.representation);
  Cut cut;
  bore(cut, large, zc, h.top, 1);
  cut.top_loops.push_back(circle_at(large, h.top, 0, 1));
  const int transition = cut.add(patch(cone, false, 0, 2 * kPi, v_small, zc - z_apex, pieces, 1));
  lower_hole(cut, spec, h, small, z_small);
  cut.truth.push_back({FeatureType::CounterdrilledHole, {transition}, all_faces(cut)});
  cut.footprint = circle_box(spec.x, spec.y, r1);
  return cut;
}

Cut countersink(const FeatureSpec& spec, const Host& h) {
  const double r1 = dim(spec, "top_radius", 12);
  const double r2 = dim(spec, "small_radius", 6);
  const double alpha = dim(spec, "half_angle_deg", 45) * kPi / 180;
  require(r2 > 0 && r1 > r2, "countersink needs top_radius > small_radius > 0");
  require(alpha > 0 && alpha < kPi / 2, "cone half angle must lie in (0, 90) degrees");
  const double z_apex = h.top - r1 / std::tan(alpha);
  const double v_small = r2 / std::tan(alpha);
  const double z_small = z_apex + v_small;
  require(z_small > h.bottom, "countersink deeper than the stock");
  const Cone cone{{spec.x, spec.y, z_apex}, kZ, alpha};
  const Cylinder small{{spec.x, spec.y, 0}, kZ, r2};
  Cut cut;
  const int sink = cut.add(patch(cone, false, 0, 2 * kPi, v_small, h.top - z_apex, pieces_of(spec.representation), 1));
  cut.top_loops.push_back(circle_at(cone, h.top - z_apex, 0, 1));
  lower_hole(cut, spec, h, small, z_small);
  cut.truth.push_back({FeatureType::CountersinkHole, {sink}, all_faces(cut)});
  cut.footprint = circle_box(spec.x, spec.y, r1);
  return cut;
}

struct PocketShape {
  std::vector<Vec3> profile;  // counter-clockwise about +z, z = 0
  double depth = 0;           // <= 0: through
  double corner_radius = 0;   // rectangles only
  double chamfer = 0;         // 45 degree chamfer along the first edge, rectangles only
  std::vector<Vec3> island;   // counter-clockwise rectangle, empty = none
  double island_height = 0;
  double hole_radius = 0;     // through hole at the profile centroid, floored pockets only
};

struct PocketFaces {
  int floor = -1;
  std::vector<int> walls, fillets;
  int chamfer = -1;
  std::vector<int> hole;
};

Vec3 left_of(const Vec3& a, const Vec3& b) { return normalized(cross(kZ, b - a)); }

/// Profile of a rectangle with rounded corners: line, arc, line, arc, ...
LoopSegs rounded_profile(const std::vector<Vec3>& p, double r) {
  const std::size_t n = p.size();
  LoopSegs out;
  std::vector<Vec3> t_in(n), t_out(n), centers(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3& prev = p[(k + n - 1) % n];
    const Vec3& next = p[(k + 1) % n];
    const Vec3 l_prev = left_of(prev, p[k]);
    const Vec3 l_next = left_of(p[k], next);
    centers[k] = p[k] + (l_prev + l_next) * r;
    t_in[k] = centers[k] - l_prev * r;
    t_out[k] = centers[k] - l_next * r;
  }
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(arc_seg(t_in[k], t_out[k], centers[k], kZ));
    out.push_back(line_seg(t_out[k], t_in[(k + 1) % n]));
  }
  return out;
}

PocketFaces pocket(Cut& cut, const PocketShape& s, const Host& h) {
  const bool through = s.depth <= 0;
  const double zf = through ? h.bottom : h.top - s.depth;
  require(through || s.depth < h.top - h.bottom, "pocket deeper than the stock");
  require(s.profile.size() >= 3, "pocket profile needs three corners");
  const bool rect = s.profile.size() == 4;
  require(s.corner_radius >= 0 && s.chamfer >= 0, "negative corner treatment");
  require((s.corner_radius == 0 && s.chamfer == 0) || rect, "corner treatments need a rectangular pocket");
  require(s.chamfer == 0 || (!through && s.corner_radius == 0 && s.chamfer < s.depth),
          "chamfer needs a sharp floored pocket deeper than the chamfer");
  PocketFaces out;
  const LoopSegs profile = s.corner_radius > 0 ? rounded_profile(s.profile, s.corner_radius) : polygon(s.profile);
  cut.top_loops.push_back(lift(profile, h.top));

  if (s.chamfer > 0) {
    // Sharp rectangle p0..p3 with a 45 degree strip between the p0-p1 wall and
    // the floor.
    const auto& p = s.profile;
    const double c = s.chamfer;
    const Vec3 in = left_of(p[0], p[1]) * c;
    const Vec3 up{0, 0, zf + c}, top{0, 0, h.top}, fl{0, 0, zf};
    out.walls.push_back(cut.add(plane_face(left_of(p[0], p[1]), {polygon({p[0] + top, p[1] + top, p[1] + up, p[0] + up})})));
    out.chamfer = cut.add(plane_face(normalized(left_of(p[0], p[1]) + kZ),
                                     {polygon({p[0] + up, p[1] + up, p[1] + in + fl, p[0] + in + fl})}));
    out.walls.push_back(cut.add(
        plane_face(left_of(p[1], p[2]), {polygon({p[1] + top, p[2] + top, p[2] + fl, p[1] + in + fl, p[1] + up})})));
    out.walls.push_back(cut.add(plane_face(left_of(p[2], p[3]), {polygon({p[2] + top, p[3] + top, p[3] + fl, p[2] + fl})})));
    out.walls.push_back(cut.add(
        plane_face(left_of(p[3], p[0]), {polygon({p[3] + top, p[0] + top, p[0] + up, p[0] + in + fl, p[3] + fl})})));
    out.floor = cut.add(plane_face(kZ, {polygon({p[0] + in + fl, p[1] + in + fl, p[2] + fl, p[3] + fl})}));
    return out;
  }

  for (const Segment& seg : profile) {
    if (seg.arc) {
      const Cylinder cyl{{seg.arc->center.x, seg.arc->center.y, 0}, kZ, seg.arc->radius};
      const double ua = angle_of(cyl, seg.from);
      out.fillets.push_back(cut.add(patch(cyl, false, ua, ua + segment_sweep(seg), zf, h.top)));
    } else {
      const Vec3 b{0, 0, zf}, t{0, 0, h.top};
      out.walls.push_back(cut.add(
          plane_face(left_of(seg.from, seg.to), {polygon({seg.from + b, seg.to + b, seg.to + t, seg.from + t})})));
    }
  }
  if (through) {
    cut.bottom_loops.push_back(lift(profile, h.bottom));
    return out;
  }
  std::vector<LoopSegs> floor_loops{lift(profile, zf)};
  if (!s.island.empty()) {
    const double zi = zf + s.island_height;
    require(s.island_height > 0 && zi < h.top, "island height out of range");
    const LoopSegs isl = polygon(s.island);
    floor_loops.push_back(lift(isl, zf));
    for (const Segment& seg : isl) {
      cut.add(plane_face(-left_of(seg.from, seg.to),
                         {polygon({seg.from + Vec3{0, 0, zf}, seg.to + Vec3{0, 0, zf}, seg.to + Vec3{0, 0, zi},
                                   seg.from + Vec3{0, 0, zi}})}));
    }
    cut.add(plane_face(kZ, {lift(isl, zi)}));
  }
  if (s.hole_radius > 0) {
    require(s.island.empty(), "floor hole and island cannot share a floor");
    Vec3 c{0, 0, 0};
    for (const Vec3& p : s.profile) c = c + p * (1.0 / static_cast<double>(s.profile.size()));
    const Cylinder cyl{{c.x, c.y, 0}, kZ, s.hole_radius};
    out.hole = bore(cut, cyl, h.bottom, zf, 1);
    floor_loops.push_back(circle_at(cyl, zf, 0, 1));
    cut.bottom_loops.push_back(circle_at(cyl, h.bottom, 0, 1));
  }
  out.floor = cut.add(plane_face(kZ, std::move(floor_loops)));
  return out;
}

std::vector<Vec3> rect(double cx, double cy, double lx, double ly) {
  return {{cx - lx / 2, cy - ly / 2, 0}, {cx + lx / 2, cy - ly / 2, 0}, {cx + lx / 2, cy + ly / 2, 0},
          {cx - lx / 2, cy + ly / 2, 0}};
}

Box2 box_of(const std::vector<Vec3>& pts) {
  Box2 b{1e300, 1e300, -1e300, -1e300};
  for (const Vec3& p : pts) {
    b.x0 = std::min(b.x0, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.x1 = std::max(b.x1, p.x);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

Cut rect_pocket(const FeatureSpec& spec, const Host& h) {
  const bool slot = spec.feature == FeatureType::SimpleSlot;
  const double lx = dim(spec, "length", slot ? 40 : 40);
  const double ly = dim(spec, "width", slot ? 10 : 30);
  require(lx > 0 && ly > 0, "pocket sides must be positive");
  PocketShape s;
  s.profile = rect(spec.x, spec.y, lx, ly);
  s.depth = dim(spec, "depth", slot ? 8 : 12);
  require(s.depth > 0, "pocket depth must be positive");
  s.corner_radius = dim(spec, "corner_radius", spec.feature == FeatureType::InnerFillet ? 3 : 0);
  s.chamfer = dim(spec, "chamfer", spec.feature == FeatureType::InnerChamfer ? 3 : 0);
  s.hole_radius = dim(spec, "hole_radius", 0);
  require(2 * s.corner_radius < std::min(lx, ly), "corner radius too large for the pocket");
  require(2 * s.hole_radius < std::min(lx, ly) - 2 * (s.corner_radius + s.chamfer), "floor hole too large");
  Cut cut;
  const PocketFaces f = pocket(cut, s, h);
  cut.truth.push_back({slot ? FeatureType::SimpleSlot : FeatureType::ClosedPocket, {f.floor}, all_faces(cut)});
  for (int fillet : f.fillets) cut.truth.push_back({FeatureType::InnerFillet, {fillet}, {fillet}});
  if (f.chamfer >= 0) cut.truth.push_back({FeatureType::InnerChamfer, {f.chamfer}, {f.chamfer}});
  if (!f.hole.empty()) cut.truth.push_back({FeatureType::SimpleHole, f.hole, f.hole});
  cut.footprint = box_of(s.profile);
  return cut;
}

// Closed pocket whose floor continues into a slot of the same depth, leaving
// one merged floor face.
Cut merged_slot_pocket(const FeatureSpec& spec, const Host& h) {
  const double lx = dim(spec, "length", 40), ly = dim(spec, "width", 30);
  const double sw = dim(spec, "slot_width", 10), sl = dim(spec, "slot_length", 25);
  require(lx > 0 && ly > 0 && sw > 0 && sl > 0 && sw < ly, "merged slot dimensions out of range");
  const double x0 = spec.x - lx / 2, x1 = spec.x + lx / 2;
  const double y0 = spec.y - ly / 2, y1 = spec.y + ly / 2;
  PocketShape s;
  s.profile = {{x0, y0, 0},           {x1, y0, 0},      {x1, spec.y - sw / 2, 0}, {x1 + sl, spec.y - sw / 2, 0},
               {x1 + sl, spec.y + sw / 2, 0}, {x1, spec.y + sw / 2, 0}, {x1, y1, 0}, {x0, y1, 0}};
  s.depth = dim(spec, "depth", 12);
  Cut cut;
  const PocketFaces f = pocket(cut, s, h);
  cut.truth.push_back({FeatureType::ClosedPocket, {f.floor}, all_faces(cut)});
  cut.truth.push_back({FeatureType::SimpleSlot, {f.floor}, all_faces(cut)});
  cut.footprint = box_of(s.profile);
  return cut;
}

Cut floorless_pocket(const FeatureSpec& spec, const Host& h) {
  const double lx = dim(spec, "length", 40), ly = dim(spec, "width", 30);
  require(lx > 0 && ly > 0, "pocket sides must be positive");
  PocketShape s;
  s.profile = rect(spec.x, spec.y, lx, ly);
  Cut cut;
  const PocketFaces f = pocket(cut, s, h);
  cut.truth.push_back({FeatureType::FloorlessPocket, f.walls, all_faces(cut)});
  cut.footprint = box_of(s.profile);
  return cut;
}

// Square through-passage narrowing towards the bottom; the walls lean back
// so far that a ray along a wall normal leaves through the top opening.
Cut frustum_passage(const FeatureSpec& spec, const Host& h) {
  const double b = dim(spec, "bottom_half", 10), t = dim(spec, "top_half", 16);
  require(b > 0 && t > b, "frustum needs top_half > bottom_half > 0");
  const std::vector<Vec3> lo = rect(spec.x, spec.y, 2 * b, 2 * b);
  const std::vector<Vec3> hi = rect(spec.x, spec.y, 2 * t, 2 * t);
  const Vec3 zb{0, 0, h.bottom}, zt{0, 0, h.top};
  Cut cut;
  std::vector<int> walls;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t j = (k + 1) % 4;
    const Vec3 a = lo[k] + zb, c = lo[j] + zb, d = hi[j] + zt, e = hi[k] + zt;
    Vec3 n = normalized(cross(c - a, e - a));
    const Vec3 mid = (a + c + d + e) * 0.25;
    if (dot(n, Vec3{spec.x, spec.y, mid.z} - mid) < 0) n = -n;
    walls.push_back(cut.add(plane_face(n, {polygon({a, c, d, e})})));
  }
  cut.top_loops.push_back(lift(polygon(hi), h.top));
  cut.bottom_loops.push_back(lift(polygon(lo), h.bottom));
  cut.truth.push_back({FeatureType::FloorlessPocket, walls, all_faces(cut)});
  cut.footprint = box_of(hi);
  return cut;
}

Cut closed_island(const FeatureSpec& spec, const Host& h) {
  const double lx = dim(spec, "length", 50), ly = dim(spec, "width", 40);
  const double ix = dim(spec, "island_length", 16), iy = dim(spec, "island_width", 12);
  require(lx > 0 && ly > 0 && ix > 0 && iy > 0 && ix < lx && iy < ly, "island must fit inside the pocket");
  PocketShape s;
  s.profile = rect(spec.x, spec.y, lx, ly);
  s.depth = dim(spec, "depth", 15);
  require(s.depth > 0, "pocket depth must be positive");
  s.island = rect(spec.x, spec.y, ix, iy);
  s.island_height = dim(spec, "island_height", 8);
  Cut cut;
  const PocketFaces f = pocket(cut, s, h);
  cut.truth.push_back({FeatureType::ClosedPocket, {f.floor}, all_faces(cut)});
  cut.truth.push_back({FeatureType::ClosedIsland, {f.floor}, all_faces(cut)});
  cut.footprint = box_of(s.profile);
  return cut;
}

}  // namespace

Cut interior_cut(const FeatureSpec& spec, const Host& host) {
  switch (spec.feature) {
    case FeatureType::SimpleHole: return simple_hole(spec, host);
    case FeatureType::TaperHole: return taper_hole(spec, host);
    case FeatureType::CounterboreHole: return counterbore(spec, host);
    case FeatureType::CounterdrilledHole: return counterdrilled(spec, host);
    case FeatureType::CountersinkHole: return countersink(spec, host);
    case FeatureType::ClosedPocket:
      return spec.variant == "merged_slot" ? merged_slot_pocket(spec, host) : rect_pocket(spec, host);
    case FeatureType::SimpleSlot:
    case FeatureType::InnerFillet:
    case FeatureType::InnerChamfer: return rect_pocket(spec, host);
    case FeatureType::FloorlessPocket:
      return spec.variant == "frustum" ? frustum_passage(spec, host) : floorless_pocket(spec, host);
    case FeatureType::ClosedIsland: return closed_island(spec, host);
    default: break;
  }
  throw PlacementError(std::string(to_string(spec.feature)) + " is not an interior feature");
}

}  // namespace mfr::synth
