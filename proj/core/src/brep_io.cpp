#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mfr/brep.hpp"
#include "mfr/errors.hpp"
#include "mfr/io_util.hpp"

namespace mfr {

using nlohmann::json;

namespace {

Vec3 read_vec(const json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != 3) throw SchemaError(std::string("field '") + key + "' must be [x,y,z]");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

double read_num(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw SchemaError(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

SurfaceGeometry read_surface(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "PLANE") return Plane{read_vec(j, "origin"), read_vec(j, "normal")};
  if (kind == "CYLINDER")
    return Cylinder{read_vec(j, "axis_origin"), read_vec(j, "axis_dir"), read_num(j, "radius")};
  if (kind == "CONE")
    return Cone{read_vec(j, "apex"), read_vec(j, "axis_dir"), read_num(j, "half_angle")};
  if (kind == "SPHERE") return Sphere{read_vec(j, "center"), read_num(j, "radius")};
  if (kind == "TORUS")
    return Torus{read_vec(j, "center"), read_vec(j, "axis_dir"), read_num(j, "major_radius"),
                 read_num(j, "minor_radius")};
  throw SchemaError("unknown surface kind '" + kind + "'");
}

json surface_json(const SurfaceGeometry& s) {
  return std::visit(
      [](const auto& g) -> json {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Plane>) {
          return {{"kind", "PLANE"}, {"origin", vec_json(g.origin)}, {"normal", vec_json(g.normal)}};
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return {{"kind", "CYLINDER"},
                  {"axis_origin", vec_json(g.axis_origin)},
                  {"axis_dir", vec_json(g.axis_dir)},
                  {"radius", g.radius}};
        } else if constexpr (std::is_same_v<T, Cone>) {
          return {{"kind", "CONE"},
                  {"apex", vec_json(g.apex)},
                  {"axis_dir", vec_json(g.axis_dir)},
                  {"half_angle", g.half_angle}};
        } else if constexpr (std::is_same_v<T, Sphere>) {
          return {{"kind", "SPHERE"}, {"center", vec_json(g.center)}, {"radius", g.radius}};
        } else {
          return {{"kind", "TORUS"},
                  {"center", vec_json(g.center)},
                  {"axis_dir", vec_json(g.axis_dir)},
                  {"major_radius", g.major_radius},
                  {"minor_radius", g.minor_radius}};
        }
      },
      s);
}

}  // namespace

Model model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Face> faces;
  std::vector<Shell> shells;
  std::string units;
  try {
    if (!doc.is_object()) throw SchemaError("model document must be a JSON object");
    const int version = doc.value("schema_version", 0);
    if (version != kModelSchemaVersion)
      throw SchemaError("unsupported schema_version " + std::to_string(version));
    units = doc.value("units", "mm");
    for (const json& v : doc.at("vertices")) vertices.push_back({v.at("id").get<int>(), read_vec(v, "point")});
    for (const json& e : doc.at("edges")) {
      Edge edge;
      edge.id = e.at("id").get<int>();
      edge.start_vertex = e.at("start").get<int>();
      edge.end_vertex = e.at("end").get<int>();
      const json& c = e.at("curve");
      const std::string kind = c.value("kind", "");
      if (kind == "LINE") {
        edge.curve = LineCurve{};
      } else if (kind == "CIRCULAR_ARC") {
        edge.curve = CircularArc{read_vec(c, "center"), read_vec(c, "axis"), read_num(c, "radius")};
      } else {
        throw SchemaError("unknown curve kind '" + kind + "' on edge " + std::to_string(edge.id));
      }
      edges.push_back(edge);
    }
    for (const json& f : doc.at("faces")) {
      Face face;
      face.id = f.at("id").get<int>();
      face.surface = read_surface(f.at("surface"));
      face.sense = f.value("sense", true);
      for (const json& l : f.at("loops")) {
        Loop loop;
        const std::string kind = l.value("kind", "");
        if (kind == "OUTER") loop.kind = LoopKind::Outer;
        else if (kind == "INNER") loop.kind = LoopKind::Inner;
        else throw SchemaError("unknown loop kind '" + kind + "' on face " + std::to_string(face.id));
        for (const json& c : l.at("coedges")) loop.coedges.push_back({c.at("edge").get<int>(), c.value("reversed", false)});
        face.loops.push_back(std::move(loop));
      }
      faces.push_back(std::move(face));
    }
    if (doc.contains("shells")) {
      for (const json& s : doc.at("shells")) shells.push_back({s.get<std::vector<int>>()});
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("schema violation: ") + e.what());
  }
  Model m(units, std::move(vertices), std::move(edges), std::move(faces), std::move(shells));
  if (auto diags = validate_topology(m); !diags.empty()) {
    throw TopologyError("model failed validation:\n" + format_diagnostics(diags));
  }
  return m;
}

Model load_model(const std::filesystem::path& path) { return model_from_json(read_text_file(path)); }

std::string model_to_json(const Model& m) {
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["units"] = m.length_unit();
  json verts = json::array();
  for (const Vertex& v : m.vertices()) verts.push_back({{"id", v.id}, {"point", vec_json(v.point)}});
  json edges = json::array();
  for (const Edge& e : m.edges()) {
    json curve;
    if (const auto* arc = std::get_if<CircularArc>(&e.curve)) {
      curve = {{"kind", "CIRCULAR_ARC"},
               {"center", vec_json(arc->center)},
               {"axis", vec_json(arc->axis)},
               {"radius", arc->radius}};
    } else {
      curve = {{"kind", "LINE"}};
    }
    edges.push_back({{"id", e.id}, {"start", e.start_vertex}, {"end", e.end_vertex}, {"curve", curve}});
  }
  json faces = json::array();
  for (const Face& f : m.faces()) {
    json loops = json::array();
    for (const Loop& l : f.loops) {
      json co = json::array();
      for (const Coedge& c : l.coedges) co.push_back({{"edge", c.edge_id}, {"reversed", c.reversed}});
      loops.push_back({{"kind", std::string(to_string(l.kind))}, {"coedges", co}});
    }
    faces.push_back({{"id", f.id}, {"surface", surface_json(f.surface)}, {"sense", f.sense}, {"loops", loops}});
  }
  doc["vertices"] = verts;
  doc["edges"] = edges;
  doc["faces"] = faces;
  if (m.shells().size() > 1) {
    json shells = json::array();
    for (const Shell& s : m.shells()) shells.push_back(s.face_ids);
    doc["shells"] = shells;
  }
  return doc.dump(1);
}

void save_model(const Model& m, const std::filesystem::path& path) {
  write_text_file(path, model_to_json(m));
}

}  // namespace mfr
