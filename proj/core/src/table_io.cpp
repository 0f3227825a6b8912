#include "billiards/table_io.hpp"

#include <fstream>
#include <sstream>

#include "billiards/error.hpp"
#include "json.hpp"

namespace billiards {

namespace {

using nlohmann::json;

Vec2 read_point(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2) throw Error(ErrorKind::InvalidInput, std::string(key) + " must be [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<double> read_list(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<double>>();
}

}  // namespace

TableConfig parse_table_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("table file: ") + e.what());
  }
  TableConfig cfg;
  try {
    cfg.name = doc.value("name", std::string("table"));
    cfg.non_eclipse = doc.value("non_eclipse", true);
    for (const json& o : doc.at("obstacles")) {
      ObstacleConfig oc;
      oc.id = o.at("id").get<int>();
      const std::string kind = o.at("kind").get<std::string>();
      ShapeParams& sp = oc.shape;
      sp.center = read_point(o, "center");
      sp.rotation = o.value("rotation", 0.0);
      if (kind == "circle") {
        sp.kind = ShapeKind::Circle;
        sp.radius = o.at("radius").get<double>();
      } else if (kind == "ellipse") {
        sp.kind = ShapeKind::Ellipse;
        const Vec2 ax = read_point(o, "semi_axes");
        sp.semi_a = ax.x;
        sp.semi_b = ax.y;
      } else if (kind == "fourier") {
        sp.kind = ShapeKind::Fourier;
        sp.radius = o.value("radius", 1.0);
        sp.cos_coeffs = read_list(o, "cos");
        sp.sin_coeffs = read_list(o, "sin");
      } else {
        throw Error(ErrorKind::InvalidInput, "unknown obstacle kind '" + kind + "'");
      }
      if (o.contains("bumps")) {
        for (const json& b : o.at("bumps")) {
          BumpPerturbation bp;
          bp.target_id = oc.id;
          bp.s_a = b.at("s_a").get<double>();
          bp.s_b = b.at("s_b").get<double>();
          bp.amplitude = b.at("amplitude").get<double>();
          bp.order = b.value("order", 6);
          oc.bumps.push_back(bp);
        }
      }
      cfg.obstacles.push_back(std::move(oc));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("table file: ") + e.what());
  }
  return cfg;
}

TableConfig load_table_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open table file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_table_config(ss.str());
}

std::string dump_table_config(const TableConfig& cfg) {
  json doc;
  doc["name"] = cfg.name;
  doc["non_eclipse"] = cfg.non_eclipse;
  doc["obstacles"] = json::array();
  for (const ObstacleConfig& oc : cfg.obstacles) {
    json o;
    o["id"] = oc.id;
    o["kind"] = to_string(oc.shape.kind);
    o["center"] = {oc.shape.center.x, oc.shape.center.y};
    if (oc.shape.rotation != 0.0) o["rotation"] = oc.shape.rotation;
    switch (oc.shape.kind) {
      case ShapeKind::Circle: o["radius"] = oc.shape.radius; break;
      case ShapeKind::Ellipse: o["semi_axes"] = {oc.shape.semi_a, oc.shape.semi_b}; break;
      case ShapeKind::Fourier:
        o["radius"] = oc.shape.radius;
        o["cos"] = oc.shape.cos_coeffs;
        o["sin"] = oc.shape.sin_coeffs;
        break;
    }
    if (!oc.bumps.empty()) {
      o["bumps"] = json::array();
      for (const BumpPerturbation& b : oc.bumps)
        o["bumps"].push_back({{"s_a", b.s_a}, {"s_b", b.s_b}, {"amplitude", b.amplitude}, {"order", b.order}});
    }
    doc["obstacles"].push_back(o);
  }
  return doc.dump(2) + "\n";
}

TableConfig describe_table(const Table& table) {
  TableConfig cfg;
  cfg.name = table.name();
  cfg.non_eclipse = table.non_eclipse();
  for (const Obstacle& o : table.obstacles()) {
    ObstacleConfig oc;
    oc.id = o.id;
    oc.shape = o.curve.params();
    // bumps live in base arclength, which is the arclength of the shape the
    // first bump was applied to; later bumps are reproduced only approximately
    for (const auto& b : o.curve.bumps())
      oc.bumps.push_back({o.id, b.center - b.half_width, b.center + b.half_width, b.amplitude, b.order});
    cfg.obstacles.push_back(std::move(oc));
  }
  return cfg;
}

}  // namespace billiards
