#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qh/error.hpp"

namespace qh::cli {

namespace {

std::uint64_t get_count(const Json& v, const char* what) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw UsageError(std::string(what) + " must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double get_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw UsageError(std::string("scenario field '") + key + "' must be a number");
  }
  return j[key].get<double>();
}

}  // namespace

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

NormSpec parse_space(const Json& j) {
  if (!j.is_object()) throw UsageError("scenario needs a 'space' object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) throw UsageError("space.dim must be an integer");
  const int dim = j["dim"].get<int>();
  double p = 2.0;
  if (j.contains("p")) {
    if (j["p"].is_string()) {
      if (j["p"].get<std::string>() != "inf") throw UsageError("space.p must be a number or \"inf\"");
      p = kInf;
    } else if (j["p"].is_number()) {
      p = j["p"].get<double>();
    } else {
      throw UsageError("space.p must be a number or \"inf\"");
    }
  }
  return NormSpec(dim, p);
}

Vector parse_vector(const Json& j, const NormSpec& space) {
  if (!j.is_array()) throw UsageError("a point must be an array of numbers");
  std::vector<double> c;
  for (const Json& x : j) {
    if (!x.is_number()) throw UsageError("a point must be an array of numbers");
    c.push_back(x.get<double>());
  }
  if (c.size() != static_cast<std::size_t>(space.dim())) {
    throw UsageError("point of dimension " + std::to_string(c.size()) + " in a space of dimension " +
                     std::to_string(space.dim()));
  }
  return Vector(std::move(c));
}

Vector parse_vector_flag(const std::string& text, const NormSpec& space) {
  Json arr = Json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      arr.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("cannot parse coordinate '" + item + "'");
    }
  }
  return parse_vector(arr, space);
}

BaseDomain parse_base(const Json& j, const NormSpec& space) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw UsageError("scenario needs a 'base' object with a 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "ball") {
    if (!j.contains("center")) throw UsageError("ball base needs 'center'");
    return Ball{parse_vector(j["center"], space), get_number(j, "radius")};
  }
  if (type == "halfspace") {
    if (!j.contains("normal")) throw UsageError("halfspace base needs 'normal'");
    return HalfSpace{parse_vector(j["normal"], space), get_number(j, "offset")};
  }
  if (type == "whole") return WholeSpace{};
  throw UsageError("unknown base type '" + type + "'");
}

Scenario parse_scenario(const Json& j) {
  if (!j.is_object()) throw UsageError("scenario must be a JSON object");
  if (!j.contains("space")) throw UsageError("scenario needs a 'space' object");
  if (!j.contains("base")) throw UsageError("scenario needs a 'base' object");
  const NormSpec space = parse_space(j["space"]);
  const BaseDomain base = parse_base(j["base"], space);

  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    seed = get_count(j["seed"], "seed");
  }

  GraphParams graph;
  QuadratureParams quad;
  if (j.contains("graph")) {
    const Json& g = j["graph"];
    if (g.contains("node_budget")) graph.node_budget = get_count(g["node_budget"], "graph.node_budget");
    if (g.contains("ring_levels")) graph.ring_levels = g["ring_levels"].get<int>();
    if (g.contains("refine_rounds")) graph.refine_rounds = g["refine_rounds"].get<int>();
    if (g.contains("target_ratio")) graph.target_ratio = g["target_ratio"].get<double>();
    if (g.contains("ring_points")) graph.ring_points = g["ring_points"].get<int>();
  }
  if (j.contains("quad")) {
    const Json& q = j["quad"];
    if (q.contains("rel_tol")) quad.rel_tol = q["rel_tol"].get<double>();
    if (q.contains("max_depth")) quad.max_depth = q["max_depth"].get<int>();
  }
  graph.seed = seed;

  PunctureSet punctures;
  if (j.contains("punctures")) {
    const Json& p = j["punctures"];
    if (!p.is_object()) throw UsageError("'punctures' must be an object");
    if (p.contains("kappa")) punctures.kappa = get_number(p, "kappa");
    if (p.contains("points") && p.contains("generate")) {
      throw UsageError("'punctures' takes either 'points' or 'generate'");
    }
    if (p.contains("points")) {
      if (!p["points"].is_array()) throw UsageError("punctures.points must be an array");
      for (const Json& x : p["points"]) punctures.points.push_back(parse_vector(x, space));
    } else if (p.contains("generate")) {
      const Domain plain(space, base);
      const auto count = get_count(p["generate"], "punctures.generate");
      const double kappa = punctures.kappa;
      punctures = generate_separated_punctures(plain, kappa, count, seed);
    }
  }
  return Scenario{j, Domain(space, base, std::move(punctures)), seed, graph, quad};
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open scenario file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("scenario is not valid JSON: " + std::string(e.what()));
  }
  return parse_scenario(j);
}

Json to_json(const Domain& domain) {
  Json out;
  const NormSpec& space = domain.space();
  out["space"] = {{"dim", space.dim()}, {"p", number(space.p())}};
  auto vec = [](const Vector& v) {
    Json a = Json::array();
    for (double x : v.coords()) a.push_back(x);
    return a;
  };
  if (const auto* ball = std::get_if<Ball>(&domain.base())) {
    out["base"] = {{"type", "ball"}, {"center", vec(ball->center)}, {"radius", ball->radius}};
  } else if (const auto* half = std::get_if<HalfSpace>(&domain.base())) {
    out["base"] = {{"type", "halfspace"}, {"normal", vec(half->normal)}, {"offset", half->offset}};
  } else {
    out["base"] = {{"type", "whole"}};
  }
  Json pts = Json::array();
  for (const Vector& p : domain.punctures().points) pts.push_back(vec(p));
  out["punctures"] = {{"kappa", domain.punctures().kappa}, {"points", pts}};
  return out;
}

}  // namespace qh::cli
