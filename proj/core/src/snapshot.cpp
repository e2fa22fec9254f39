#include "cliquechain/snapshot.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "cliquechain/error.hpp"

namespace cliquechain {

using nlohmann::json;

namespace {

constexpr const char* kModelFormat = "cliquechain-model";

template <typename T>
T field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kParse, what + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, what + ": field '" + key + "': " + e.what());
  }
}

}  // namespace

json parse_json(std::istream& in, const std::string& what) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, what + ": " + e.what());
  }
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, what + ": " + e.what());
  }
}

json constraint_to_json(const Constraint& c) {
  if (const auto* d = std::get_if<DegreeConstraint>(&c)) {
    return {{"kind", "degree"},
            {"vertex", d->vertex},
            {"direction", std::string(to_string(d->direction))},
            {"target", d->target}};
  }
  const auto& s = std::get<DensityConstraint>(c);
  json members = json::array();
  for (Vertex v : s.members) members.push_back(v);
  return {{"kind", "density"}, {"vertices", members}, {"target", s.target}};
}

Constraint constraint_from_json(const json& j) {
  const auto kind = field<std::string>(j, "kind", "constraint");
  if (kind == "degree") {
    return DegreeConstraint{field<Vertex>(j, "vertex", "degree constraint"),
                            parse_direction(field<std::string>(j, "direction", "degree constraint")),
                            field<double>(j, "target", "degree constraint")};
  }
  if (kind == "density") {
    return DensityConstraint{
        VertexSet(field<std::vector<Vertex>>(j, "vertices", "density constraint")),
        field<double>(j, "target", "density constraint")};
  }
  throw Error(ErrorCode::kParse, "unknown constraint kind '" + kind + "'");
}

json model_to_json(const EdgeProbabilityModel& m) {
  json constraints = json::array();
  for (const auto& c : m.constraint_log()) constraints.push_back(constraint_to_json(c));
  json probs = json::array();
  for (double p : m.probabilities()) probs.push_back(p);
  return {{"format", kModelFormat},
          {"format_version", 1},
          {"n", m.num_vertices()},
          {"directed", m.directed()},
          {"epsilon", kEpsilon},
          {"epoch", m.epoch()},
          {"constraints", constraints},
          {"probabilities", probs}};
}

EdgeProbabilityModel model_from_json(const json& j) {
  const std::string what = "model snapshot";
  if (field<std::string>(j, "format", what) != kModelFormat) {
    throw Error(ErrorCode::kParse, what + ": unexpected format tag");
  }
  if (field<int>(j, "format_version", what) != 1) {
    throw Error(ErrorCode::kParse, what + ": unsupported format_version");
  }
  if (field<double>(j, "epsilon", what) != kEpsilon) {
    throw Error(ErrorCode::kParse, what + ": epsilon differs from this build");
  }
  std::vector<Constraint> log;
  for (const auto& c : field<json>(j, "constraints", what)) log.push_back(constraint_from_json(c));
  try {
    return EdgeProbabilityModel::from_parts(field<std::size_t>(j, "n", what),
                                            field<bool>(j, "directed", what),
                                            field<std::uint64_t>(j, "epoch", what), std::move(log),
                                            field<std::vector<double>>(j, "probabilities", what));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, what + ": " + e.what());
  }
}

void write_model_snapshot(std::ostream& out, const EdgeProbabilityModel& m) {
  out << model_to_json(m).dump(1) << '\n';
}

EdgeProbabilityModel read_model_snapshot(std::istream& in) {
  return model_from_json(parse_json(in, "model snapshot"));
}

void save_model_snapshot(const std::string& path, const EdgeProbabilityModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInternal, "cannot write '" + path + "'");
  write_model_snapshot(out, m);
}

EdgeProbabilityModel load_model_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open model snapshot '" + path + "'");
  return read_model_snapshot(in);
}

}  // namespace cliquechain
