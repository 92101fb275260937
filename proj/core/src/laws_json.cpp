// JSON schema for laws (see docs/laws.md). Canonical form: nlohmann objects
// keep keys sorted and doubles round-trip at full precision, so
// describe_json(parse(text)) is a stable fixed point.

#include <json.hpp>

#include "laws_node.hpp"
#include "perpetua/errors.hpp"
#include "perpetua/laws.hpp"

namespace perpetua {

namespace {

using nlohmann::json;

double get_num(const json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + ": expected number");
  return j.get<double>();
}

int get_int(const json& j, const char* what) {
  if (!j.is_number_integer())
    throw ConfigError(std::string(what) + ": expected integer");
  return j.get<int>();
}

Vec get_vec(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw ConfigError(std::string(what) + ": expected nonempty array");
  Vec out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(get_num(x, what));
  return out;
}

std::vector<Vec> get_vec_list(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw ConfigError(std::string(what) + ": expected nonempty array");
  std::vector<Vec> out;
  out.reserve(j.size());
  for (const auto& row : j) out.push_back(get_vec(row, what));
  return out;
}

const json& need(const json& j, const char* key, const char* ctx) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string(ctx) + ": missing field '" + key + "'");
  return *it;
}

VectorLaw vector_law_from_json(const json& j) {
  if (j.is_array()) return VectorLaw::constant(get_vec(j, "vector law"));
  if (!j.is_object()) throw ConfigError("vector law: expected object or array");
  const std::string kind = need(j, "kind", "vector law").get<std::string>();
  if (kind == "constant")
    return VectorLaw::constant(get_vec(need(j, "value", kind.c_str()), "value"));
  if (kind == "zero")
    return VectorLaw::zero(get_int(need(j, "dim", kind.c_str()), "dim"));
  if (kind == "gaussian")
    return VectorLaw::gaussian(get_int(need(j, "dim", kind.c_str()), "dim"),
                               get_num(need(j, "std", kind.c_str()), "std"));
  if (kind == "finite-support")
    return VectorLaw::finite_support(
        get_vec_list(need(j, "atoms", kind.c_str()), "atoms"),
        get_vec(need(j, "weights", kind.c_str()), "weights"));
  throw ConfigError("vector law: unknown kind '" + kind + "'");
}

PairLaw pair_law_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("pair law: expected JSON object");
  const std::string kind = need(j, "kind", "pair law").get<std::string>();
  if (kind == "constant") {
    const auto rows = get_vec_list(need(j, "matrix", "constant"), "matrix");
    return PairLaw::constant(SquareMatrix::from_rows(rows),
                             get_vec(need(j, "z", "constant"), "z"));
  }
  if (kind == "frame-diagonal") {
    auto frame = get_vec_list(need(j, "frame", kind.c_str()), "frame");
    VectorLaw zLaw = vector_law_from_json(need(j, "z", kind.c_str()));
    if (j.contains("tuples")) {
      return PairLaw::frame_diagonal_coupled(
          std::move(frame), get_vec_list(j.at("tuples"), "tuples"),
          get_vec(need(j, "tupleWeights", kind.c_str()), "tupleWeights"),
          std::move(zLaw));
    }
    const json& scal = need(j, "scalars", kind.c_str());
    if (!scal.is_array()) throw ConfigError("frame-diagonal: scalars array");
    std::vector<FiniteScalarLaw> laws;
    for (const auto& s : scal)
      laws.push_back(FiniteScalarLaw{get_vec(need(s, "values", "scalars"), "values"),
                                     get_vec(need(s, "weights", "scalars"), "weights")});
    return PairLaw::frame_diagonal(std::move(frame), std::move(laws),
                                   std::move(zLaw));
  }
  if (kind == "gaussian-entries")
    return PairLaw::gaussian_entries(
        get_int(need(j, "dim", kind.c_str()), "dim"),
        get_num(need(j, "entryStd", kind.c_str()), "entryStd"),
        get_num(need(j, "zStd", kind.c_str()), "zStd"));
  if (kind == "finite-mixture") {
    const json& comps = need(j, "components", kind.c_str());
    if (!comps.is_array() || comps.empty())
      throw ConfigError("finite-mixture: components array");
    std::vector<PairLaw> components;
    for (const auto& c : comps) components.push_back(pair_law_from_json(c));
    return PairLaw::finite_mixture(
        std::move(components),
        get_vec(need(j, "weights", kind.c_str()), "weights"));
  }
  if (kind == "composite")
    return PairLaw::composite(
        pair_law_from_json(need(j, "base", kind.c_str())),
        vector_law_from_json(need(j, "z", kind.c_str())));
  throw ConfigError("pair law: unknown kind '" + kind + "'");
}

json matrix_rows(const SquareMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.dim(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_law_to_json(const VectorLaw::Node& n) {
  json out;
  if (const auto* c = std::get_if<VectorLaw::Node::Constant>(&n.alt)) {
    out["kind"] = "constant";
    out["value"] = c->v;
  } else if (const auto* g = std::get_if<VectorLaw::Node::Gaussian>(&n.alt)) {
    out["kind"] = "gaussian";
    out["dim"] = n.dim;
    out["std"] = g->std;
  } else {
    const auto& f = std::get<VectorLaw::Node::FiniteSupport>(n.alt);
    out["kind"] = "finite-support";
    out["atoms"] = f.atoms;
    out["weights"] = f.weights;
  }
  return out;
}

json pair_law_to_json(const PairLaw& law);

json pair_law_node_to_json(const PairLaw::Node& n) {
  json out;
  switch (n.alt.index()) {
    case 0: {
      const auto& c = std::get<PairLaw::Node::Constant>(n.alt);
      out["kind"] = "constant";
      out["matrix"] = matrix_rows(c.m);
      out["z"] = c.z;
      break;
    }
    case 1: {
      const auto& f = std::get<PairLaw::Node::FrameDiagonal>(n.alt);
      out["kind"] = "frame-diagonal";
      out["frame"] = f.frame;
      if (f.coupled) {
        out["tuples"] = f.tuples;
        out["tupleWeights"] = f.tupleWeights;
      } else {
        json scal = json::array();
        for (const auto& s : f.scalarLaws)
          scal.push_back({{"values", s.values}, {"weights", s.weights}});
        out["scalars"] = scal;
      }
      out["z"] = json::parse(f.zLaw.describe_json());
      break;
    }
    case 2: {
      const auto& g = std::get<PairLaw::Node::GaussianEntries>(n.alt);
      out["kind"] = "gaussian-entries";
      out["dim"] = n.dim;
      out["entryStd"] = g.entryStd;
      out["zStd"] = g.zStd;
      break;
    }
    case 3: {
      const auto& mix = std::get<PairLaw::Node::FiniteMixture>(n.alt);
      out["kind"] = "finite-mixture";
      json comps = json::array();
      for (const auto& c : mix.components) comps.push_back(pair_law_to_json(c));
      out["components"] = comps;
      out["weights"] = mix.weights;
      break;
    }
    default: {
      const auto& c = std::get<PairLaw::Node::Composite>(n.alt);
      out["kind"] = "composite";
      out["base"] = pair_law_to_json(c.base);
      out["z"] = json::parse(c.zLaw.describe_json());
      break;
    }
  }
  return out;
}

json pair_law_to_json(const PairLaw& law) {
  return json::parse(law.describe_json());
}

}  // namespace

std::string VectorLaw::describe_json() const {
  return vector_law_to_json(*node_).dump();
}

std::string PairLaw::describe_json() const {
  return pair_law_node_to_json(*node_).dump();
}

PairLaw parse_pair_law(const std::string& jsonText) {
  json j;
  try {
    j = json::parse(jsonText);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("law JSON parse error: ") + e.what());
  }
  return pair_law_from_json(j);
}

VectorLaw parse_vector_law(const std::string& jsonText) {
  json j;
  try {
    j = json::parse(jsonText);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("law JSON parse error: ") + e.what());
  }
  return vector_law_from_json(j);
}

}  // namespace perpetua
