#include "levy/serialize.hpp"

#include <stdexcept>

namespace levy {

using nlohmann::json;

namespace {

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument(std::string(what) + ": expected array of 1..3 numbers");
  Vec v = Vec::zero(static_cast<int>(j.size()));
  for (int i = 0; i < v.dim(); ++i) {
    if (!j[i].is_number()) throw std::invalid_argument(std::string(what) + ": non-numeric entry");
    v[i] = j[i].get<double>();
  }
  return v;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.dim(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("covariance: expected 1..3 rows");
  const int n = static_cast<int>(j.size());
  Mat m = Mat::zero(n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n)
      throw std::invalid_argument("covariance: ragged rows");
    for (int c = 0; c < n; ++c) {
      if (!j[r][c].is_number()) throw std::invalid_argument("covariance: non-numeric entry");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

const char* side_name(Side s) {
  switch (s) {
    case Side::positive: return "positive";
    case Side::negative: return "negative";
    default: return "both";
  }
}

Side side_from_name(const std::string& s) {
  if (s == "positive") return Side::positive;
  if (s == "negative") return Side::negative;
  if (s == "both") return Side::both;
  throw std::invalid_argument("measure.side: unknown value '" + s + "'");
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const char* scope) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (key == k) ok = true;
    if (!ok)
      throw std::invalid_argument(std::string(scope) + ": unknown field '" + key + "'");
  }
}

double require_number(const json& j, const char* key, const char* scope) {
  if (!j.contains(key) || !j[key].is_number())
    throw std::invalid_argument(std::string(scope) + ": missing numeric field '" + key + "'");
  return j[key].get<double>();
}

json measure_to_json(const LevyMeasure& m) {
  json j;
  if (m.is_atomic()) {
    j["type"] = "atomic";
    json atoms = json::array();
    for (const Atom& a : m.atoms())
      atoms.push_back({{"x", vec_to_json(a.x)}, {"mass", a.mass}});
    j["atoms"] = atoms;
  } else {
    const PowerDensity& d = m.power();
    j["type"] = "power_density";
    j["coef"] = d.coef;
    j["beta"] = d.beta;
    j["lo"] = d.lo;
    j["hi"] = d.hi;
    j["side"] = side_name(d.side);
  }
  return j;
}

LevyMeasure measure_from_json(const json& j, int dim) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw std::invalid_argument("measure: expected object with a 'type' field");
  const std::string type = j["type"].get<std::string>();
  if (type == "atomic") {
    reject_unknown_keys(j, {"type", "atoms"}, "measure");
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
      if (!j["atoms"].is_array()) throw std::invalid_argument("measure.atoms: expected array");
      for (const json& a : j["atoms"]) {
        reject_unknown_keys(a, {"x", "mass"}, "measure.atoms[]");
        if (!a.contains("x")) throw std::invalid_argument("measure.atoms[]: missing 'x'");
        atoms.push_back({vec_from_json(a["x"], "measure.atoms[].x"),
                         require_number(a, "mass", "measure.atoms[]")});
      }
    }
    for (const Atom& a : atoms)
      if (a.x.dim() != dim)
        throw std::invalid_argument("measure.atoms[]: dimension mismatch with drift");
    return LevyMeasure::atomic(dim, std::move(atoms));
  }
  if (type == "power_density") {
    if (dim != 1)
      throw std::invalid_argument("measure: power_density requires dimension 1");
    reject_unknown_keys(j, {"type", "coef", "beta", "lo", "hi", "side"}, "measure");
    PowerDensity d;
    d.coef = require_number(j, "coef", "measure");
    d.beta = require_number(j, "beta", "measure");
    d.lo = require_number(j, "lo", "measure");
    d.hi = require_number(j, "hi", "measure");
    if (j.contains("side")) {
      if (!j["side"].is_string()) throw std::invalid_argument("measure.side: expected string");
      d.side = side_from_name(j["side"].get<std::string>());
    }
    return LevyMeasure::density(d);
  }
  throw std::invalid_argument("measure.type: unknown value '" + type + "'");
}

}  // namespace

json triplet_to_json(const LevyTriplet& t) {
  json j;
  j["schema"] = kTripletSchema;
  j["drift"] = vec_to_json(t.drift);
  j["covariance"] = mat_to_json(t.covariance);
  j["measure"] = measure_to_json(t.measure);
  return j;
}

LevyTriplet triplet_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("triplet: expected JSON object");
  reject_unknown_keys(j, {"schema", "drift", "covariance", "measure"}, "triplet");
  if (!j.contains("schema") || j["schema"] != kTripletSchema)
    throw std::invalid_argument("triplet: schema must be 'levy-triplet/1'");
  if (!j.contains("drift") || !j.contains("covariance") || !j.contains("measure"))
    throw std::invalid_argument("triplet: requires drift, covariance, measure");
  LevyTriplet t;
  t.drift = vec_from_json(j["drift"], "drift");
  t.covariance = mat_from_json(j["covariance"]);
  if (t.covariance.dim() != t.drift.dim())
    throw std::invalid_argument("covariance: dimension mismatch with drift");
  t.measure = measure_from_json(j["measure"], t.drift.dim());
  return t;
}

std::string triplet_to_string(const LevyTriplet& t, int indent) {
  return triplet_to_json(t).dump(indent) + "\n";
}

LevyTriplet triplet_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("triplet: JSON parse error: ") + e.what());
  }
  return triplet_from_json(j);
}

}  // namespace levy
