#include "nudgek/config_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "nudgek/error.hpp"

namespace nudgek {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorKind::ConfigError, message); }

double number(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where + ": missing \"" + key + "\"");
  if (!it->is_number()) fail(where + ": \"" + key + "\" must be a number");
  return it->get<double>();
}

PhaseType parse_raw_ph(const json& obj, const std::string& where) {
  const auto a = obj.find("alpha");
  const auto s = obj.find("S");
  if (a == obj.end() || s == obj.end()) fail(where + ": ph needs \"alpha\" and \"S\"");
  if (!a->is_array() || !s->is_array()) fail(where + ": alpha and S must be arrays");
  const auto n = static_cast<Index>(a->size());
  RowVector alpha(n);
  Matrix gen(static_cast<Index>(s->size()), n);
  for (Index i = 0; i < n; ++i) {
    if (!(*a)[i].is_number()) fail(where + ": alpha entries must be numbers");
    alpha[i] = (*a)[i].get<double>();
  }
  for (Index i = 0; i < gen.rows(); ++i) {
    const json& row = (*s)[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      fail(where + ": S must be a square matrix matching alpha");
    for (Index j = 0; j < n; ++j) {
      if (!row[j].is_number()) fail(where + ": S entries must be numbers");
      gen(i, j) = row[j].get<double>();
    }
  }
  if (gen.rows() != n) fail(where + ": S must be a square matrix matching alpha");
  return PhaseType(alpha, gen);
}

PhaseType parse_shape(const json& obj, const std::string& where, bool has_ratio) {
  if (!obj.is_object()) fail(where + " must be an object");
  const auto d = obj.find("dist");
  if (d == obj.end() || !d->is_string()) fail(where + ": missing string \"dist\"");
  const std::string dist = d->get<std::string>();
  double mean = 1.0;
  if (obj.contains("mean")) {
    if (has_ratio) fail(where + ": explicit means and \"ratio\" are mutually exclusive");
    mean = number(obj, "mean", where);
  }
  try {
    if (dist == "expo") return ph::expo(mean);
    if (dist == "erlang") {
      const auto it = obj.find("phases");
      if (it == obj.end() || !it->is_number_integer()) fail(where + ": erlang needs integer \"phases\"");
      return ph::erlang(it->get<int>(), mean);
    }
    if (dist == "h2_balanced") return ph::h2_balanced(mean, number(obj, "scv", where));
    if (dist == "h2_shape") return ph::h2_shape(mean, number(obj, "scv", where), number(obj, "f", where));
    if (dist == "ph") {
      if (obj.contains("mean")) fail(where + ": ph takes its mean from alpha and S");
      return parse_raw_ph(obj, where);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    fail(where + ": " + e.what());
  }
  fail(where + ": unknown dist \"" + dist + "\"");
}

}  // namespace

SystemConfig ConfigSpec::build() const {
  if (ratio) return normalize_system(lambda, p, shape1, shape2, *ratio, depth);
  return SystemConfig(lambda, p, shape1, shape2, depth);
}

SystemConfig ConfigSpec::build(double lambda_value, double ratio_value, double p_value) const {
  return normalize_system(lambda_value, p_value, shape1, shape2, ratio_value, depth);
}

ConfigSpec parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) fail("config must be a JSON object");

  ConfigSpec spec;
  spec.lambda = number(root, "lambda", "config");
  spec.p = number(root, "p", "config");
  if (root.contains("ratio") && !root["ratio"].is_null()) spec.ratio = number(root, "ratio", "config");
  if (!root.contains("type1") || !root.contains("type2")) fail("config needs \"type1\" and \"type2\"");
  spec.shape1 = parse_shape(root["type1"], "type1", spec.ratio.has_value());
  spec.shape2 = parse_shape(root["type2"], "type2", spec.ratio.has_value());
  if (root.contains("K")) {
    const json& k = root["K"];
    if (k.is_string()) spec.depth = SwapDepth::parse(k.get<std::string>());
    else if (k.is_number_unsigned()) spec.depth = SwapDepth(k.get<unsigned>());
    else fail("\"K\" must be a non-negative integer or \"inf\"");
  }
  return spec;
}

ConfigSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace nudgek
