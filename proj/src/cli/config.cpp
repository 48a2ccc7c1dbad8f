#include "fracdyn/cli/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fracdyn::cli {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& source, const std::string& field,
                              const std::string& what) {
  throw ConfigError(source + ": field '" + field + "': " + what);
}

void reject_unknown(const json& object, const std::set<std::string>& known,
                    const std::string& source, const std::string& prefix) {
  for (const auto& item : object.items()) {
    if (!known.count(item.key()))
      field_error(source, prefix + item.key(), "unknown key");
  }
}

double number(const json& object, const std::string& key, const std::string& source,
              const std::string& prefix) {
  const json& v = object.at(key);
  if (!v.is_number()) field_error(source, prefix + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) field_error(source, prefix + key, "expected a finite number");
  return d;
}

std::string text(const json& object, const std::string& key, const std::string& source) {
  const json& v = object.at(key);
  if (!v.is_string()) field_error(source, key, "expected a string");
  return v.get<std::string>();
}

// Maps a byte offset from the JSON parser to line:column.
std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

OperatorKind parse_operator(std::string_view name) {
  if (name == "caputo") return OperatorKind::Caputo;
  if (name == "cf") return OperatorKind::CF;
  throw ConfigError("unknown operator '" + std::string(name) + "' (expected caputo or cf)");
}

CfScheme parse_cf_mode(std::string_view name) {
  if (name == "paper") return CfScheme::Paper;
  if (name == "corrected") return CfScheme::Corrected;
  throw ConfigError("unknown CF mode '" + std::string(name) + "' (expected paper or corrected)");
}

RunConfig parse_run_config(std::string_view input, const std::string& source) {
  json doc;
  try {
    doc = json::parse(input.begin(), input.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw ConfigError(source + ":" + position(input, at) + ": syntax error: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(source + ": top level must be a JSON object");

  reject_unknown(doc,
                 {"operator", "alpha", "params", "initial", "horizon", "step", "cf_mode",
                  "normalization"},
                 source, "");

  RunConfig cfg;
  if (!doc.contains("params")) field_error(source, "params", "missing");
  {
    const json& p = doc.at("params");
    if (!p.is_object()) field_error(source, "params", "expected an object with keys a1..a7");
    std::array<double, 7> a{};
    std::set<std::string> keys;
    for (int i = 0; i < 7; ++i) keys.insert("a" + std::to_string(i + 1));
    reject_unknown(p, keys, source, "params.");
    for (int i = 0; i < 7; ++i) {
      const std::string key = "a" + std::to_string(i + 1);
      if (!p.contains(key)) field_error(source, "params." + key, "missing");
      a[static_cast<std::size_t>(i)] = number(p, key, source, "params.");
      if (!(a[static_cast<std::size_t>(i)] > 0)) field_error(source, "params." + key, "must be > 0");
    }
    cfg.params = ModelParams<double>{a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
  }

  if (doc.contains("operator")) {
    try {
      cfg.op = parse_operator(text(doc, "operator", source));
    } catch (const ConfigError& e) {
      field_error(source, "operator", e.what());
    }
  }
  if (doc.contains("alpha")) {
    cfg.alpha = number(doc, "alpha", source, "");
    if (!(*cfg.alpha > 0 && *cfg.alpha <= 1)) field_error(source, "alpha", "must lie in (0, 1]");
  }
  if (doc.contains("initial")) {
    const json& u = doc.at("initial");
    if (!u.is_object()) field_error(source, "initial", "expected an object with keys x, y, z");
    reject_unknown(u, {"x", "y", "z"}, source, "initial.");
    State3<double> s;
    int i = 0;
    for (const char* key : {"x", "y", "z"}) {
      if (!u.contains(key)) field_error(source, std::string("initial.") + key, "missing");
      s(i++) = number(u, key, source, "initial.");
    }
    cfg.initial = s;
  }
  if (doc.contains("horizon")) {
    cfg.horizon = number(doc, "horizon", source, "");
    if (!(*cfg.horizon > 0)) field_error(source, "horizon", "must be > 0");
  }
  if (doc.contains("step")) {
    cfg.step = number(doc, "step", source, "");
    if (!(*cfg.step > 0)) field_error(source, "step", "must be > 0");
  }
  if (cfg.horizon && cfg.step && *cfg.horizon < *cfg.step)
    field_error(source, "horizon", "must be at least one step");
  if (doc.contains("cf_mode")) {
    try {
      cfg.cf_mode = parse_cf_mode(text(doc, "cf_mode", source));
    } catch (const ConfigError& e) {
      field_error(source, "cf_mode", e.what());
    }
  }
  if (doc.contains("normalization")) {
    cfg.normalization = number(doc, "normalization", source, "");
    if (!(cfg.normalization > 0)) field_error(source, "normalization", "must be > 0");
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), path.string());
}

void RunConfig::require_alpha() const {
  if (!alpha) throw ConfigError("field 'alpha': missing (set it in the config or pass --alpha)");
  if (!(*alpha > 0 && *alpha <= 1)) throw ConfigError("field 'alpha': must lie in (0, 1]");
}

void RunConfig::require_simulation() const {
  if (!op) throw ConfigError("field 'operator': missing");
  require_alpha();
  if (!initial) throw ConfigError("field 'initial': missing");
  if (!horizon) throw ConfigError("field 'horizon': missing");
  if (!step) throw ConfigError("field 'step': missing");
  if (!(*horizon > 0)) throw ConfigError("field 'horizon': must be > 0");
  if (!(*step > 0)) throw ConfigError("field 'step': must be > 0");
  if (*horizon < *step) throw ConfigError("field 'horizon': must be at least one step");
}

SolverConfig<double> RunConfig::solver() const {
  require_simulation();
  SolverConfig<double> s;
  s.step = *step;
  s.horizon = *horizon;
  s.normalization = normalization;
  s.cf_mode = cf_mode;
  return s;
}

nlohmann::json to_json(const RunConfig& c) {
  json j;
  if (c.op) j["operator"] = to_string(*c.op);
  if (c.alpha) j["alpha"] = *c.alpha;
  j["params"] = {{"a1", c.params.a1}, {"a2", c.params.a2}, {"a3", c.params.a3},
                 {"a4", c.params.a4}, {"a5", c.params.a5}, {"a6", c.params.a6},
                 {"a7", c.params.a7}};
  if (c.initial) j["initial"] = {{"x", (*c.initial)(0)}, {"y", (*c.initial)(1)}, {"z", (*c.initial)(2)}};
  if (c.horizon) j["horizon"] = *c.horizon;
  if (c.step) j["step"] = *c.step;
  j["cf_mode"] = to_string(c.cf_mode);
  j["normalization"] = c.normalization;
  return j;
}

}  // namespace fracdyn::cli
