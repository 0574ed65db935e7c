#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rgquad/cli.hpp"

namespace rgquad::cli {

namespace {

void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

const Json& required(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    throw ConfigError(where + "." + key + ": required field is missing");
  }
  return obj.at(key);
}

double real_number(const Json& v, const std::string& field) {
  if (!v.is_number()) {
    throw ConfigError(field + ": must be a real number (complex or non-numeric "
                              "values are not accepted)");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field + ": must be finite");
  return x;
}

double positive(const Json& v, const std::string& field) {
  const double x = real_number(v, field);
  if (!(x > 0.0)) throw ConfigError(field + ": must be positive");
  return x;
}

std::int64_t integer(const Json& v, const std::string& field, std::int64_t lo,
                     std::int64_t hi) {
  if (!v.is_number_integer()) throw ConfigError(field + ": must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo || x > hi) {
    throw ConfigError(field + ": must lie in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  return x;
}

std::vector<double> real_array(const Json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field + ": must be an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(real_number(v[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

Vec3 vec3(const Json& v, const std::string& field) {
  const auto xs = real_array(v, field);
  if (xs.size() != 3) throw ConfigError(field + ": must have 3 entries (x,y,z)");
  return {xs[0], xs[1], xs[2]};
}

CatalogParams parse_catalog(const Json& c) {
  const std::string where = "model.catalog";
  if (!c.is_object()) throw ConfigError(where + ": expected an object");
  const auto& fam = required(c, "family", where);
  if (!fam.is_string()) throw ConfigError(where + ".family: must be a string");
  CatalogParams p;
  try {
    p.family = parse_family(fam.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ".family: " + e.what());
  }
  p.epsilon = real_array(required(c, "epsilon", where), where + ".epsilon");
  if (p.epsilon.empty()) throw ConfigError(where + ".epsilon: must not be empty");
  if (p.family == CatalogFamily::kXxzPip) {
    reject_unknown(c, {"family", "epsilon", "G", "gamma"}, where);
    p.G = real_number(required(c, "G", where), where + ".G");
    if (c.contains("gamma")) p.gamma = real_number(c.at("gamma"), where + ".gamma");
  } else {
    reject_unknown(c, {"family", "epsilon", "B"}, where);
    p.field = real_number(required(c, "B", where), where + ".B");
  }
  return p;
}

InlineModel parse_inline(const Json& m) {
  const std::string where = "model.inline";
  reject_unknown(m, {"N", "B", "Gamma"}, where);
  const auto n = static_cast<std::size_t>(
      integer(required(m, "N", where), where + ".N", 1, 62));
  const auto& b = required(m, "B", where);
  const auto& g = required(m, "Gamma", where);
  if (!b.is_array() || b.size() != n) {
    throw ConfigError(where + ".B: must be an array of N [Bx,By,Bz] triples");
  }
  if (!g.is_array() || g.size() != n) {
    throw ConfigError(where + ".Gamma: must be an N x N x 3 array");
  }
  InlineModel out;
  for (std::size_t i = 0; i < n; ++i) {
    out.B.push_back(vec3(b[i], where + ".B[" + std::to_string(i) + "]"));
    const std::string row = where + ".Gamma[" + std::to_string(i) + "]";
    if (!g[i].is_array() || g[i].size() != n) {
      throw ConfigError(row + ": must have N entries");
    }
    out.Gamma.emplace_back();
    for (std::size_t j = 0; j < n; ++j) {
      const std::string cell = row + "[" + std::to_string(j) + "]";
      const Vec3 v = vec3(g[i][j], cell);
      if (i == j && (v[0] != 0.0 || v[1] != 0.0 || v[2] != 0.0)) {
        throw ConfigError(cell + ": diagonal couplings must be zero");
      }
      out.Gamma.back().push_back(v);
    }
  }
  return out;
}

const char* format_name(OutputFormat f) {
  return f == OutputFormat::kJson ? "json" : "tsv";
}

OutputFormat parse_format(const Json& v, const std::string& field) {
  if (v.is_string()) {
    if (v == "json") return OutputFormat::kJson;
    if (v == "tsv") return OutputFormat::kTsv;
  }
  throw ConfigError(field + ": must be \"json\" or \"tsv\"");
}

const char* method_name(SolverMethod m) {
  switch (m) {
    case SolverMethod::kHomotopy:
      return "homotopy";
    case SolverMethod::kMultistart:
      return "multistart";
    case SolverMethod::kAuto:
      return "auto";
  }
  return "auto";
}

}  // namespace

RunConfig parse_config(const Json& doc) {
  reject_unknown(doc, {"model", "tolerances", "solver", "oracle", "output"},
                 "config");
  RunConfig cfg;

  const auto& model = required(doc, "model", "config");
  reject_unknown(model, {"catalog", "inline"}, "model");
  const bool has_catalog = model.contains("catalog");
  const bool has_inline = model.contains("inline");
  if (has_catalog == has_inline) {
    throw ConfigError("model: exactly one of 'catalog' or 'inline' is required");
  }
  if (has_catalog) {
    cfg.model = parse_catalog(model.at("catalog"));
  } else {
    cfg.model = parse_inline(model.at("inline"));
  }

  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    reject_unknown(t, {"integrability", "solver", "dedupe", "oracle"}, "tolerances");
    if (t.contains("integrability")) {
      cfg.tolerances.integrability =
          positive(t.at("integrability"), "tolerances.integrability");
    }
    if (t.contains("solver")) {
      cfg.tolerances.solver = positive(t.at("solver"), "tolerances.solver");
    }
    if (t.contains("dedupe") && !t.at("dedupe").is_null()) {
      cfg.tolerances.dedupe = positive(t.at("dedupe"), "tolerances.dedupe");
    }
    if (t.contains("oracle")) {
      cfg.tolerances.oracle = positive(t.at("oracle"), "tolerances.oracle");
    }
  }

  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    reject_unknown(s, {"method", "seed", "max_iter", "sample_count"}, "solver");
    if (s.contains("method")) {
      const auto& m = s.at("method");
      if (m == "homotopy") {
        cfg.solver.method = SolverMethod::kHomotopy;
      } else if (m == "multistart") {
        cfg.solver.method = SolverMethod::kMultistart;
      } else if (m == "auto") {
        cfg.solver.method = SolverMethod::kAuto;
      } else {
        throw ConfigError("solver.method: must be homotopy, multistart or auto");
      }
    }
    if (s.contains("seed")) {
      const auto& v = s.at("seed");
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError("solver.seed: must be a non-negative integer");
      }
      cfg.solver.seed = v.get<std::uint64_t>();
    }
    if (s.contains("max_iter")) {
      cfg.solver.max_iter =
          static_cast<int>(integer(s.at("max_iter"), "solver.max_iter", 1, 100000));
    }
    if (s.contains("sample_count") && !s.at("sample_count").is_null()) {
      cfg.solver.sample_count = static_cast<std::size_t>(
          integer(s.at("sample_count"), "solver.sample_count", 1, 1'000'000'000));
    }
  }

  if (doc.contains("oracle")) {
    const auto& o = doc.at("oracle");
    reject_unknown(o, {"enabled", "dimension_cap"}, "oracle");
    if (o.contains("enabled")) {
      if (!o.at("enabled").is_boolean()) throw ConfigError("oracle.enabled: must be a boolean");
      cfg.oracle.enabled = o.at("enabled").get<bool>();
    }
    if (o.contains("dimension_cap")) {
      cfg.oracle.dimension_cap = static_cast<int>(
          integer(o.at("dimension_cap"), "oracle.dimension_cap", 1, 30));
    }
  }

  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    reject_unknown(o, {"format", "path", "timings"}, "output");
    if (o.contains("format")) cfg.output.format = parse_format(o.at("format"), "output.format");
    if (o.contains("path") && !o.at("path").is_null()) {
      if (!o.at("path").is_string()) throw ConfigError("output.path: must be a string");
      cfg.output.path = o.at("path").get<std::string>();
    }
    if (o.contains("timings")) {
      if (!o.at("timings").is_boolean()) throw ConfigError("output.timings: must be a boolean");
      cfg.output.timings = o.at("timings").get<bool>();
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

Json to_json(const RunConfig& cfg) {
  Json model;
  if (const auto* c = std::get_if<CatalogParams>(&cfg.model)) {
    Json cat;
    cat["family"] = family_name(c->family);
    cat["epsilon"] = c->epsilon;
    if (c->family == CatalogFamily::kXxzPip) {
      cat["G"] = c->G;
      cat["gamma"] = c->gamma;
    } else {
      cat["B"] = c->field;
    }
    model["catalog"] = cat;
  } else {
    const auto& m = std::get<InlineModel>(cfg.model);
    Json in;
    in["N"] = m.B.size();
    in["B"] = m.B;
    in["Gamma"] = m.Gamma;
    model["inline"] = in;
  }

  Json out;
  out["model"] = model;
  out["tolerances"] = {
      {"integrability", cfg.tolerances.integrability},
      {"solver", cfg.tolerances.solver},
      {"dedupe", cfg.tolerances.dedupe ? Json(*cfg.tolerances.dedupe) : Json(nullptr)},
      {"oracle", cfg.tolerances.oracle},
  };
  out["solver"] = {
      {"method", method_name(cfg.solver.method)},
      {"seed", cfg.solver.seed},
      {"max_iter", cfg.solver.max_iter},
      {"sample_count",
       cfg.solver.sample_count ? Json(*cfg.solver.sample_count) : Json(nullptr)},
  };
  out["oracle"] = {{"enabled", cfg.oracle.enabled},
                   {"dimension_cap", cfg.oracle.dimension_cap}};
  out["output"] = {
      {"format", format_name(cfg.output.format)},
      {"path", cfg.output.path ? Json(*cfg.output.path) : Json(nullptr)},
      {"timings", cfg.output.timings},
  };
  return out;
}

ModelSpec build_model(const RunConfig& cfg) {
  try {
    if (const auto* c = std::get_if<CatalogParams>(&cfg.model)) {
      return build_catalog_model(*c);
    }
    const auto& m = std::get<InlineModel>(cfg.model);
    return ModelSpec(m.B, m.Gamma);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.solver.seed = *o.seed;
  if (o.cap) {
    cfg.oracle.dimension_cap = *o.cap;
  } else if (o.env_cap) {
    cfg.oracle.dimension_cap = *o.env_cap;
  }
  if (cfg.oracle.dimension_cap < 1 || cfg.oracle.dimension_cap > 30) {
    throw ConfigError("dimension cap must lie in [1, 30]");
  }
  if (o.format) cfg.output.format = *o.format;
  if (o.output) cfg.output.path = *o.output;
}

}  // namespace rgquad::cli
