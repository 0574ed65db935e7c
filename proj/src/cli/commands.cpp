#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "report_json.hpp"
#include "rgquad/catalog.hpp"
#include "rgquad/errors.hpp"

namespace rgquad::cli {

namespace {

constexpr double kSumRuleTol = 1e-8;

class Stopwatch {
 public:
  void lap(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    laps_[stage] = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
  }
  Json json() const {
    Json out;
    for (const auto& [k, v] : laps_) out[k] = v;
    return out;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  std::map<std::string, double> laps_;
};

std::string model_label(const RunConfig& cfg, int n) {
  if (const auto* c = std::get_if<CatalogParams>(&cfg.model)) {
    return std::string(family_name(c->family)) + " N=" + std::to_string(n);
  }
  return "inline N=" + std::to_string(n);
}

Json base_report(const char* command, const RunConfig& cfg) {
  Json r;
  r["command"] = command;
  r["config"] = to_json(cfg);
  return r;
}

void record_error(Json& report, const char* type, const std::exception& e) {
  report["error"] = {{"type", type}, {"message", e.what()}};
}

/// Runs `body`, turning library errors into an "error" entry of the report.
template <class Body>
void guarded(Json& report, Body&& body) {
  try {
    body();
  } catch (const IntegrabilityViolation& e) {
    record_error(report, "IntegrabilityViolation", e);
  } catch (const DegenerateCoupling& e) {
    record_error(report, "DegenerateCoupling", e);
  } catch (const InternalInconsistency& e) {
    record_error(report, "InternalInconsistency", e);
  } catch (const StartupDegenerate& e) {
    record_error(report, "StartupDegenerate", e);
  } catch (const NonCommutingFamily& e) {
    record_error(report, "NonCommutingFamily", e);
  } catch (const DimensionCapExceeded& e) {
    record_error(report, "DimensionCapExceeded", e);
  } catch (const Error& e) {
    record_error(report, "Error", e);
  }
}

Json commutator_json(const ModelSpec& spec, const RunConfig& cfg) {
  if (!cfg.oracle.enabled) return {{"skipped", "oracle disabled"}};
  if (spec.num_spins() > cfg.oracle.dimension_cap) {
    return {{"skipped", "2^N above the dimension cap"}};
  }
  const auto rep = check_commutators_numerical(spec, cfg.tolerances.integrability,
                                               cfg.oracle.dimension_cap);
  Json out = integrability_json(rep);
  out.erase("max_field_residual");
  out.erase("max_gaudin_residual");
  out["max_norm"] = *rep.max_commutator_norm;
  out["threshold"] = *rep.commutator_threshold;
  return out;
}

/// Shared front half of derive/solve/verify. Returns nullopt after recording
/// an error in the report.
std::optional<QuadraticSystem> derive_into(Json& report, const ModelSpec& spec,
                                           const RunConfig& cfg, Stopwatch& clock) {
  const auto integ = check_integrability_algebraic(spec, cfg.tolerances.integrability);
  report["integrability"] = integrability_json(integ);
  clock.lap("integrability");
  if (!integ.passed()) {
    report["error"] = {{"type", "IntegrabilityViolation"},
                       {"message", "model violates " +
                                       std::to_string(integ.violations.size()) +
                                       " integrability constraints; first: " +
                                       describe(integ.violations.front())}};
    return std::nullopt;
  }
  std::optional<QuadraticSystem> q;
  guarded(report, [&] { q = derive_coefficients(spec, cfg.tolerances.integrability); });
  if (!q) return std::nullopt;
  report["quadratic_system"] = quadratic_system_json(*q);
  clock.lap("derive");
  return q;
}

std::optional<SolutionSet> solve_into(Json& report, const ModelSpec& spec,
                                      const QuadraticSystem& q, const RunConfig& cfg,
                                      Stopwatch& clock) {
  bool use_homotopy = cfg.solver.method == SolverMethod::kHomotopy;
  if (cfg.solver.method == SolverMethod::kAuto) use_homotopy = homotopy_applicable(spec);

  std::optional<SolutionSet> set;
  guarded(report, [&] {
    if (use_homotopy) {
      HomotopyOptions opt;
      opt.polish.tol = cfg.tolerances.solver;
      opt.polish.max_iter = cfg.solver.max_iter;
      opt.dedupe_tol = cfg.tolerances.dedupe;
      opt.integrability_tol = cfg.tolerances.integrability;
      set = solve_all_homotopy(spec, q, opt);
    } else {
      MultistartOptions opt;
      opt.seed = cfg.solver.seed;
      opt.sample_count = cfg.solver.sample_count;
      opt.newton.tol = cfg.tolerances.solver;
      opt.newton.max_iter = cfg.solver.max_iter;
      opt.dedupe_tol = cfg.tolerances.dedupe;
      set = solve_all_multistart(q, opt);
    }
  });
  if (!set) return std::nullopt;
  report["solutions"] = solutions_json(*set, use_homotopy ? "homotopy" : "multistart");
  report["sum_rules"] = sum_rules_json(spectral_sum_rules(*set, q), kSumRuleTol);
  clock.lap("solve");
  return set;
}

template <class Body>
CommandResult run_command(const char* name, const RunConfig& cfg, Body&& body) {
  CommandResult res;
  res.report = base_report(name, cfg);
  Stopwatch clock;
  std::optional<ModelSpec> spec;
  guarded(res.report, [&] { spec = build_model(cfg); });
  clock.lap("model");
  if (spec) {
    res.report["model"] = {{"label", model_label(cfg, spec->num_spins())},
                           {"N", spec->num_spins()}};
    body(res.report, *spec, clock);
  }
  if (cfg.output.timings) res.report["timings_ms"] = clock.json();
  res.exit_code = exit_code_for(res.report);
  return res;
}

}  // namespace

CommandResult cmd_check(const RunConfig& cfg) {
  return run_command("check", cfg, [&](Json& report, const ModelSpec& spec, Stopwatch& clock) {
    report["integrability"] =
        integrability_json(check_integrability_algebraic(spec, cfg.tolerances.integrability));
    clock.lap("integrability");
    report["commutators"] = commutator_json(spec, cfg);
    clock.lap("commutators");
  });
}

CommandResult cmd_derive(const RunConfig& cfg) {
  return run_command("derive", cfg, [&](Json& report, const ModelSpec& spec, Stopwatch& clock) {
    const auto q = derive_into(report, spec, cfg, clock);
    if (!q) return;
    report["consistency"] =
        consistency_json(check_coefficient_consistency(spec, *q, cfg.tolerances.integrability));
    if (cfg.oracle.enabled && spec.num_spins() <= cfg.oracle.dimension_cap) {
      report["operator_identity"] = identity_json(
          verify_operator_identity(spec, *q, 1e-10, cfg.oracle.dimension_cap));
      clock.lap("operator_identity");
    }
  });
}

CommandResult cmd_solve(const RunConfig& cfg, bool allow_incomplete) {
  return run_command("solve", cfg, [&](Json& report, const ModelSpec& spec, Stopwatch& clock) {
    report["policy"] = {{"allow_incomplete", allow_incomplete}};
    const auto q = derive_into(report, spec, cfg, clock);
    if (!q) return;
    solve_into(report, spec, *q, cfg, clock);
  });
}

CommandResult cmd_verify(const RunConfig& cfg, bool allow_incomplete) {
  return run_command("verify", cfg, [&](Json& report, const ModelSpec& spec, Stopwatch& clock) {
    report["policy"] = {{"allow_incomplete", allow_incomplete}};
    if (!cfg.oracle.enabled) {
      report["error"] = {{"type", "OracleDisabled"},
                         {"message", "verify needs oracle.enabled = true"}};
      return;
    }
    const auto q = derive_into(report, spec, cfg, clock);
    if (!q) return;
    const auto set = solve_into(report, spec, *q, cfg, clock);
    if (!set) return;
    guarded(report, [&] {
      JointSpectrumOptions opt;
      opt.seed = cfg.solver.seed;
      opt.spin_cap = cfg.oracle.dimension_cap;
      opt.commutator_tol = cfg.tolerances.integrability;
      const auto table = joint_spectrum(spec, opt);
      clock.lap("oracle");
      report["oracle"] = spectrum_json(table);
      report["match"] = match_json(match_spectra(*set, table, cfg.tolerances.oracle),
                                   table.tuples.size());
      clock.lap("match");
    });
  });
}

Json cmd_catalog() {
  Json out;
  out["command"] = "catalog";
  Json families = Json::array();
  for (const auto& f : catalog_families()) {
    families.push_back(
        {{"name", f.name}, {"summary", f.summary}, {"parameters", f.parameters}});
  }
  out["families"] = families;
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Quadratic Bethe equations for spin-1/2 Richardson-Gaudin models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  std::string format;
  std::uint64_t seed = 0;
  bool allow_incomplete = false;
  int cap = 0;

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"check", "certify integrability (algebraic and commutator checks)"},
           {"derive", "derive C_ij and K_i and verify the operator identity"},
           {"solve", "solve the quadratic Bethe equations for the full spectrum"},
           {"verify", "solve and match against exact diagonalization"},
           {"catalog", "list the built-in model families"}}) {
    auto* sub = app.add_subcommand(name, help);
    subs[name] = sub;
    if (name != "catalog") sub->add_option("--config", config_path, "JSON run config")->required();
    sub->add_option("--output", output_path, "write the report here instead of stdout");
    sub->add_option("--format", format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
    if (name != "catalog") {
      sub->add_option("--seed", seed, "RNG seed (overrides solver.seed)");
      sub->add_flag("--allow-incomplete", allow_incomplete,
                    "do not fail when fewer than 2^N tuples are found");
      sub->add_option("--cap", cap, "largest N for dense operator work")
          ->check(CLI::Range(1, 30));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto emit = [&](const Json& report, OutputFormat fmt,
                  const std::optional<std::string>& path) {
    const std::string text = fmt == OutputFormat::kTsv ? render_tsv(report) : render_json(report);
    if (path) {
      std::ofstream out(*path);
      if (!out) {
        std::cerr << "error: cannot write " << *path << '\n';
        return false;
      }
      out << text;
    } else {
      std::cout << text;
    }
    return true;
  };

  const auto format_override = [&]() -> std::optional<OutputFormat> {
    if (format.empty()) return std::nullopt;
    return format == "tsv" ? OutputFormat::kTsv : OutputFormat::kJson;
  }();

  if (subs["catalog"]->parsed()) {
    const auto report = cmd_catalog();
    std::optional<std::string> path;
    if (!output_path.empty()) path = output_path;
    return emit(report, format_override.value_or(OutputFormat::kJson), path) ? 0 : 2;
  }

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    Overrides o;
    for (auto* sub : app.get_subcommands()) {
      if (sub->count("--seed")) o.seed = seed;
      if (sub->count("--cap")) o.cap = cap;
    }
    if (const char* env = std::getenv("RGQUAD_CAP")) {
      try {
        o.env_cap = std::stoi(env);
      } catch (const std::exception&) {
        throw ConfigError("RGQUAD_CAP must be an integer, got '" + std::string(env) + "'");
      }
    }
    o.format = format_override;
    if (!output_path.empty()) o.output = output_path;
    apply_overrides(cfg, o);
    // Reject models that cannot be built before doing any work.
    (void)build_model(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IntegrabilityViolation&) {
    // Certification failures are domain failures, reported by the command.
  }

  CommandResult res;
  if (subs["check"]->parsed()) {
    res = cmd_check(cfg);
  } else if (subs["derive"]->parsed()) {
    res = cmd_derive(cfg);
  } else if (subs["solve"]->parsed()) {
    res = cmd_solve(cfg, allow_incomplete);
  } else {
    res = cmd_verify(cfg, allow_incomplete);
  }
  std::cerr << render_summary(res.report);
  if (!emit(res.report, cfg.output.format, cfg.output.path)) return 2;
  return res.exit_code;
}

}  // namespace rgquad::cli
