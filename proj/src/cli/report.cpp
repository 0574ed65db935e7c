#include <iomanip>
#include <sstream>

#include "report_json.hpp"

namespace rgquad::cli {

namespace {

const char* family_label(ConstraintFamily f) {
  switch (f) {
    case ConstraintFamily::kField:
      return "field";
    case ConstraintFamily::kGaudin:
      return "gaudin";
    case ConstraintFamily::kCommutator:
      return "commutator";
  }
  return "unknown";
}

std::string axes_label(const std::array<PauliAxis, 3>& a) {
  return {axis_name(a[0]), axis_name(a[1]), axis_name(a[2])};
}

std::string number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string short_number(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << x;
  return os.str();
}

bool flag(const Json& obj, const char* key) {
  return obj.contains(key) && obj.at(key).is_boolean() && obj.at(key).get<bool>();
}

}  // namespace

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json integrability_json(const IntegrabilityReport& r) {
  Json out;
  out["max_field_residual"] = r.max_field_residual;
  out["max_gaudin_residual"] = r.max_gaudin_residual;
  out["passed"] = r.passed();
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    Json j;
    j["family"] = family_label(v.family);
    j["spins"] = v.spins;
    if (v.family != ConstraintFamily::kCommutator) j["axes"] = axes_label(v.axes);
    j["residual"] = v.residual;
    violations.push_back(j);
  }
  out["violations"] = violations;
  return out;
}

Json quadratic_system_json(const QuadraticSystem& q) {
  Json out;
  out["N"] = q.num_spins;
  Json c = Json::array();
  Json prov = Json::array();
  for (int i = 0; i < q.num_spins; ++i) {
    Json row = Json::array();
    Json prow = Json::array();
    for (int j = 0; j < q.num_spins; ++j) {
      row.push_back(q.C(i, j));
      const auto& p = q.provenance_of(i, j);
      std::string tag = route_name(p.route);
      if (p.axis) tag += std::string(":") + axis_name(*p.axis);
      prow.push_back(tag);
    }
    c.push_back(row);
    prov.push_back(prow);
  }
  out["C"] = c;
  out["K"] = vector_json(q.K());
  out["provenance"] = prov;
  return out;
}

Json consistency_json(const ConsistencyReport& r) {
  return {
      {"gamma_route_spread", r.gamma_route_spread},
      {"field_route_spread", r.field_route_spread},
      {"field_relation_residual", r.field_relation_residual},
      {"gamma_relation_residual", r.gamma_relation_residual},
      {"triple_relation_residual", r.triple_relation_residual},
      {"tol", r.tol},
      {"passed", r.passed()},
  };
}

Json identity_json(const OperatorIdentityReport& r) {
  return {{"relative_residuals", r.relative_residuals},
          {"tol", r.tol},
          {"passed", r.passed()}};
}

Json solutions_json(const SolutionSet& s, const char* method) {
  Json out;
  out["method"] = method;
  out["found"] = s.found();
  out["expected"] = s.expected;
  out["complete"] = s.complete();
  out["dedupe_tol"] = s.dedupe_tol;
  out["seed"] = s.seed ? Json(*s.seed) : Json(nullptr);
  Json tuples = Json::array();
  for (const auto& t : s.tuples) {
    Json j;
    j["r"] = vector_json(t.r);
    j["residual"] = t.residual_norm;
    if (t.branch) j["branch"] = *t.branch;
    tuples.push_back(j);
  }
  out["tuples"] = tuples;
  Json failures = Json::array();
  for (const auto& f : s.failures) {
    failures.push_back(
        {{"branch", f.branch}, {"lambda_reached", f.lambda_reached}, {"cause", f.cause}});
  }
  out["failures"] = failures;
  return out;
}

Json sum_rules_json(const SumRuleReport& r, double tol) {
  return {{"applicable", r.applicable},
          {"first_moment", vector_json(r.first_moment)},
          {"second_moment", vector_json(r.second_moment)},
          {"tol", tol},
          {"passed", r.passed(tol)}};
}

Json spectrum_json(const SpectrumTable& t) {
  Json out;
  Json rows = Json::array();
  for (const auto& r : t.tuples) rows.push_back(vector_json(r));
  out["tuples"] = rows;
  out["diag_residual"] = t.diag_residual;
  out["combo_seed"] = t.combo_seed;
  out["combination"] = vector_json(t.combination);
  out["redraws"] = t.redraws;
  out["block_refinement"] = t.used_block_refinement;
  out["persistent_multiplicities"] = t.persistent_multiplicities;
  return out;
}

Json match_json(const MatchReport& m, std::size_t oracle_rows) {
  Json out;
  Json pairs = Json::array();
  for (const auto& p : m.pairs) {
    pairs.push_back({{"solver", p.solver_index},
                     {"oracle", p.oracle_index},
                     {"multiplicity", p.multiplicity},
                     {"distance", p.distance}});
  }
  out["matched"] = m.pairs.size();
  out["oracle_rows"] = oracle_rows;
  out["max_distance"] = m.max_distance;
  out["tol"] = m.tol;
  out["pairs"] = pairs;
  out["unmatched_solver"] = m.unmatched_solver;
  out["unmatched_oracle"] = m.unmatched_oracle;
  out["perfect"] = m.perfect();
  return out;
}

int exit_code_for(const Json& report) {
  if (report.contains("error")) return 1;
  const std::string cmd = report.value("command", "");
  if (cmd == "catalog") return 0;
  if (report.contains("integrability") && !flag(report["integrability"], "passed")) {
    return 1;
  }
  if (report.contains("commutators") && !report["commutators"].contains("skipped") &&
      !flag(report["commutators"], "passed")) {
    return 1;
  }
  if (cmd == "check") return 0;
  if (report.contains("consistency") && !flag(report["consistency"], "passed")) return 1;
  if (report.contains("operator_identity") &&
      !flag(report["operator_identity"], "passed")) {
    return 1;
  }
  if (cmd == "derive") return 0;

  const bool allow_incomplete =
      report.contains("policy") && flag(report["policy"], "allow_incomplete");
  if (report.contains("solutions")) {
    if (!flag(report["solutions"], "complete") && !allow_incomplete) return 1;
  }
  if (report.contains("sum_rules")) {
    const auto& s = report["sum_rules"];
    if (flag(s, "applicable") && !flag(s, "passed")) return 1;
  }
  if (cmd == "verify") {
    if (!report.contains("match")) return 1;
    const auto& m = report["match"];
    if (!m["unmatched_solver"].empty()) return 1;
    if (!m["unmatched_oracle"].empty() && !allow_incomplete) return 1;
  }
  return 0;
}

std::string render_json(const Json& report) { return report.dump(2) + "\n"; }

std::string render_tsv(const Json& report) {
  std::ostringstream os;
  const std::string cmd = report.value("command", "");
  if (cmd == "catalog") {
    os << "family\tparameters\n";
    for (const auto& f : report["families"]) {
      os << f["name"].get<std::string>() << '\t';
      bool first = true;
      for (const auto& p : f["parameters"]) {
        os << (first ? "" : "; ") << p.get<std::string>();
        first = false;
      }
      os << '\n';
    }
    return os.str();
  }
  if (report.contains("error")) {
    os << "error\t" << report["error"]["type"].get<std::string>() << '\t'
       << report["error"]["message"].get<std::string>() << '\n';
    return os.str();
  }
  if (report.contains("solutions")) {
    const auto& tuples = report["solutions"]["tuples"];
    const std::size_t n = tuples.empty() ? 0 : tuples[0]["r"].size();
    std::vector<double> distance(tuples.size(), -1.0);
    if (report.contains("match")) {
      for (const auto& p : report["match"]["pairs"]) {
        distance[p["solver"].get<std::size_t>()] = p["distance"].get<double>();
      }
    }
    os << "index";
    for (std::size_t i = 0; i < n; ++i) os << "\tr_" << i;
    os << "\tresidual\tbranch";
    if (report.contains("match")) os << "\tmatch_distance";
    os << '\n';
    for (std::size_t k = 0; k < tuples.size(); ++k) {
      const auto& t = tuples[k];
      os << k;
      for (const auto& x : t["r"]) os << '\t' << number(x.get<double>());
      os << '\t' << number(t["residual"].get<double>()) << '\t';
      if (t.contains("branch")) {
        for (const auto& s : t["branch"]) os << (s.get<int>() > 0 ? '+' : '-');
      }
      if (report.contains("match")) {
        os << '\t';
        if (distance[k] >= 0.0) os << number(distance[k]);
      }
      os << '\n';
    }
    return os.str();
  }
  if (report.contains("quadratic_system")) {
    const auto& q = report["quadratic_system"];
    os << "kind\ti\tj\tvalue\troute\n";
    const auto n = q["N"].get<std::size_t>();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        os << "C\t" << i << '\t' << j << '\t' << number(q["C"][i][j].get<double>())
           << '\t' << q["provenance"][i][j].get<std::string>() << '\n';
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      os << "K\t" << i << "\t\t" << number(q["K"][i].get<double>()) << "\t\n";
    }
    return os.str();
  }
  os << "family\tspins\taxes\tresidual\n";
  for (const char* section : {"integrability", "commutators"}) {
    if (!report.contains(section)) continue;
    for (const auto& v : report[section]["violations"]) {
      os << v["family"].get<std::string>() << '\t';
      bool first = true;
      for (const auto& s : v["spins"]) {
        os << (first ? "" : ",") << s.get<int>();
        first = false;
      }
      os << '\t' << v.value("axes", "") << '\t' << number(v["residual"].get<double>())
         << '\n';
    }
  }
  return os.str();
}

std::string render_summary(const Json& report) {
  std::ostringstream os;
  auto row = [&](const std::string& k, const std::string& v) {
    os << std::left << std::setw(14) << k << v << '\n';
  };
  const std::string cmd = report.value("command", "");
  row("command", cmd);
  if (report.contains("model")) {
    row("model", report["model"].value("label", std::string("?")));
  }
  if (report.contains("error")) {
    row("error", report["error"]["type"].get<std::string>() + ": " +
                     report["error"]["message"].get<std::string>());
  }
  if (report.contains("integrability")) {
    const auto& r = report["integrability"];
    row("integrable", std::string(flag(r, "passed") ? "yes" : "NO") + " (field " +
                          short_number(r["max_field_residual"].get<double>()) +
                          ", gaudin " +
                          short_number(r["max_gaudin_residual"].get<double>()) + ")");
  }
  if (report.contains("commutators")) {
    const auto& r = report["commutators"];
    if (r.contains("skipped")) {
      row("commutators", "skipped: " + r["skipped"].get<std::string>());
    } else {
      row("commutators", std::string(flag(r, "passed") ? "commute" : "DO NOT COMMUTE") +
                             " (max " + short_number(r["max_norm"].get<double>()) + ")");
    }
  }
  if (report.contains("operator_identity")) {
    const auto& r = report["operator_identity"];
    double worst = 0.0;
    for (const auto& x : r["relative_residuals"]) worst = std::max(worst, x.get<double>());
    row("identity", std::string(flag(r, "passed") ? "holds" : "FAILS") + " (worst " +
                        short_number(worst) + ")");
  }
  if (report.contains("solutions")) {
    const auto& s = report["solutions"];
    row("solutions", std::to_string(s["found"].get<std::size_t>()) + "/" +
                         std::to_string(s["expected"].get<std::size_t>()) + " via " +
                         s["method"].get<std::string>());
  }
  if (report.contains("sum_rules")) {
    const auto& s = report["sum_rules"];
    row("sum rules", !flag(s, "applicable") ? "n/a (incomplete)"
                                             : (flag(s, "passed") ? "pass" : "FAIL"));
  }
  if (report.contains("match")) {
    const auto& m = report["match"];
    row("match", std::to_string(m["matched"].get<std::size_t>()) + " matched, " +
                     std::to_string(m["unmatched_solver"].size()) + " solver / " +
                     std::to_string(m["unmatched_oracle"].size()) +
                     " oracle unmatched, max distance " +
                     short_number(m["max_distance"].get<double>()));
  }
  const int code = exit_code_for(report);
  row("status", std::string(code == 0 ? "PASS" : "FAIL") + " (exit " +
                    std::to_string(code) + ")");
  return os.str();
}

}  // namespace rgquad::cli
