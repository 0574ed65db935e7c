// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "rgquad/bethe_solver.hpp"
#include "rgquad/catalog.hpp"
#include "rgquad/cli.hpp"
#include "rgquad/ed_oracle.hpp"
#include "support/oracle.hpp"

using namespace rgquad;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Shared draws so every criterion sees the same parameter sets.
struct Draw {
  std::vector<double> eps;
  double G = 0.0;
  double gamma = 0.0;
  double field = 1.0;
};

Draw draw(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Draw d;
  d.eps = oracle::spread_levels(rng, n, 0.2 + u(rng), 0.35);
  d.G = 0.3 + 0.9 * u(rng);
  d.gamma = 0.1 + 0.5 * u(rng);
  d.field = 0.6 + 0.8 * u(rng);
  return d;
}

ModelSpec family_model(int family, const Draw& d) {
  return family == 0 ? xxx_rational(d.eps, d.field) : xxz_pip(d.eps, d.G, d.gamma);
}

const char* family_label(int family) { return family == 0 ? "xxx" : "pip"; }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double worst_of(const std::vector<double>& v) {
  double w = 0.0;
  for (double x : v) w = std::max(w, x);
  return w;
}

Outcome integrability_certification() {
  std::mt19937_64 rng(101);
  double alg = 0.0;
  double comm_ratio = 0.0;
  for (int n = 2; n <= 6; ++n) {
    for (int f = 0; f < 2; ++f) {
      const auto spec = family_model(f, draw(rng, n));
      const auto a = check_integrability_algebraic(spec, 1e-11);
      alg = std::max({alg, a.max_field_residual, a.max_gaudin_residual});
      const auto c = check_commutators_numerical(spec, 1e-10);
      comm_ratio = std::max(comm_ratio, *c.max_commutator_norm / *c.commutator_threshold);
    }
  }
  return {alg <= 1e-11 && comm_ratio <= 1.0,
          "algebraic " + fmt("%.2e", alg) + ", commutator/threshold " + fmt("%.2e", comm_ratio)};
}

Outcome operator_identity() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n) {
    for (int f = 0; f < 2; ++f) {
      const auto spec = family_model(f, draw(rng, n));
      const auto q = derive_coefficients(spec, 1e-10);
      worst = std::max(worst, verify_operator_identity(spec, q, 1e-11).worst());
    }
  }
  return {worst <= 1e-11, "worst relative residual " + fmt("%.2e", worst)};
}

Outcome xxx_reproduction() {
  std::mt19937_64 rng(303);
  double rel = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const auto d = draw(rng, n);
    rel = std::max(rel, worst_of(verify_shifted_relation_xxx(d.eps, d.field)));
  }
  double tele = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto d = draw(rng, 2 + k % 7);
    tele = std::max(tele, worst_of(xxx_constant_identity(d.eps)));
  }
  return {rel <= 1e-11 && tele <= 1e-12,
          "shifted relation " + fmt("%.2e", rel) + ", telescopic sum " + fmt("%.2e", tele)};
}

Outcome pip_reproduction() {
  std::mt19937_64 rng(404);
  double rel = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const auto d = draw(rng, n);
    rel = std::max(rel, worst_of(verify_shifted_relation_pip(d.eps, d.G, d.gamma)));
  }
  double dbl = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto d = draw(rng, 2 + k % 7);
    dbl = std::max(dbl, worst_of(pip_constant_identity(d.eps, d.G)));
  }
  return {rel <= 1e-11 && dbl <= 1e-12,
          "shifted relation " + fmt("%.2e", rel) + ", double-sum cancellation " + fmt("%.2e", dbl)};
}

struct SpectrumRun {
  Outcome completeness;
  Outcome sum_rules;
};

SpectrumRun spectrum_and_sum_rules() {
  std::mt19937_64 rng(505);
  SpectrumRun out;
  double dist = 0.0;
  double rules = 0.0;
  double slowest_n8 = 0.0;
  std::string first_fail;
  for (int n = 2; n <= 8; ++n) {
    for (int f = 0; f < 2; ++f) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto spec = family_model(f, draw(rng, n));
      const auto q = derive_coefficients(spec, 1e-10);
      const auto set = solve_all_homotopy(spec, q);
      const auto m = match_spectra(set, joint_spectrum(spec), 1e-8);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (n == 8) slowest_n8 = std::max(slowest_n8, secs);
      const bool ok = set.found() == (std::size_t{1} << n) && m.perfect() &&
                      m.pairs.size() == set.found() && m.max_distance <= 1e-8;
      if (!ok && first_fail.empty()) {
        first_fail = std::string(family_label(f)) + " N=" + std::to_string(n) + " found " +
                     std::to_string(set.found());
      }
      out.completeness.pass = out.completeness.pass && ok;
      dist = std::max(dist, m.max_distance);
      const auto sr = spectral_sum_rules(set, q);
      out.sum_rules.pass = out.sum_rules.pass && sr.passed(1e-8);
      if (sr.applicable) rules = std::max(rules, sr.worst());
    }
  }
  out.completeness.pass = out.completeness.pass && slowest_n8 < 300.0;
  out.completeness.detail = "max distance " + fmt("%.2e", dist) + ", slowest N=8 run " +
                            fmt("%.1f s", slowest_n8) +
                            (first_fail.empty() ? "" : ", first failure: " + first_fail);
  out.sum_rules.detail = "worst relative moment " + fmt("%.2e", rules);
  return out;
}

Outcome reverse_check() {
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int n = 2; n <= 10; ++n) {
    for (int f = 0; f < 2; ++f) {
      const auto spec = family_model(f, draw(rng, n));
      const auto q = derive_coefficients(spec, 1e-10);
      for (const auto& t : joint_spectrum(spec).tuples) {
        worst = std::max(worst, bethe_residual(q, t).norm());
      }
    }
  }
  return {worst <= 1e-9, "worst ||F|| over ED tuples " + fmt("%.2e", worst)};
}

Outcome solver_internals() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double fd = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 6;
    const auto spec = family_model(k % 2, draw(rng, n));
    const auto q = derive_coefficients(spec, 1e-10);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r[i] = u(rng);
    const auto rj = residual_and_jacobian(q, r);
    const double h = 1e-6;
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd up = r, dn = r;
      up[j] += h;
      dn[j] -= h;
      const Eigen::VectorXd col = (bethe_residual(q, up) - bethe_residual(q, dn)) / (2 * h);
      for (int i = 0; i < n; ++i) {
        fd = std::max(fd, std::abs(col[i] - rj.J(i, j)) / std::max(1.0, std::abs(rj.J(i, j))));
      }
    }
  }
  bool agree = true;
  double spread = 0.0;
  for (int n = 2; n <= 5; ++n) {
    for (int f = 0; f < 2; ++f) {
      const auto spec = family_model(f, draw(rng, n));
      const auto q = derive_coefficients(spec, 1e-10);
      const auto h = solve_all_homotopy(spec, q);
      const auto m = solve_all_multistart(q);
      if (h.found() != m.found()) {
        agree = false;
        continue;
      }
      for (std::size_t k = 0; k < h.found(); ++k) {
        const double d = (h.tuples[k].r - m.tuples[k].r).cwiseAbs().maxCoeff();
        spread = std::max(spread, d);
        agree = agree && d <= h.dedupe_tol;
      }
    }
  }
  return {fd <= 1e-6 && agree,
          "jacobian vs central differences " + fmt("%.2e", fd) +
              ", homotopy vs multistart " + fmt("%.2e", spread)};
}

Outcome route_consistency() {
  std::mt19937_64 rng(808);
  double worst = 0.0;
  double triple = 0.0;
  for (int n = 2; n <= 6; ++n) {
    for (int f = 0; f < 2; ++f) {
      const auto spec = family_model(f, draw(rng, n));
      const auto q = derive_coefficients(spec, 1e-10);
      const auto r = check_coefficient_consistency(spec, q, 1e-12);
      worst = std::max(worst, r.worst());
      triple = std::max(triple, r.triple_relation_residual);
    }
  }
  return {worst <= 1e-12, "route spread / relation residual " + fmt("%.2e", worst) +
                              ", triple relation " + fmt("%.2e", triple)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_round_trip(const std::filesystem::path& data) {
  using namespace rgquad::cli;
  double worst = 0.0;
  bool same_shape = true;
  for (const char* doc :
       {R"({"model":{"catalog":{"family":"xxx_rational","epsilon":[0,0.7,1.9,2.6],"B":1.2}},"solver":{"seed":17}})",
        R"({"model":{"catalog":{"family":"xxz_pip","epsilon":[0.4,1.1,1.7],"G":0.9,"gamma":0.2}},"solver":{"method":"multistart","seed":17}})"}) {
    const auto first = cmd_solve(parse_config(Json::parse(doc)), false);
    const auto second = cmd_solve(parse_config(first.report["config"]), false);
    const auto& a = first.report["solutions"]["tuples"];
    const auto& b = second.report["solutions"]["tuples"];
    if (first.exit_code != 0 || a.size() != b.size()) {
      same_shape = false;
      continue;
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
      for (std::size_t i = 0; i < a[k]["r"].size(); ++i) {
        worst = std::max(worst, std::abs(a[k]["r"][i].get<double>() - b[k]["r"][i].get<double>()));
      }
    }
  }
  int stable = 0;
  int goldens = 0;
  for (const char* name : {"derive_xxx2", "solve_xxx2", "check_broken3"}) {
    ++goldens;
    const auto cfg = load_config((data / "golden" / (std::string(name) + ".config.json")).string());
    const std::string cmd = std::string(name).substr(0, std::string(name).find('_'));
    const auto res = cmd == "derive" ? cmd_derive(cfg)
                     : cmd == "solve" ? cmd_solve(cfg, false)
                                      : cmd_check(cfg);
    if (render_json(res.report) == slurp(data / "golden" / (std::string(name) + ".json"))) ++stable;
  }
  return {same_shape && worst <= 1e-12 && stable == goldens,
          "round-trip drift " + fmt("%.2e", worst) + ", golden files identical " +
              std::to_string(stable) + "/" + std::to_string(goldens)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path data = argc > 1 ? argv[1] : RGQUAD_TEST_DATA_DIR;
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s [%2d] %-36s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, "integrability certification", integrability_certification);
  report(2, "operator identity", operator_identity);
  report(3, "rational XXX shifted relation", xxx_reproduction);
  report(4, "p+ip shifted relation", pip_reproduction);
  std::optional<SpectrumRun> spectrum;
  report(5, "spectrum completeness and matching", [&] {
    spectrum = spectrum_and_sum_rules();
    return spectrum->completeness;
  });
  report(6, "ED tuples solve the Bethe equations", reverse_check);
  report(7, "sum rules without oracle", [&] {
    return spectrum ? spectrum->sum_rules : Outcome{false, "spectrum run did not complete"};
  });
  report(8, "solver internals", solver_internals);
  report(9, "coefficient route consistency", route_consistency);
  report(10, "CLI round-trip and golden files", [&] { return cli_round_trip(data); });

  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
