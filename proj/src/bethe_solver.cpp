#include "rgquad/bethe_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/SVD>

#include "rgquad/errors.hpp"

namespace rgquad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_norm_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

bool lexicographic_less(const EigenvalueTuple& a, const EigenvalueTuple& b);

void refine_all(const QuadraticSystem& q, SolutionSet& set, Execution exec);

bool lexicographic_less(const EigenvalueTuple& a, const EigenvalueTuple& b) {
  return std::lexicographical_compare(a.r.data(), a.r.data() + a.r.size(),
                                      b.r.data(), b.r.data() + b.r.size());
}

std::size_t spectrum_size(int num_spins) {
  return std::size_t{1} << num_spins;
}

std::vector<int> sign_vector(int num_spins, std::size_t branch) {
  std::vector<int> s(static_cast<std::size_t>(num_spins));
  for (int i = 0; i < num_spins; ++i) {
    s[i] = (branch >> (num_spins - 1 - i)) & 1U ? -1 : 1;
  }
  return s;
}

struct TrackResult {
  bool ok = false;
  EigenvalueTuple tuple;
  PathFailure failure;
};

struct TrackSettings {
  double initial_step;
  double max_step;
};

/// Follows one solution of the lambda-family from lambda = 0 to 1.
TrackResult track_path(const QuadraticSystem& q, const Eigen::VectorXd& start,
                       const std::vector<int>& branch,
                       const HomotopyOptions& opt, const TrackSettings& steps) {
  TrackResult out;
  out.failure.branch = branch;
  Eigen::VectorXd r = start;
  double lambda = 0.0;
  double h = steps.initial_step;

  while (lambda < 1.0) {
    h = std::min(h, 1.0 - lambda);
    const QuadraticSystem here = q.at_coupling_scale(lambda);
    const Eigen::MatrixXd J = residual_and_jacobian(here, r).J;
    // dF/dlambda = -C r - 2 lambda K_coupling, so J dr/dlambda = C r + 2 lambda K_coupling.
    const Eigen::VectorXd rhs = q.C * r + 2.0 * lambda * q.K_coupling;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    const Eigen::VectorXd tangent = lu.solve(rhs);
    if (!tangent.allFinite()) {
      out.failure.lambda_reached = lambda;
      out.failure.cause = "singular Jacobian along the path";
      return out;
    }

    const double next = (1.0 - lambda - h) < steps.initial_step * 1e-9 ? 1.0 : lambda + h;
    const Eigen::VectorXd predicted = r + (next - lambda) * tangent;
    const QuadraticSystem there = q.at_coupling_scale(next);
    const auto corr = newton_solve(there, predicted, opt.corrector);
    const double bound = opt.max_correction * (1.0 + r.cwiseAbs().maxCoeff());
    if (corr.converged() && max_norm_distance(corr.best.r, predicted) <= bound) {
      r = corr.best.r;
      lambda = next;
      if (corr.iterations <= 3) h = std::min(2.0 * h, steps.max_step);
      continue;
    }
    h *= 0.5;
    if (h < opt.min_step) {
      out.failure.lambda_reached = lambda;
      out.failure.cause = "step size fell below the minimum";
      return out;
    }
  }

  const auto polished = newton_solve(q, r, opt.polish);
  if (!polished.converged()) {
    out.failure.lambda_reached = 1.0;
    out.failure.cause =
        std::string("final polish failed: ") + status_name(polished.status);
    return out;
  }
  out.ok = true;
  out.tuple = polished.best;
  out.tuple.branch = branch;
  return out;
}

}  // namespace

// --- residuals ----------------------------------------------------------------

Eigen::VectorXd bethe_residual(const QuadraticSystem& q, const Eigen::VectorXd& r) {
  if (r.size() != q.num_spins) {
    throw std::invalid_argument("tuple length does not match the system");
  }
  // C has a zero diagonal, so C r is exactly sum_{j != i} C_ij r_j.
  return r.array().square().matrix() - q.C * r - q.K();
}

ResidualJacobian residual_and_jacobian(const QuadraticSystem& q,
                                       const Eigen::VectorXd& r) {
  ResidualJacobian out;
  out.F = bethe_residual(q, r);
  out.J = -q.C;
  out.J.diagonal() = 2.0 * r;
  return out;
}

double residual_floor(const QuadraticSystem& q, const Eigen::VectorXd& r) {
  const Eigen::VectorXd mag = r.array().square().matrix() +
                              q.C.cwiseAbs() * r.cwiseAbs() + q.K().cwiseAbs();
  return 64.0 * kEps * mag.norm();
}

const char* status_name(NewtonStatus s) noexcept {
  switch (s) {
    case NewtonStatus::kConverged:
      return "converged";
    case NewtonStatus::kMaxIterations:
      return "max_iterations";
    case NewtonStatus::kSingularJacobian:
      return "singular_jacobian";
    case NewtonStatus::kLineSearchFailed:
      return "line_search_failed";
  }
  return "unknown";
}

// --- Newton -------------------------------------------------------------------

NewtonResult newton_solve(const QuadraticSystem& q, const Eigen::VectorXd& r0,
                          const NewtonOptions& options) {
  NewtonResult res;
  Eigen::VectorXd r = r0;
  Eigen::VectorXd F = bethe_residual(q, r);
  double fnorm = F.norm();
  res.best = {r, fnorm, std::nullopt};

  auto done = [&](const Eigen::VectorXd& x, double fn) {
    return fn <= options.tol || fn <= residual_floor(q, x);
  };

  for (int it = 0; it <= options.max_iter; ++it) {
    res.iterations = it;
    if (done(r, fnorm)) {
      res.status = NewtonStatus::kConverged;
      res.best = {r, fnorm, std::nullopt};
      return res;
    }
    if (it == options.max_iter) break;

    const auto rj = residual_and_jacobian(q, r);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(rj.J, Eigen::ComputeFullU |
                                                          Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || smax / smin > options.max_condition) {
      res.status = NewtonStatus::kSingularJacobian;
      return res;
    }
    const Eigen::VectorXd step = svd.solve(-F);

    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h) {
      const Eigen::VectorXd trial = r + t * step;
      const Eigen::VectorXd Ft = bethe_residual(q, trial);
      const double fn = Ft.norm();
      if (fn < fnorm) {
        r = trial;
        F = Ft;
        fnorm = fn;
        res.max_halvings_used = std::max(res.max_halvings_used, h);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // No decrease is possible once F is at roundoff level.
      res.status = done(r, fnorm) ? NewtonStatus::kConverged
                                  : NewtonStatus::kLineSearchFailed;
      res.best = {r, fnorm, std::nullopt};
      return res;
    }
    if (fnorm < res.best.residual_norm) res.best = {r, fnorm, std::nullopt};
  }
  res.status = NewtonStatus::kMaxIterations;
  return res;
}

// --- dedupe -------------------------------------------------------------------

EigenvalueTuple refine_extended(const QuadraticSystem& q, const EigenvalueTuple& t) {
  const int n = q.num_spins;
  if (q.C_ext.rows() != n || t.r.size() != n) return t;
  const ExtendedVector K = q.K_field_ext + q.K_coupling_ext;
  auto residual = [&](const ExtendedVector& x) -> ExtendedVector {
    return x.cwiseProduct(x) - q.C_ext * x - K;
  };
  const ExtendedVector start = t.r.cast<long double>();
  ExtendedVector r = start;
  ExtendedVector F = residual(r);
  long double best = F.norm();
  for (int it = 0; it < 4; ++it) {
    ExtendedMatrix J = -q.C_ext;
    J.diagonal() += 2.0L * r;
    const ExtendedVector next = r - J.fullPivLu().solve(F);
    if (!next.allFinite()) break;
    const ExtendedVector Fn = residual(next);
    if (!(Fn.norm() < best)) break;
    r = next;
    F = Fn;
    best = Fn.norm();
  }
  // A refinement that travels is heading for a different root.
  const long double moved = (r - start).cwiseAbs().maxCoeff();
  if (moved > 1e-6L * (1.0L + start.cwiseAbs().maxCoeff())) return t;
  EigenvalueTuple out = t;
  out.r = r.cast<double>();
  out.residual_norm = bethe_residual(q, out.r).norm();
  return out;
}

double default_dedupe_tol(const QuadraticSystem& q) {
  const Eigen::VectorXd K = q.K();
  const double root = K.size() ? K.cwiseMax(0.0).cwiseSqrt().maxCoeff() : 0.0;
  return 1e-7 * (1.0 + root);
}

SolutionSet dedupe(std::vector<EigenvalueTuple> tuples, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("dedupe tol must be positive");
  std::stable_sort(tuples.begin(), tuples.end(),
                   [](const auto& a, const auto& b) {
                     return a.residual_norm < b.residual_norm;
                   });
  SolutionSet out;
  out.dedupe_tol = tol;
  for (auto& t : tuples) {
    const bool seen = std::any_of(
        out.tuples.begin(), out.tuples.end(),
        [&](const auto& kept) { return max_norm_distance(kept.r, t.r) <= tol; });
    if (!seen) out.tuples.push_back(std::move(t));
  }
  std::sort(out.tuples.begin(), out.tuples.end(), lexicographic_less);
  if (!out.tuples.empty()) {
    out.expected = spectrum_size(static_cast<int>(out.tuples.front().r.size()));
  }
  return out;
}

namespace {

void refine_all(const QuadraticSystem& q, SolutionSet& set, Execution exec) {
  const auto count = static_cast<long>(set.tuples.size());
#pragma omp parallel for schedule(static) if (exec == Execution::kParallel)
  for (long k = 0; k < count; ++k) {
    auto& t = set.tuples[static_cast<std::size_t>(k)];
    t = refine_extended(q, t);
  }
  std::sort(set.tuples.begin(), set.tuples.end(), lexicographic_less);
}

}  // namespace

// --- homotopy -----------------------------------------------------------------

bool homotopy_applicable(const ModelSpec& spec, double startup_factor) {
  const double threshold = startup_factor * (1.0 + spec.max_abs_coupling());
  for (int i = 0; i < spec.num_spins(); ++i) {
    if (!(spec.field_norm(i) > threshold)) return false;
  }
  return true;
}

SolutionSet solve_all_homotopy(const ModelSpec& spec,
                               const HomotopyOptions& options) {
  if (!homotopy_applicable(spec, options.startup_factor)) {
    throw StartupDegenerate(
        "some |B_i| is below the homotopy startup threshold; use multistart "
        "or add a small generic field");
  }
  return solve_all_homotopy(
      spec, derive_coefficients(spec, options.integrability_tol), options);
}

SolutionSet solve_all_homotopy(const ModelSpec& spec, const QuadraticSystem& q,
                               const HomotopyOptions& options) {
  const int n = spec.num_spins();
  if (q.num_spins != n) {
    throw std::invalid_argument("quadratic system does not match the model");
  }
  if (n > 30) throw std::invalid_argument("too many homotopy paths");
  if (!homotopy_applicable(spec, options.startup_factor)) {
    throw StartupDegenerate(
        "some |B_i| is below the homotopy startup threshold; use multistart "
        "or add a small generic field");
  }

  Eigen::VectorXd magnitudes(n);
  for (int i = 0; i < n; ++i) magnitudes[i] = spec.field_norm(i);

  const std::size_t paths = spectrum_size(n);
  const double tol = options.dedupe_tol.value_or(default_dedupe_tol(q));
  std::vector<TrackResult> results(paths);
  TrackSettings steps{options.initial_step, options.max_step};

  auto run = [&](const std::vector<std::size_t>& which) {
    const auto count = static_cast<long>(which.size());
#pragma omp parallel for schedule(dynamic) if (options.exec == Execution::kParallel)
    for (long w = 0; w < count; ++w) {
      const std::size_t b = which[static_cast<std::size_t>(w)];
      const auto s = sign_vector(n, b);
      Eigen::VectorXd start(n);
      for (int i = 0; i < n; ++i) start[i] = s[i] * magnitudes[i];
      results[b] = track_path(q, start, s, options, steps);
    }
  };

  std::vector<std::size_t> pending(paths);
  for (std::size_t b = 0; b < paths; ++b) pending[b] = b;
  run(pending);

  for (int round = 0; round < options.refinement_rounds; ++round) {
    // Branches that failed or landed on an already-claimed endpoint.
    pending.clear();
    bool collided = false;
    for (std::size_t b = 0; b < paths; ++b) {
      if (!results[b].ok) {
        pending.push_back(b);
        continue;
      }
      for (std::size_t c = 0; c < paths; ++c) {
        if (c != b && results[c].ok &&
            max_norm_distance(results[b].tuple.r, results[c].tuple.r) <= tol) {
          pending.push_back(b);
          collided = true;
          break;
        }
      }
    }
    if (pending.empty()) break;
    // A collision that survived one retrack usually means some other branch
    // jumped onto the contested endpoint without colliding itself (paths
    // can swap in cycles), so every branch is retracked.
    if (collided && round > 0) {
      pending.resize(paths);
      for (std::size_t b = 0; b < paths; ++b) pending[b] = b;
    }
    steps.initial_step /= 8.0;
    steps.max_step /= 8.0;
    run(pending);
  }

  std::vector<EigenvalueTuple> found;
  std::vector<PathFailure> failures;
  for (auto& res : results) {
    if (res.ok) {
      found.push_back(std::move(res.tuple));
    } else {
      failures.push_back(std::move(res.failure));
    }
  }
  SolutionSet set = dedupe(std::move(found), tol);
  refine_all(q, set, options.exec);
  set.expected = paths;
  set.failures = std::move(failures);
  return set;
}

// --- multistart ---------------------------------------------------------------

Eigen::VectorXd default_sampling_box(const QuadraticSystem& q) {
  const Eigen::VectorXd K = q.K();
  Eigen::VectorXd box(q.num_spins);
  for (int i = 0; i < q.num_spins; ++i) {
    box[i] = std::sqrt(std::max(K[i], 0.0)) + q.C.row(i).cwiseAbs().sum();
  }
  return box;
}

SolutionSet solve_all_multistart(const QuadraticSystem& q,
                                 const MultistartOptions& options) {
  const int n = q.num_spins;
  if (n > 30) throw std::invalid_argument("too many unknowns for multistart");
  const std::size_t expected = spectrum_size(n);
  const std::size_t samples = options.sample_count.value_or(200 * expected);
  const Eigen::VectorXd box = options.half_width.value_or(default_sampling_box(q));
  if (box.size() != n) throw std::invalid_argument("sampling box has wrong size");

  // Samples are drawn up front so the result does not depend on scheduling.
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXd starts(n, static_cast<Eigen::Index>(samples));
  for (std::size_t s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) {
      starts(i, static_cast<Eigen::Index>(s)) = box[i] * unit(rng);
    }
  }

  std::vector<std::optional<EigenvalueTuple>> hits(samples);
  const auto count = static_cast<long>(samples);
#pragma omp parallel for schedule(dynamic, 16) if (options.exec == Execution::kParallel)
  for (long s = 0; s < count; ++s) {
    auto res = newton_solve(q, starts.col(s), options.newton);
    if (res.converged()) hits[static_cast<std::size_t>(s)] = std::move(res.best);
  }

  std::vector<EigenvalueTuple> found;
  for (auto& h : hits) {
    if (h) found.push_back(std::move(*h));
  }
  SolutionSet set =
      dedupe(std::move(found), options.dedupe_tol.value_or(default_dedupe_tol(q)));
  refine_all(q, set, options.exec);
  set.expected = expected;
  set.seed = options.seed;
  return set;
}

// --- sum rules ----------------------------------------------------------------

double SumRuleReport::worst() const noexcept {
  double w = 0.0;
  if (first_moment.size()) w = std::max(w, first_moment.maxCoeff());
  if (second_moment.size()) w = std::max(w, second_moment.maxCoeff());
  return w;
}

SumRuleReport spectral_sum_rules(const SolutionSet& set, const QuadraticSystem& q) {
  const int n = q.num_spins;
  SumRuleReport rep;
  rep.first_moment = Eigen::VectorXd::Zero(n);
  rep.second_moment = Eigen::VectorXd::Zero(n);
  rep.applicable = set.complete() && set.expected == spectrum_size(n);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sum_abs = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(n);
  for (const auto& t : set.tuples) {
    sum += t.r;
    sum_abs += t.r.cwiseAbs();
    sum_sq += t.r.cwiseAbs2();
  }
  const Eigen::VectorXd K = q.K();
  const double dim = static_cast<double>(spectrum_size(n));
  for (int i = 0; i < n; ++i) {
    rep.first_moment[i] = sum_abs[i] > 0.0 ? std::abs(sum[i]) / sum_abs[i] : 0.0;
    const double target = dim * K[i];
    rep.second_moment[i] = target > 0.0 ? std::abs(sum_sq[i] - target) / target
                                        : std::abs(sum_sq[i]);
  }
  return rep;
}

}  // namespace rgquad
