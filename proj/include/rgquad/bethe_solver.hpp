#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rgquad/quad_relations.hpp"

namespace rgquad {

/// One joint eigenvalue assignment (r_1, ..., r_N).
struct EigenvalueTuple {
  Eigen::VectorXd r;
  /// ||F(r)||_2 with F_i(r) = r_i^2 - sum_{j!=i} C_ij r_j - K_i.
  double residual_norm = 0.0;
  /// Sign vector s of the decoupled start r_i = s_i |B_i| (homotopy only).
  std::optional<std::vector<int>> branch;
};

struct PathFailure {
  std::vector<int> branch;
  double lambda_reached = 0.0;
  std::string cause;
};

/// Deduplicated solutions of the quadratic Bethe equations.
struct SolutionSet {
  std::vector<EigenvalueTuple> tuples;
  double dedupe_tol = 0.0;
  /// 2^N for a system of N equations.
  std::size_t expected = 0;
  std::vector<PathFailure> failures;
  /// Seed of the sampler, when one was used.
  std::optional<std::uint64_t> seed;

  std::size_t found() const noexcept { return tuples.size(); }
  bool complete() const noexcept { return found() == expected; }
};

struct ResidualJacobian {
  Eigen::VectorXd F;
  Eigen::MatrixXd J;  // J_ii = 2 r_i, J_ij = -C_ij
};

Eigen::VectorXd bethe_residual(const QuadraticSystem& q, const Eigen::VectorXd& r);
ResidualJacobian residual_and_jacobian(const QuadraticSystem& q,
                                       const Eigen::VectorXd& r);

/// Smallest ||F|| that double arithmetic can resolve at r: a small multiple
/// of machine epsilon times the magnitude of the terms entering F.
double residual_floor(const QuadraticSystem& q, const Eigen::VectorXd& r);

struct NewtonOptions {
  int max_iter = 100;
  /// Target for ||F||_2. Iterates already at the roundoff floor also count
  /// as converged.
  double tol = 1e-12;
  int max_halvings = 30;
  double max_condition = 1e14;
};

enum class NewtonStatus {
  kConverged,
  kMaxIterations,
  kSingularJacobian,
  kLineSearchFailed,
};

const char* status_name(NewtonStatus s) noexcept;

struct NewtonResult {
  NewtonStatus status = NewtonStatus::kMaxIterations;
  /// The converged point, or the best iterate seen.
  EigenvalueTuple best;
  int iterations = 0;
  /// Largest number of step halvings taken in any single iteration.
  int max_halvings_used = 0;

  bool converged() const noexcept { return status == NewtonStatus::kConverged; }
};

/// Damped Newton with the analytic Jacobian; halves the step until ||F||
/// decreases.
NewtonResult newton_solve(const QuadraticSystem& q, const Eigen::VectorXd& r0,
                          const NewtonOptions& options = {});

/// A few Newton steps in long double on the extended copies of C and K.
/// Keeps the input when the system carries no extended copies or when the
/// steps do not lower the extended residual.
EigenvalueTuple refine_extended(const QuadraticSystem& q, const EigenvalueTuple& t);

/// 1e-7 * (1 + max_i sqrt(K_i)).
double default_dedupe_tol(const QuadraticSystem& q);

/// Greedy max-norm clustering; each cluster keeps its lowest-residual member.
/// Survivors are returned in lexicographic order of r.
SolutionSet dedupe(std::vector<EigenvalueTuple> tuples, double tol);

struct HomotopyOptions {
  /// Fixed-lambda corrector; kept short so a struggling corrector shrinks
  /// the step instead of wandering to another path.
  NewtonOptions corrector{.max_iter = 8, .tol = 1e-11};
  /// Polishing at lambda = 1.
  NewtonOptions polish{};
  double initial_step = 0.02;
  double max_step = 0.1;
  double min_step = 1e-6;
  /// Accepted corrections must stay below this fraction of 1 + ||r||_inf.
  double max_correction = 0.005;
  /// Branches whose endpoints collide are retracked with 8x smaller steps,
  /// at most this many times; from the second round on, all branches are.
  int refinement_rounds = 3;
  std::optional<double> dedupe_tol;
  /// |B_i| must exceed startup_factor * (1 + max|Gamma|).
  double startup_factor = 1e-8;
  double integrability_tol = 1e-10;
  Execution exec = Execution::kParallel;
};

/// Tracks all 2^N sign-vector starts of the decoupled model along
/// Gamma -> lambda Gamma, lambda from 0 to 1.
///
/// Throws StartupDegenerate when some field is too small to seed the
/// paths; failures of individual paths are recorded in the result.
SolutionSet solve_all_homotopy(const ModelSpec& spec,
                               const HomotopyOptions& options = {});
/// Same, with a system already derived from `spec`.
SolutionSet solve_all_homotopy(const ModelSpec& spec, const QuadraticSystem& q,
                               const HomotopyOptions& options = {});

/// True when every |B_i| clears the homotopy startup threshold.
bool homotopy_applicable(const ModelSpec& spec, double startup_factor = 1e-8);

struct MultistartOptions {
  /// Default 200 * 2^N.
  std::optional<std::size_t> sample_count;
  /// Per-coordinate half-width of the sampling box. Default
  /// sqrt(K_i) + sum_j |C_ij|.
  std::optional<Eigen::VectorXd> half_width;
  std::uint64_t seed = 20240917;
  NewtonOptions newton{};
  std::optional<double> dedupe_tol;
  Execution exec = Execution::kParallel;
};

Eigen::VectorXd default_sampling_box(const QuadraticSystem& q);

/// Newton from uniform samples in the box; incomplete sets are reported
/// through SolutionSet::complete(), never thrown.
SolutionSet solve_all_multistart(const QuadraticSystem& q,
                                 const MultistartOptions& options = {});

/// Trace identities a complete spectrum must satisfy:
/// sum_t r_i = 0 and sum_t r_i^2 = 2^N K_i.
struct SumRuleReport {
  /// |sum_t r_i| / sum_t |r_i| per charge.
  Eigen::VectorXd first_moment;
  /// |sum_t r_i^2 - 2^N K_i| / (2^N K_i) per charge (absolute if K_i = 0).
  Eigen::VectorXd second_moment;
  bool applicable = false;  // only for complete sets

  double worst() const noexcept;
  bool passed(double tol) const noexcept { return applicable && worst() <= tol; }
};

SumRuleReport spectral_sum_rules(const SolutionSet& set, const QuadraticSystem& q);

}  // namespace rgquad
