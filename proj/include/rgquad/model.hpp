#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rgquad/pauli_ops.hpp"

namespace rgquad {

using Vec3 = std::array<double, 3>;

/// Fields B_i^a and couplings Gamma_ij^a of a Richardson-Gaudin model of N
/// spins-1/2. Spins are 0-based. Gamma need not be antisymmetric.
class ModelSpec {
 public:
  /// N decoupled spins with zero field.
  explicit ModelSpec(int num_spins);
  /// fields[i][a], couplings[i][j][a]; diagonal couplings must be zero.
  ModelSpec(std::vector<Vec3> fields, std::vector<std::vector<Vec3>> couplings);

  int num_spins() const noexcept { return n_; }

  double field(int i, PauliAxis a) const { return b_[idx(i, a)]; }
  double coupling(int i, int j, PauliAxis a) const { return g_[idx(i, j, a)]; }
  Vec3 field(int i) const;

  void set_field(int i, PauliAxis a, double value);
  void set_coupling(int i, int j, PauliAxis a, double value);

  /// |B_i|
  double field_norm(int i) const;
  /// max |Gamma_ij^a| over the whole tensor.
  double max_abs_coupling() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

 private:
  std::size_t idx(int i, PauliAxis a) const;
  std::size_t idx(int i, int j, PauliAxis a) const;

  int n_;
  std::vector<double> b_;
  std::vector<double> g_;
};

enum class ConstraintFamily { kField, kGaudin, kCommutator };

/// One constraint whose normalized residual exceeded the tolerance.
/// `spins` holds (i, j) for field constraints, (i, j, k) for Gaudin
/// constraints and (i, j) for commutators; `axes` is the (alpha, beta, gamma)
/// permutation (unused for commutators).
struct Violation {
  ConstraintFamily family;
  std::vector<int> spins;
  std::array<PauliAxis, 3> axes{};
  double residual = 0.0;
};

struct IntegrabilityReport {
  double max_field_residual = 0.0;
  double max_gaudin_residual = 0.0;
  std::optional<double> max_commutator_norm;
  /// Threshold the commutator norms were compared against.
  std::optional<double> commutator_threshold;
  std::vector<Violation> violations;

  bool passed() const noexcept { return violations.empty(); }
};

/// R_i = sum_a B_i^a s_i^a + sum_{k != i} sum_a Gamma_ik^a s_i^a s_k^a.
PauliSum charge_terms(const ModelSpec& spec, int i);
SpinOperator build_charge(const ModelSpec& spec, int i);
std::vector<SpinOperator> build_charges(const ModelSpec& spec,
                                        int spin_cap = kDefaultSpinCap);

/// Evaluates both constraint families for every ordered index tuple and
/// every axis permutation. Each residual is divided by max(1, largest term).
IntegrabilityReport check_integrability_algebraic(
    const ModelSpec& spec, double tol, Execution exec = Execution::kParallel);

/// ||[R_i, R_j]||_F for all i < j against tol * max_i ||R_i||_F^2.
IntegrabilityReport check_commutators_numerical(
    const ModelSpec& spec, double tol, int spin_cap = kDefaultSpinCap,
    Execution exec = Execution::kParallel);

/// Gamma -> lambda * Gamma, fields unchanged.
ModelSpec scale_coupling(const ModelSpec& spec, double lambda);

std::string describe(const Violation& v);

}  // namespace rgquad
