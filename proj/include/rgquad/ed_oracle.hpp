#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rgquad/bethe_solver.hpp"
#include "rgquad/model.hpp"

namespace rgquad {

/// Joint eigenvalues of the charge family from brute-force diagonalization.
/// Built strictly from the model; never consumes solver output.
struct SpectrumTable {
  int num_spins = 0;
  /// 2^N rows; tuples[k][i] = <v_k|R_i|v_k>.
  std::vector<Eigen::VectorXd> tuples;
  /// max_{i,k} ||R_i v_k - r_i^(k) v_k||.
  double diag_residual = 0.0;
  std::uint64_t combo_seed = 0;
  /// The generic combination H_c = sum_i c_i R_i that was diagonalized.
  Eigen::VectorXd combination;
  /// Number of combinations drawn beyond the first.
  int redraws = 0;
  /// True when degenerate blocks of H_c had to be split charge by charge.
  bool used_block_refinement = false;
  /// Sizes of blocks that no charge could split (joint degeneracies).
  std::vector<std::size_t> persistent_multiplicities;
};

struct JointSpectrumOptions {
  std::uint64_t seed = 7;
  int spin_cap = kDefaultSpinCap;
  /// Eigen-residuals must stay below tol * (1 + max_i ||R_i||_F / sqrt(2^N)).
  double tol = 1e-9;
  /// Eigenvalues of H_c closer than this times ||H_c|| form one block.
  double degeneracy_rel = 1e-9;
  int max_redraws = 5;
  double commutator_tol = 1e-10;
  Execution exec = Execution::kParallel;
};

/// Throws NonCommutingFamily when the charges fail the commutator check.
SpectrumTable joint_spectrum(const ModelSpec& spec,
                             const JointSpectrumOptions& options = {});

struct MatchPair {
  std::size_t solver_index = 0;
  /// First oracle row of the matched group of identical tuples.
  std::size_t oracle_index = 0;
  /// How many oracle rows carry this tuple.
  std::size_t multiplicity = 1;
  double distance = 0.0;
};

struct MatchReport {
  std::vector<MatchPair> pairs;
  std::vector<std::size_t> unmatched_solver;
  /// One representative row per unmatched group of identical oracle tuples.
  std::vector<std::size_t> unmatched_oracle;
  double max_distance = 0.0;
  double tol = 0.0;

  bool perfect() const noexcept {
    return unmatched_solver.empty() && unmatched_oracle.empty();
  }
};

/// Greedy nearest-pair matching in max-norm, closest pairs first. Oracle rows
/// within tol of each other are matched as one tuple with multiplicity.
MatchReport match_spectra(const SolutionSet& solver, const SpectrumTable& oracle,
                          double tol);

/// H_c = sum_i c_i R_i.
SpinOperator hamiltonian(const ModelSpec& spec, const Eigen::VectorXd& c);
/// sum_i c_i r_i.
double energy_from_tuple(const Eigen::VectorXd& c, const Eigen::VectorXd& r);

}  // namespace rgquad
