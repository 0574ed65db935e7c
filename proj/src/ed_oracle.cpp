#include "rgquad/ed_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <tuple>

#include "rgquad/errors.hpp"
#include "rgquad/kernels.hpp"

namespace rgquad {

namespace {

using Block = std::vector<Eigen::Index>;

/// Groups ascending eigenvalues into runs whose neighbours differ by <= gap.
std::vector<Block> clusters(const Eigen::VectorXd& sorted_values, double gap) {
  std::vector<Block> out;
  for (Eigen::Index k = 0; k < sorted_values.size(); ++k) {
    if (k == 0 || sorted_values[k] - sorted_values[k - 1] > gap) out.emplace_back();
    out.back().push_back(k);
  }
  return out;
}

bool has_degenerate_block(const std::vector<Block>& blocks) {
  return std::any_of(blocks.begin(), blocks.end(),
                     [](const Block& b) { return b.size() > 1; });
}

/// Splits degenerate blocks of `vectors` by diagonalizing each charge in
/// turn inside them. Returns the sizes of blocks no charge could split.
std::vector<std::size_t> refine_blocks(const std::vector<SpinOperator>& charges,
                                       Eigen::MatrixXcd& vectors,
                                       std::vector<Block> blocks, double gap) {
  for (const auto& charge : charges) {
    std::vector<Block> next;
    for (const auto& block : blocks) {
      if (block.size() == 1) {
        next.push_back(block);
        continue;
      }
      const auto m = static_cast<Eigen::Index>(block.size());
      Eigen::MatrixXcd basis(vectors.rows(), m);
      for (Eigen::Index c = 0; c < m; ++c) basis.col(c) = vectors.col(block[c]);
      const Eigen::MatrixXcd image = charge.matrix() * basis;
      Eigen::MatrixXcd projected = basis.adjoint() * image;
      projected = 0.5 * (projected + projected.adjoint()).eval();
      const auto dec = hermitian_eigendecomposition(projected);
      const Eigen::MatrixXcd rotated = basis * dec.vectors;
      for (Eigen::Index c = 0; c < m; ++c) vectors.col(block[c]) = rotated.col(c);
      for (const auto& sub : clusters(dec.values, gap)) {
        Block b;
        for (auto idx : sub) b.push_back(block[idx]);
        next.push_back(std::move(b));
      }
    }
    blocks = std::move(next);
    if (!has_degenerate_block(blocks)) break;
  }
  std::vector<std::size_t> persistent;
  for (const auto& b : blocks) {
    if (b.size() > 1) persistent.push_back(b.size());
  }
  return persistent;
}

}  // namespace

SpinOperator hamiltonian(const ModelSpec& spec, const Eigen::VectorXd& c) {
  if (c.size() != spec.num_spins()) {
    throw std::invalid_argument("combination length must equal N");
  }
  PauliSum sum(spec.num_spins());
  for (int i = 0; i < spec.num_spins(); ++i) {
    if (c[i] != 0.0) sum.append(charge_terms(spec, i), c[i]);
  }
  return materialize(sum);
}

double energy_from_tuple(const Eigen::VectorXd& c, const Eigen::VectorXd& r) {
  if (c.size() != r.size()) {
    throw std::invalid_argument("combination and tuple lengths differ");
  }
  return c.dot(r);
}

SpectrumTable joint_spectrum(const ModelSpec& spec,
                             const JointSpectrumOptions& options) {
  const int n = spec.num_spins();
  require_within_cap(n, options.spin_cap);
  const auto comm = check_commutators_numerical(spec, options.commutator_tol,
                                                options.spin_cap, options.exec);
  if (!comm.passed()) {
    throw NonCommutingFamily("charges do not commute: max ||[R_i,R_j]||_F = " +
                             std::to_string(*comm.max_commutator_norm));
  }

  const auto charges = build_charges(spec, options.spin_cap);
  const double dim = std::ldexp(1.0, n);
  double scale = 1.0;
  for (const auto& r : charges) {
    scale = std::max(scale, 1.0 + frobenius_norm(r) / std::sqrt(dim));
  }

  SpectrumTable table;
  table.num_spins = n;
  table.combo_seed = options.seed;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> magnitude(0.5, 1.5);
  std::bernoulli_distribution negative(0.5);

  auto extract = [&](const Eigen::MatrixXcd& states) {
    return options.exec == Execution::kParallel
               ? kernels::expectations_parallel(charges, states)
               : kernels::expectations_serial(charges, states);
  };

  EigenDecomposition dec;
  std::vector<Block> blocks;
  double gap = 0.0;
  bool clean = false;
  kernels::Expectations ev;
  for (int attempt = 0; attempt <= options.max_redraws; ++attempt) {
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) {
      c[i] = magnitude(rng) * (negative(rng) ? -1.0 : 1.0);
    }
    table.combination = c;
    table.redraws = attempt;
    dec = hermitian_eigendecomposition(hamiltonian(spec, c), options.spin_cap);
    const double norm = std::max(dec.values.cwiseAbs().maxCoeff(), 1e-300);
    gap = options.degeneracy_rel * norm;
    blocks = clusters(dec.values, gap);
    if (has_degenerate_block(blocks)) continue;
    ev = extract(dec.vectors);
    if (ev.residuals.maxCoeff() <= options.tol * scale) {
      clean = true;
      break;
    }
  }

  if (!clean) {
    table.used_block_refinement = true;
    table.persistent_multiplicities =
        refine_blocks(charges, dec.vectors, blocks, options.degeneracy_rel * scale);
    ev = extract(dec.vectors);
  }

  table.diag_residual = ev.residuals.size() ? ev.residuals.maxCoeff() : 0.0;
  if (table.diag_residual > options.tol * scale) {
    throw Error("joint diagonalization left residual " +
                std::to_string(table.diag_residual));
  }
  table.tuples.reserve(static_cast<std::size_t>(ev.values.rows()));
  for (Eigen::Index k = 0; k < ev.values.rows(); ++k) {
    table.tuples.emplace_back(ev.values.row(k).transpose());
  }
  return table;
}

MatchReport match_spectra(const SolutionSet& solver, const SpectrumTable& oracle,
                          double tol) {
  MatchReport rep;
  rep.tol = tol;

  // Collapse identical oracle rows into groups.
  std::vector<std::size_t> group_rep;
  std::vector<std::size_t> group_size;
  for (std::size_t k = 0; k < oracle.tuples.size(); ++k) {
    bool merged = false;
    for (std::size_t g = 0; g < group_rep.size(); ++g) {
      const auto& a = oracle.tuples[group_rep[g]];
      if (a.size() == oracle.tuples[k].size() &&
          (a - oracle.tuples[k]).cwiseAbs().maxCoeff() <= tol) {
        ++group_size[g];
        merged = true;
        break;
      }
    }
    if (!merged) {
      group_rep.push_back(k);
      group_size.push_back(1);
    }
  }

  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t s = 0; s < solver.tuples.size(); ++s) {
    const auto& r = solver.tuples[s].r;
    for (std::size_t g = 0; g < group_rep.size(); ++g) {
      const auto& o = oracle.tuples[group_rep[g]];
      if (o.size() != r.size()) continue;
      const double d = (o - r).cwiseAbs().maxCoeff();
      if (d <= tol) candidates.emplace_back(d, s, g);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<bool> solver_used(solver.tuples.size(), false);
  std::vector<bool> group_used(group_rep.size(), false);
  for (const auto& [d, s, g] : candidates) {
    if (solver_used[s] || group_used[g]) continue;
    solver_used[s] = true;
    group_used[g] = true;
    rep.pairs.push_back({s, group_rep[g], group_size[g], d});
    rep.max_distance = std::max(rep.max_distance, d);
  }
  std::sort(rep.pairs.begin(), rep.pairs.end(), [](const auto& a, const auto& b) {
    return a.solver_index < b.solver_index;
  });
  for (std::size_t s = 0; s < solver.tuples.size(); ++s) {
    if (!solver_used[s]) rep.unmatched_solver.push_back(s);
  }
  for (std::size_t g = 0; g < group_rep.size(); ++g) {
    if (!group_used[g]) rep.unmatched_oracle.push_back(group_rep[g]);
  }
  return rep;
}

}  // namespace rgquad
