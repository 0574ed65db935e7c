#include "rgquad/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rgquad/kernels.hpp"

namespace rgquad {

namespace {

constexpr std::array<std::array<PauliAxis, 3>, 6> kPermutations{{
    {PauliAxis::X, PauliAxis::Y, PauliAxis::Z},
    {PauliAxis::X, PauliAxis::Z, PauliAxis::Y},
    {PauliAxis::Y, PauliAxis::X, PauliAxis::Z},
    {PauliAxis::Y, PauliAxis::Z, PauliAxis::X},
    {PauliAxis::Z, PauliAxis::X, PauliAxis::Y},
    {PauliAxis::Z, PauliAxis::Y, PauliAxis::X},
}};

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

double normalized(double residual, std::initializer_list<double> terms) {
  double scale = 1.0;
  for (double t : terms) scale = std::max(scale, std::abs(t));
  return std::abs(residual) / scale;
}

bool violation_order(const Violation& a, const Violation& b) {
  if (a.family != b.family) return a.family < b.family;
  if (a.spins != b.spins) return a.spins < b.spins;
  return a.axes < b.axes;
}

}  // namespace

// --- ModelSpec --------------------------------------------------------------

ModelSpec::ModelSpec(int num_spins) : n_(num_spins) {
  if (num_spins < 1) {
    throw std::invalid_argument("a model needs at least one spin");
  }
  b_.assign(static_cast<std::size_t>(3 * n_), 0.0);
  g_.assign(static_cast<std::size_t>(3 * n_ * n_), 0.0);
}

ModelSpec::ModelSpec(std::vector<Vec3> fields,
                     std::vector<std::vector<Vec3>> couplings)
    : ModelSpec(static_cast<int>(fields.size())) {
  if (couplings.size() != fields.size()) {
    throw std::invalid_argument("Gamma must have N rows");
  }
  for (int i = 0; i < n_; ++i) {
    if (couplings[i].size() != fields.size()) {
      throw std::invalid_argument("Gamma row " + std::to_string(i) +
                                  " must have N entries");
    }
    for (auto a : kAxes) {
      set_field(i, a, fields[i][axis_index(a)]);
      for (int j = 0; j < n_; ++j) {
        const double g = couplings[i][j][axis_index(a)];
        if (i == j) {
          if (g != 0.0) {
            throw std::invalid_argument("Gamma[i][i] must be zero (i=" +
                                        std::to_string(i) + ")");
          }
          continue;
        }
        set_coupling(i, j, a, g);
      }
    }
  }
}

std::size_t ModelSpec::idx(int i, PauliAxis a) const {
  if (i < 0 || i >= n_) {
    throw std::out_of_range("spin index " + std::to_string(i) +
                            " out of range for N=" + std::to_string(n_));
  }
  return static_cast<std::size_t>(3 * i + axis_index(a));
}

std::size_t ModelSpec::idx(int i, int j, PauliAxis a) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw std::out_of_range("spin pair (" + std::to_string(i) + "," +
                            std::to_string(j) + ") out of range for N=" +
                            std::to_string(n_));
  }
  return static_cast<std::size_t>(3 * (i * n_ + j) + axis_index(a));
}

Vec3 ModelSpec::field(int i) const {
  return {field(i, PauliAxis::X), field(i, PauliAxis::Y),
          field(i, PauliAxis::Z)};
}

void ModelSpec::set_field(int i, PauliAxis a, double value) {
  require_finite(value, "field");
  b_[idx(i, a)] = value;
}

void ModelSpec::set_coupling(int i, int j, PauliAxis a, double value) {
  require_finite(value, "coupling");
  if (i == j) {
    throw std::invalid_argument("coupling Gamma_ii is not defined");
  }
  g_[idx(i, j, a)] = value;
}

double ModelSpec::field_norm(int i) const {
  const auto b = field(i);
  return std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
}

double ModelSpec::max_abs_coupling() const {
  double m = 0.0;
  for (double g : g_) m = std::max(m, std::abs(g));
  return m;
}

// --- charges ----------------------------------------------------------------

PauliSum charge_terms(const ModelSpec& spec, int i) {
  PauliSum sum(spec.num_spins());
  for (auto a : kAxes) {
    if (const double b = spec.field(i, a); b != 0.0) sum.add_single(i, a, b);
  }
  for (int k = 0; k < spec.num_spins(); ++k) {
    if (k == i) continue;
    for (auto a : kAxes) {
      if (const double g = spec.coupling(i, k, a); g != 0.0) {
        sum.add_pair(i, k, a, g);
      }
    }
  }
  return sum;
}

SpinOperator build_charge(const ModelSpec& spec, int i) {
  if (i < 0 || i >= spec.num_spins()) {
    throw std::out_of_range("charge index " + std::to_string(i) +
                            " out of range for N=" +
                            std::to_string(spec.num_spins()));
  }
  return materialize(charge_terms(spec, i));
}

std::vector<SpinOperator> build_charges(const ModelSpec& spec, int spin_cap) {
  require_within_cap(spec.num_spins(), spin_cap);
  std::vector<SpinOperator> charges;
  charges.reserve(static_cast<std::size_t>(spec.num_spins()));
  for (int i = 0; i < spec.num_spins(); ++i) {
    charges.push_back(build_charge(spec, i));
  }
  return charges;
}

// --- integrability ----------------------------------------------------------

IntegrabilityReport check_integrability_algebraic(const ModelSpec& spec,
                                                  double tol, Execution exec) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const int n = spec.num_spins();
  IntegrabilityReport report;
  double worst_field = 0.0;
  double worst_gaudin = 0.0;

#pragma omp parallel if (exec == Execution::kParallel)
  {
    double local_field = 0.0;
    double local_gaudin = 0.0;
    std::vector<Violation> local;

#pragma omp for schedule(dynamic) nowait
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        for (const auto& p : kPermutations) {
          const auto [al, be, ga] = p;
          // B_i^g Gamma_ji^b + B_j^g Gamma_ij^a = 0
          const double t1 = spec.field(i, ga) * spec.coupling(j, i, be);
          const double t2 = spec.field(j, ga) * spec.coupling(i, j, al);
          const double r = normalized(t1 + t2, {t1, t2});
          local_field = std::max(local_field, r);
          if (r > tol) local.push_back({ConstraintFamily::kField, {i, j}, p, r});
        }
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          for (const auto& p : kPermutations) {
            const auto [al, be, ga] = p;
            // Gamma_ik^a Gamma_jk^b - Gamma_ik^g Gamma_ji^b - Gamma_ij^a Gamma_jk^g = 0
            const double t1 = spec.coupling(i, k, al) * spec.coupling(j, k, be);
            const double t2 = spec.coupling(i, k, ga) * spec.coupling(j, i, be);
            const double t3 = spec.coupling(i, j, al) * spec.coupling(j, k, ga);
            const double r = normalized(t1 - t2 - t3, {t1, t2, t3});
            local_gaudin = std::max(local_gaudin, r);
            if (r > tol) {
              local.push_back({ConstraintFamily::kGaudin, {i, j, k}, p, r});
            }
          }
        }
      }
    }

#pragma omp critical(rgquad_integrability_merge)
    {
      worst_field = std::max(worst_field, local_field);
      worst_gaudin = std::max(worst_gaudin, local_gaudin);
      report.violations.insert(report.violations.end(), local.begin(),
                               local.end());
    }
  }

  report.max_field_residual = worst_field;
  report.max_gaudin_residual = worst_gaudin;
  std::sort(report.violations.begin(), report.violations.end(),
            violation_order);
  return report;
}

IntegrabilityReport check_commutators_numerical(const ModelSpec& spec,
                                                double tol, int spin_cap,
                                                Execution exec) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const auto charges = build_charges(spec, spin_cap);
  double scale = 0.0;
  for (const auto& r : charges) {
    const double f = frobenius_norm(r);
    scale = std::max(scale, f * f);
  }
  const auto norms = exec == Execution::kParallel
                         ? kernels::commutator_norms_parallel(charges)
                         : kernels::commutator_norms_serial(charges);
  IntegrabilityReport report;
  report.commutator_threshold = tol * scale;
  double worst = 0.0;
  std::size_t p = 0;
  const int n = spec.num_spins();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++p) {
      worst = std::max(worst, norms[p]);
      if (norms[p] > *report.commutator_threshold) {
        report.violations.push_back(
            {ConstraintFamily::kCommutator, {i, j}, {}, norms[p]});
      }
    }
  }
  report.max_commutator_norm = worst;
  return report;
}

ModelSpec scale_coupling(const ModelSpec& spec, double lambda) {
  require_finite(lambda, "coupling scale");
  ModelSpec out = spec;
  const int n = spec.num_spins();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (auto a : kAxes) out.set_coupling(i, j, a, lambda * spec.coupling(i, j, a));
    }
  }
  return out;
}

std::string describe(const Violation& v) {
  std::ostringstream os;
  switch (v.family) {
    case ConstraintFamily::kField:
      os << "field";
      break;
    case ConstraintFamily::kGaudin:
      os << "gaudin";
      break;
    case ConstraintFamily::kCommutator:
      os << "commutator";
      break;
  }
  os << " (";
  for (std::size_t k = 0; k < v.spins.size(); ++k) {
    os << (k ? "," : "") << v.spins[k];
  }
  os << ")";
  if (v.family != ConstraintFamily::kCommutator) {
    os << " axes " << axis_name(v.axes[0]) << axis_name(v.axes[1])
       << axis_name(v.axes[2]);
  }
  os << " residual " << v.residual;
  return os.str();
}

}  // namespace rgquad
