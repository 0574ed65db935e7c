#include "rgquad/catalog.hpp"

#include <cmath>
#include <stdexcept>

#include "rgquad/errors.hpp"

namespace rgquad {

namespace {

void require_distinct(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::invalid_argument(std::string(what) + " must be finite");
    }
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (values[i] == values[j]) {
        throw std::invalid_argument(std::string(what) + " entries " +
                                    std::to_string(i) + " and " +
                                    std::to_string(j) + " coincide");
      }
    }
  }
}

void require_nonempty(std::span<const double> epsilon) {
  if (epsilon.empty()) throw std::invalid_argument("epsilon must not be empty");
}

void require_pip_levels(std::span<const double> epsilon) {
  require_nonempty(epsilon);
  std::vector<double> squares;
  for (std::size_t k = 0; k < epsilon.size(); ++k) {
    if (epsilon[k] == 0.0) {
      throw std::invalid_argument("p+ip levels must be nonzero (k=" +
                                  std::to_string(k) + ")");
    }
    squares.push_back(epsilon[k] * epsilon[k]);
  }
  require_distinct(squares, "squared levels");
}

ModelSpec certified(ModelSpec spec, const char* family) {
  const auto report = check_integrability_algebraic(spec, kCatalogCertifyTol);
  if (!report.passed()) {
    throw IntegrabilityViolation(std::string(family) +
                                 " construction failed certification: " +
                                 describe(report.violations.front()));
  }
  return spec;
}

double relative(const SpinOperator& defect, const SpinOperator& square) {
  const double num = frobenius_norm(defect);
  const double den = frobenius_norm(square);
  return den > 0.0 ? num / den : num;
}

}  // namespace

const char* family_name(CatalogFamily f) noexcept {
  switch (f) {
    case CatalogFamily::kXxxRational:
      return "xxx_rational";
    case CatalogFamily::kXxzTrigonometric:
      return "xxz_trigonometric";
    case CatalogFamily::kXxzPip:
      return "xxz_pip";
  }
  return "unknown";
}

CatalogFamily parse_family(const std::string& name) {
  for (auto f : {CatalogFamily::kXxxRational, CatalogFamily::kXxzTrigonometric,
                 CatalogFamily::kXxzPip}) {
    if (name == family_name(f)) return f;
  }
  throw std::invalid_argument("unknown catalog family '" + name + "'");
}

ModelSpec xxx_rational(std::span<const double> epsilon, double field) {
  require_nonempty(epsilon);
  require_distinct(epsilon, "epsilon");
  const int n = static_cast<int>(epsilon.size());
  ModelSpec spec(n);
  for (int i = 0; i < n; ++i) {
    spec.set_field(i, PauliAxis::Z, field);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double g = 0.5 / (epsilon[i] - epsilon[j]);
      for (auto a : kAxes) spec.set_coupling(i, j, a, g);
    }
  }
  return certified(std::move(spec), "xxx_rational");
}

ModelSpec xxz_trigonometric(std::span<const double> epsilon, double field) {
  require_nonempty(epsilon);
  require_distinct(epsilon, "epsilon");
  const int n = static_cast<int>(epsilon.size());
  ModelSpec spec(n);
  for (int i = 0; i < n; ++i) {
    spec.set_field(i, PauliAxis::Z, field);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double u = epsilon[i] - epsilon[j];
      const double s = std::sin(u);
      if (std::abs(s) < 1e-12) {
        throw std::invalid_argument("level spacing eps_" + std::to_string(i) +
                                    " - eps_" + std::to_string(j) +
                                    " is a multiple of pi");
      }
      spec.set_coupling(i, j, PauliAxis::X, 0.5 / s);
      spec.set_coupling(i, j, PauliAxis::Y, 0.5 / s);
      spec.set_coupling(i, j, PauliAxis::Z, 0.5 * std::cos(u) / s);
    }
  }
  return certified(std::move(spec), "xxz_trigonometric");
}

ModelSpec xxz_pip(std::span<const double> epsilon, double G, double gamma) {
  require_pip_levels(epsilon);
  if (!std::isfinite(G) || !std::isfinite(gamma)) {
    throw std::invalid_argument("G and gamma must be finite");
  }
  const int n = static_cast<int>(epsilon.size());
  ModelSpec spec(n);
  for (int k = 0; k < n; ++k) {
    spec.set_field(k, PauliAxis::X, gamma / epsilon[k]);
    spec.set_field(k, PauliAxis::Z, 0.5);
    for (int kp = 0; kp < n; ++kp) {
      if (k == kp) continue;
      const double d = epsilon[k] * epsilon[k] - epsilon[kp] * epsilon[kp];
      const double transverse = -0.5 * G * epsilon[k] * epsilon[kp] / d;
      spec.set_coupling(k, kp, PauliAxis::X, transverse);
      spec.set_coupling(k, kp, PauliAxis::Y, transverse);
      spec.set_coupling(k, kp, PauliAxis::Z, -0.5 * G * epsilon[kp] * epsilon[kp] / d);
    }
  }
  return certified(std::move(spec), "xxz_pip");
}

ModelSpec build_catalog_model(const CatalogParams& p) {
  switch (p.family) {
    case CatalogFamily::kXxxRational:
      return xxx_rational(p.epsilon, p.field);
    case CatalogFamily::kXxzTrigonometric:
      return xxz_trigonometric(p.epsilon, p.field);
    case CatalogFamily::kXxzPip:
      return xxz_pip(p.epsilon, p.G, p.gamma);
  }
  throw std::invalid_argument("unknown catalog family");
}

ChargeShift xxx_shift(std::span<const double> epsilon) {
  require_distinct(epsilon, "epsilon");
  const auto n = static_cast<Eigen::Index>(epsilon.size());
  ChargeShift s{Eigen::VectorXd::Zero(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) s.offsets[i] -= 0.5 / (epsilon[i] - epsilon[j]);
    }
  }
  return s;
}

ChargeShift pip_shift(std::span<const double> epsilon, double G) {
  require_pip_levels(epsilon);
  const auto n = static_cast<Eigen::Index>(epsilon.size());
  ChargeShift s{Eigen::VectorXd::Zero(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    double sum = 0.0;
    for (Eigen::Index kp = 0; kp < n; ++kp) {
      if (kp == k) continue;
      const double e2 = epsilon[kp] * epsilon[kp];
      sum += e2 / (epsilon[k] * epsilon[k] - e2);
    }
    s.offsets[k] = 0.5 * (1.0 + G * sum);
  }
  return s;
}

std::vector<double> verify_shifted_relation_xxx(std::span<const double> epsilon,
                                                double field, int spin_cap) {
  const auto spec = xxx_rational(epsilon, field);
  const int n = spec.num_spins();
  const auto charges = build_charges(spec, spin_cap);
  const auto shift = xxx_shift(epsilon);
  const auto id = SpinOperator::identity(n);

  std::vector<SpinOperator> t;
  for (int i = 0; i < n; ++i) t.push_back(charges[i] + Complex(shift.offsets[i]) * id);

  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const SpinOperator square = t[i] * t[i];
    SpinOperator defect = square - Complex(field * field) * id;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      defect += Complex(1.0 / (epsilon[i] - epsilon[j])) * (t[i] - t[j]);
    }
    out[i] = relative(defect, square);
  }
  return out;
}

std::vector<double> verify_shifted_relation_pip(std::span<const double> epsilon,
                                                double G, double gamma,
                                                int spin_cap) {
  const auto spec = xxz_pip(epsilon, G, gamma);
  const int n = spec.num_spins();
  const auto charges = build_charges(spec, spin_cap);
  const auto shift = pip_shift(epsilon, G);
  const auto id = SpinOperator::identity(n);

  std::vector<SpinOperator> t;
  for (int k = 0; k < n; ++k) t.push_back(charges[k] + Complex(shift.offsets[k]) * id);

  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const SpinOperator square = t[k] * t[k];
    const double bath = gamma / epsilon[k];
    SpinOperator defect = square - t[k] - Complex(bath * bath) * id;
    for (int kp = 0; kp < n; ++kp) {
      if (kp == k) continue;
      const double e2 = epsilon[kp] * epsilon[kp];
      defect -= Complex(G * e2 / (epsilon[k] * epsilon[k] - e2)) * (t[k] - t[kp]);
    }
    out[k] = relative(defect, square);
  }
  return out;
}

std::vector<double> xxx_constant_identity(std::span<const double> e) {
  require_distinct(e, "epsilon");
  const std::size_t n = e.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double first = 0.0, second = 0.0, third = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i) first += 1.0 / ((e[i] - e[j]) * (e[i] - e[k]));
        if (k != j) second += 1.0 / ((e[i] - e[j]) * (e[j] - e[k]));
      }
      third += 1.0 / ((e[i] - e[j]) * (e[i] - e[j]));
    }
    const double a = -0.25 * first, b = 0.5 * second, c = 0.75 * third;
    out[i] = std::abs(a + b + c) /
             std::max({1.0, std::abs(a) + std::abs(b) + std::abs(c)});
  }
  return out;
}

std::vector<double> pip_constant_identity(std::span<const double> e, double G) {
  require_pip_levels(e);
  const std::size_t n = e.size();
  auto a = [&](std::size_t k, std::size_t kp) {
    return e[kp] * e[kp] / (e[k] * e[k] - e[kp] * e[kp]);
  };
  const double g2 = G * G;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    double first = 0.0, second = 0.0, single = 0.0;
    for (std::size_t kp = 0; kp < n; ++kp) {
      if (kp == k) continue;
      for (std::size_t kpp = 0; kpp < n; ++kpp) {
        if (kpp != k) first += a(k, kp) * a(k, kpp);
        if (kpp != kp) second += a(k, kp) * a(kp, kpp);
      }
      const double transverse = e[k] * e[kp] / (e[k] * e[k] - e[kp] * e[kp]);
      single += 0.5 * g2 * transverse * transverse + 0.25 * g2 * a(k, kp) * a(k, kp);
    }
    const double p = -0.25 * g2 * first, q = 0.5 * g2 * second;
    out[k] = std::abs(p + q + single) /
             std::max({1.0, std::abs(p) + std::abs(q) + std::abs(single)});
  }
  return out;
}

std::vector<FamilyInfo> catalog_families() {
  return {
      {"xxx_rational",
       "isotropic rational couplings 1/(2(eps_i - eps_j)), uniform z-field",
       {"epsilon: distinct reals", "B: z-field"}},
      {"xxz_trigonometric",
       "Gamma^x = Gamma^y = 1/(2 sin(eps_i - eps_j)), Gamma^z = cot(eps_i - "
       "eps_j)/2, uniform z-field; certified at construction",
       {"epsilon: reals with eps_i - eps_j not in pi*Z", "B: z-field"}},
      {"xxz_pip",
       "p+ip pairing model coupled to a particle bath; non-antisymmetric "
       "Gamma^z, fields (gamma/eps_k, 0, 1/2)",
       {"epsilon: nonzero reals with distinct squares", "G: pairing strength",
        "gamma: bath amplitude"}},
  };
}

}  // namespace rgquad
