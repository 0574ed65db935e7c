#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rgquad/model.hpp"

namespace rgquad {

/// Which relation produced a coefficient C_ij.
enum class CoefficientRoute {
  kDiagonal,    // i == j, always zero
  kGammaRoute,  // C_ij = -2 Gamma_ij^b Gamma_ij^g / Gamma_ji^a
  kFieldRoute,  // C_ij = 2 B_i^a Gamma_ij^a / B_j^a
  kDecoupled,   // Gamma_ij == 0 on every axis
};

struct Provenance {
  CoefficientRoute route = CoefficientRoute::kDiagonal;
  /// Axis whose denominator was used (gamma and field routes only).
  std::optional<PauliAxis> axis;
};

const char* route_name(CoefficientRoute r) noexcept;

using ExtendedMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using ExtendedVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

/// Coefficients of the operator relations R_i^2 = sum_{j!=i} C_ij R_j + K_i.
///
/// K is kept split into its field part sum_a (B_i^a)^2 and its coupling part
/// sum_a sum_k (Gamma_ik^a)^2 so that the system of the rescaled model
/// Gamma -> lambda Gamma is available without re-deriving.
struct QuadraticSystem {
  int num_spins = 0;
  Eigen::MatrixXd C;
  Eigen::VectorXd K_field;
  Eigen::VectorXd K_coupling;
  std::vector<Provenance> provenance;  // row-major, num_spins^2 entries

  /// Long-double copies of C and K. Near a fold of the Bethe equations,
  /// rounding C to double already moves roots by cond(J) * eps; the final
  /// refinement step works with these instead. Empty when the system was
  /// assembled by hand.
  ExtendedMatrix C_ext;
  ExtendedVector K_field_ext;
  ExtendedVector K_coupling_ext;

  Eigen::VectorXd K() const { return K_field + K_coupling; }
  const Provenance& provenance_of(int i, int j) const {
    return provenance[static_cast<std::size_t>(i * num_spins + j)];
  }

  /// System of scale_coupling(spec, lambda): C -> lambda C and
  /// K -> K_field + lambda^2 K_coupling.
  QuadraticSystem at_coupling_scale(double lambda) const;
};

struct DeriveOptions {
  /// When false the integrability pre-check and the route agreement check
  /// are skipped. Only useful for studying how the relations break.
  bool require_integrability = true;
};

/// Throws IntegrabilityViolation, DegenerateCoupling or
/// InternalInconsistency.
QuadraticSystem derive_coefficients(const ModelSpec& spec, double tol,
                                    const DeriveOptions& options = {});

/// Worst normalized residuals of the coefficient relations.
struct ConsistencyReport {
  /// |C_variant - C_ij| / max(1, |C_ij|) over Gamma-route variants with a
  /// valid denominator.
  double gamma_route_spread = 0.0;
  /// Same for the field-route variants.
  double field_route_spread = 0.0;
  /// Product forms, evaluated on every axis (no division).
  double field_relation_residual = 0.0;   // C_ik B_k^a - 2 B_i^a Gamma_ik^a
  double gamma_relation_residual = 0.0;   // C_ik Gamma_ki^a + 2 Gamma_ik^b Gamma_ik^g
  double triple_relation_residual = 0.0;  // C_ik Gamma_kk'^a + C_ik' Gamma_k'k^a - 2 Gamma_ik^a Gamma_ik'^a
  double tol = 0.0;

  double worst() const noexcept;
  bool passed() const noexcept { return worst() <= tol; }
};

ConsistencyReport check_coefficient_consistency(const ModelSpec& spec,
                                                const QuadraticSystem& qsys,
                                                double tol);

struct OperatorIdentityReport {
  /// ||R_i^2 - sum_j C_ij R_j - K_i||_F / ||R_i^2||_F for each i.
  std::vector<double> relative_residuals;
  double tol = 0.0;

  double worst() const noexcept;
  bool passed() const noexcept { return worst() <= tol; }
};

OperatorIdentityReport verify_operator_identity(
    const ModelSpec& spec, const QuadraticSystem& qsys, double tol,
    int spin_cap = kDefaultSpinCap);

}  // namespace rgquad
