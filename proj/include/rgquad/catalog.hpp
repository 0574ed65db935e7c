#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rgquad/model.hpp"

namespace rgquad {

enum class CatalogFamily { kXxxRational, kXxzTrigonometric, kXxzPip };

const char* family_name(CatalogFamily f) noexcept;
/// Throws std::invalid_argument for unknown names.
CatalogFamily parse_family(const std::string& name);

struct CatalogParams {
  CatalogFamily family = CatalogFamily::kXxxRational;
  std::vector<double> epsilon;
  /// Uniform z-field (rational and trigonometric families).
  double field = 1.0;
  /// Pairing strength and bath amplitude (p+ip family).
  double G = 0.0;
  double gamma = 0.0;

  int num_spins() const noexcept { return static_cast<int>(epsilon.size()); }
};

/// Scalar offsets d_i with shifted charge = R_i + d_i * 1.
struct ChargeShift {
  Eigen::VectorXd offsets;
};

/// Tolerance at which catalog constructors certify their output.
inline constexpr double kCatalogCertifyTol = 1e-10;

/// Gamma_ij^a = (1/2) / (eps_i - eps_j) on every axis, B_i = (0, 0, B).
ModelSpec xxx_rational(std::span<const double> epsilon, double field);

/// Gamma^x = Gamma^y = (1/2) / sin(eps_i - eps_j),
/// Gamma^z = (1/2) cot(eps_i - eps_j), B_i = (0, 0, B).
/// Certified by the integrability checker; throws IntegrabilityViolation
/// if the check fails.
ModelSpec xxz_trigonometric(std::span<const double> epsilon, double field);

/// p+ip pairing model coupled to a particle bath:
/// Gamma^x = Gamma^y = -(G/2) e_k e_k' / (e_k^2 - e_k'^2),
/// Gamma^z = -(G/2) e_k'^2 / (e_k^2 - e_k'^2), B_k = (gamma / e_k, 0, 1/2).
/// Gamma^z is not antisymmetric.
ModelSpec xxz_pip(std::span<const double> epsilon, double G, double gamma);

ModelSpec build_catalog_model(const CatalogParams& params);

/// d_i = -(1/2) sum_{j!=i} 1 / (eps_i - eps_j); maps R_i onto T_i.
ChargeShift xxx_shift(std::span<const double> epsilon);
/// d_k = (1/2) (1 + G sum_{k'!=k} e_k'^2 / (e_k^2 - e_k'^2)); maps R_k onto
/// the shifted p+ip charge.
ChargeShift pip_shift(std::span<const double> epsilon, double G);

/// ||T_i^2 - B^2 + sum_{j!=i} (T_i - T_j)/(eps_i - eps_j)||_F / ||T_i^2||_F.
std::vector<double> verify_shifted_relation_xxx(std::span<const double> epsilon,
                                                double field,
                                                int spin_cap = kDefaultSpinCap);

/// ||Rt_k^2 - Rt_k - (gamma/e_k)^2 - G sum_{k'} e_k'^2 (Rt_k - Rt_k')/(e_k^2 - e_k'^2)||_F
/// / ||Rt_k^2||_F.
std::vector<double> verify_shifted_relation_pip(std::span<const double> epsilon,
                                                double G, double gamma,
                                                int spin_cap = kDefaultSpinCap);

/// For each i, the constant left over when the general relation is shifted
/// onto T_i:
///   -1/4 sum_{j!=i} sum_{k!=i} 1/((e_i-e_j)(e_i-e_k))
///   +1/2 sum_{j!=i} sum_{k!=j} 1/((e_i-e_j)(e_j-e_k))
///   +3/4 sum_{j!=i} 1/(e_i-e_j)^2,
/// divided by max(1, sum of the absolute values of the three parts).
std::vector<double> xxx_constant_identity(std::span<const double> epsilon);

/// Same for the p+ip shift: with a_kk' = e_k'^2 / (e_k^2 - e_k'^2),
///   -G^2/4 sum_{k'!=k} sum_{k''!=k} a_kk' a_kk''
///   +G^2/2 sum_{k'!=k} sum_{k''!=k'} a_kk' a_k'k''
///   + sum_{k'!=k} [G^2/2 (e_k e_k' / (e_k^2 - e_k'^2))^2 + G^2/4 a_kk'^2].
std::vector<double> pip_constant_identity(std::span<const double> epsilon, double G);

struct FamilyInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> parameters;
};

std::vector<FamilyInfo> catalog_families();

}  // namespace rgquad
