#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rgquad/parallel.hpp"

namespace rgquad {

using Complex = std::complex<double>;

/// Orientation of a Pauli matrix. Iteration order is X < Y < Z.
enum class PauliAxis : std::uint8_t { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<PauliAxis, 3> kAxes{PauliAxis::X, PauliAxis::Y,
                                                PauliAxis::Z};

constexpr int axis_index(PauliAxis a) noexcept { return static_cast<int>(a); }
char axis_name(PauliAxis a) noexcept;

/// Default largest spin count for which dense 2^N x 2^N work is allowed.
inline constexpr int kDefaultSpinCap = 12;

Eigen::Matrix2cd pauli_2x2(PauliAxis axis);

/// A weighted tensor product of Pauli matrices on distinct spins.
///
/// Stored in symplectic form: `flip_mask` marks spins carrying X or Y,
/// `phase_mask` marks spins carrying Y or Z. Spin 0 is the leftmost
/// (most significant) tensor factor, so it owns bit N-1 of a basis index.
struct PauliString {
  std::uint64_t flip_mask = 0;
  std::uint64_t phase_mask = 0;
  Complex coefficient{1.0, 0.0};
};

/// A sum of Pauli strings on a fixed number of spins.
class PauliSum {
 public:
  explicit PauliSum(int num_spins);

  int num_spins() const noexcept { return num_spins_; }
  const std::vector<PauliString>& terms() const noexcept { return terms_; }

  /// Appends coefficient * sigma_i^a.
  void add_single(int i, PauliAxis a, double coefficient);
  /// Appends coefficient * sigma_i^a sigma_j^a (i != j).
  void add_pair(int i, int j, PauliAxis a, double coefficient);
  void add_identity(double coefficient);
  /// Appends every term of `other` scaled by `scale`.
  void append(const PauliSum& other, double scale = 1.0);

 private:
  int num_spins_;
  std::vector<PauliString> terms_;
};

/// Hermitian-or-not operator on the 2^N dimensional space of N spins-1/2.
///
/// Backed by a compressed sparse matrix: charges built from Pauli strings
/// have at most one nonzero per string per column.
class SpinOperator {
 public:
  using Sparse = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

  SpinOperator() = default;
  SpinOperator(int num_spins, Sparse matrix);

  static SpinOperator zero(int num_spins);
  static SpinOperator identity(int num_spins);

  int num_spins() const noexcept { return num_spins_; }
  Eigen::Index dimension() const noexcept { return matrix_.rows(); }
  const Sparse& matrix() const noexcept { return matrix_; }
  Eigen::MatrixXcd to_dense() const { return Eigen::MatrixXcd(matrix_); }

  /// Largest entry-wise |A - A^dagger|.
  double hermiticity_defect() const;
  bool is_hermitian(double tol) const { return hermiticity_defect() <= tol; }

  SpinOperator& operator+=(const SpinOperator& other);
  SpinOperator& operator-=(const SpinOperator& other);
  SpinOperator& operator*=(Complex scale);

  friend SpinOperator operator+(SpinOperator a, const SpinOperator& b) {
    return a += b;
  }
  friend SpinOperator operator-(SpinOperator a, const SpinOperator& b) {
    return a -= b;
  }
  friend SpinOperator operator*(Complex s, SpinOperator a) { return a *= s; }
  friend SpinOperator operator*(const SpinOperator& a, const SpinOperator& b);

 private:
  int num_spins_ = 0;
  Sparse matrix_;
};

/// Builds the matrix of a PauliSum without forming Kronecker products.
SpinOperator materialize(const PauliSum& sum,
                         Execution exec = Execution::kParallel);

SpinOperator embed_single(int num_spins, int i, PauliAxis axis);
SpinOperator embed_pair(int num_spins, int i, int j, PauliAxis axis);

SpinOperator commutator(const SpinOperator& a, const SpinOperator& b);
SpinOperator anticommutator(const SpinOperator& a, const SpinOperator& b);
double frobenius_norm(const SpinOperator& a);
Complex trace(const SpinOperator& a);

struct EigenDecomposition {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // orthonormal columns
};

/// Dense eigendecomposition of a Hermitian operator. Real-valued inputs take
/// the real symmetric path.
///
/// Throws NonHermitianOperator when |A - A^dagger| exceeds 1e-10 relative to
/// the largest entry, and DimensionCapExceeded above `spin_cap`.
EigenDecomposition hermitian_eigendecomposition(const SpinOperator& a,
                                                int spin_cap = kDefaultSpinCap);
EigenDecomposition hermitian_eigendecomposition(const Eigen::MatrixXcd& a);

/// Throws DimensionCapExceeded if num_spins > cap.
void require_within_cap(int num_spins, int cap);

}  // namespace rgquad
