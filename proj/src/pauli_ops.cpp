#include "rgquad/pauli_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "rgquad/errors.hpp"
#include "rgquad/kernels.hpp"

#ifdef RGQUAD_HAVE_OPENMP
#include <omp.h>
#endif

namespace rgquad {

namespace {

constexpr int kMaxSpins = 62;

void check_spin_count(int num_spins) {
  if (num_spins < 1 || num_spins > kMaxSpins) {
    throw std::invalid_argument("spin count must lie in [1, 62], got " +
                                std::to_string(num_spins));
  }
}

void check_index(int num_spins, int i) {
  if (i < 0 || i >= num_spins) {
    throw std::out_of_range("spin index " + std::to_string(i) +
                            " out of range for N=" +
                            std::to_string(num_spins));
  }
}

std::uint64_t spin_bit(int num_spins, int i) {
  return std::uint64_t{1} << (num_spins - 1 - i);
}

void check_same_shape(const SpinOperator& a, const SpinOperator& b) {
  if (a.num_spins() != b.num_spins() || a.dimension() != b.dimension()) {
    throw std::invalid_argument("operator dimension mismatch: " +
                                std::to_string(a.dimension()) + " vs " +
                                std::to_string(b.dimension()));
  }
}

}  // namespace

int max_threads() noexcept {
#ifdef RGQUAD_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

char axis_name(PauliAxis a) noexcept {
  switch (a) {
    case PauliAxis::X:
      return 'x';
    case PauliAxis::Y:
      return 'y';
    case PauliAxis::Z:
      return 'z';
  }
  return '?';
}

Eigen::Matrix2cd pauli_2x2(PauliAxis axis) {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd m;
  switch (axis) {
    case PauliAxis::X:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case PauliAxis::Y:
      m << 0.0, -i, i, 0.0;
      break;
    case PauliAxis::Z:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return m;
}

void require_within_cap(int num_spins, int cap) {
  if (num_spins > cap) throw DimensionCapExceeded(num_spins, cap);
}

// --- PauliSum ---------------------------------------------------------------

PauliSum::PauliSum(int num_spins) : num_spins_(num_spins) {
  check_spin_count(num_spins);
}

void PauliSum::add_single(int i, PauliAxis a, double coefficient) {
  check_index(num_spins_, i);
  PauliString s;
  const auto bit = spin_bit(num_spins_, i);
  if (a != PauliAxis::Z) s.flip_mask = bit;
  if (a != PauliAxis::X) s.phase_mask = bit;
  s.coefficient = coefficient;
  terms_.push_back(s);
}

void PauliSum::add_pair(int i, int j, PauliAxis a, double coefficient) {
  check_index(num_spins_, i);
  check_index(num_spins_, j);
  if (i == j) {
    throw std::invalid_argument("pair term needs distinct spins, got i=j=" +
                                std::to_string(i));
  }
  PauliString s;
  const auto bits = spin_bit(num_spins_, i) | spin_bit(num_spins_, j);
  if (a != PauliAxis::Z) s.flip_mask = bits;
  if (a != PauliAxis::X) s.phase_mask = bits;
  s.coefficient = coefficient;
  terms_.push_back(s);
}

void PauliSum::add_identity(double coefficient) {
  PauliString s;
  s.coefficient = coefficient;
  terms_.push_back(s);
}

void PauliSum::append(const PauliSum& other, double scale) {
  if (other.num_spins_ != num_spins_) {
    throw std::invalid_argument("cannot add Pauli sums on different spin counts");
  }
  for (auto t : other.terms_) {
    t.coefficient *= scale;
    terms_.push_back(t);
  }
}

// --- SpinOperator -----------------------------------------------------------

SpinOperator::SpinOperator(int num_spins, Sparse matrix)
    : num_spins_(num_spins), matrix_(std::move(matrix)) {
  check_spin_count(num_spins);
  const Eigen::Index dim = Eigen::Index{1} << num_spins;
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("matrix is not 2^N x 2^N");
  }
}

SpinOperator SpinOperator::zero(int num_spins) {
  check_spin_count(num_spins);
  const Eigen::Index dim = Eigen::Index{1} << num_spins;
  return SpinOperator(num_spins, Sparse(dim, dim));
}

SpinOperator SpinOperator::identity(int num_spins) {
  check_spin_count(num_spins);
  const Eigen::Index dim = Eigen::Index{1} << num_spins;
  Sparse m(dim, dim);
  m.setIdentity();
  return SpinOperator(num_spins, std::move(m));
}

double SpinOperator::hermiticity_defect() const {
  const Sparse defect = matrix_ - Sparse(matrix_.adjoint());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < defect.outerSize(); ++k) {
    for (Sparse::InnerIterator it(defect, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

SpinOperator& SpinOperator::operator+=(const SpinOperator& other) {
  check_same_shape(*this, other);
  matrix_ += other.matrix_;
  return *this;
}

SpinOperator& SpinOperator::operator-=(const SpinOperator& other) {
  check_same_shape(*this, other);
  matrix_ -= other.matrix_;
  return *this;
}

SpinOperator& SpinOperator::operator*=(Complex scale) {
  matrix_ *= scale;
  return *this;
}

SpinOperator operator*(const SpinOperator& a, const SpinOperator& b) {
  check_same_shape(a, b);
  SpinOperator::Sparse product = a.matrix_ * b.matrix_;
  return SpinOperator(a.num_spins_, std::move(product));
}

// --- constructors and algebra -----------------------------------------------

SpinOperator materialize(const PauliSum& sum, Execution exec) {
  auto m = exec == Execution::kParallel ? kernels::materialize_parallel(sum)
                                        : kernels::materialize_serial(sum);
  return SpinOperator(sum.num_spins(), std::move(m));
}

SpinOperator embed_single(int num_spins, int i, PauliAxis axis) {
  PauliSum s(num_spins);
  s.add_single(i, axis, 1.0);
  return materialize(s);
}

SpinOperator embed_pair(int num_spins, int i, int j, PauliAxis axis) {
  PauliSum s(num_spins);
  s.add_pair(i, j, axis, 1.0);
  return materialize(s);
}

SpinOperator commutator(const SpinOperator& a, const SpinOperator& b) {
  return a * b - b * a;
}

SpinOperator anticommutator(const SpinOperator& a, const SpinOperator& b) {
  return a * b + b * a;
}

double frobenius_norm(const SpinOperator& a) { return a.matrix().norm(); }

Complex trace(const SpinOperator& a) {
  Complex t{0.0, 0.0};
  for (Eigen::Index k = 0; k < a.matrix().outerSize(); ++k) {
    t += a.matrix().coeff(k, k);
  }
  return t;
}

EigenDecomposition hermitian_eigendecomposition(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("eigendecomposition needs a square matrix");
  }
  const double scale = a.cwiseAbs().maxCoeff();
  const double defect = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-10 * scale) {
    throw NonHermitianOperator("operator is not Hermitian: |A - A^H| = " +
                               std::to_string(defect));
  }
  EigenDecomposition out;
  if (a.imag().cwiseAbs().maxCoeff() == 0.0) {
    const Eigen::MatrixXd re = a.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(re);
    if (es.info() != Eigen::Success) throw Error("eigensolver failed");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    if (es.info() != Eigen::Success) throw Error("eigensolver failed");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
  }
  return out;
}

EigenDecomposition hermitian_eigendecomposition(const SpinOperator& a,
                                                int spin_cap) {
  require_within_cap(a.num_spins(), spin_cap);
  return hermitian_eigendecomposition(a.to_dense());
}

}  // namespace rgquad
