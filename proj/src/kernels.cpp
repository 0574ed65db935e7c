#include "rgquad/kernels.hpp"

#include <algorithm>
#include <bit>
#include <utility>

namespace rgquad::kernels {

namespace {

/// Action of a Pauli string on basis column `col`: returns the row it maps
/// to and the matrix element there.
inline std::pair<std::uint64_t, Complex> apply(const PauliString& s,
                                               std::uint64_t col) {
  static constexpr Complex kIPowers[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  const int y_count = std::popcount(s.flip_mask & s.phase_mask);
  const int sign_flips = std::popcount(col & s.phase_mask);
  Complex v = s.coefficient * kIPowers[y_count & 3];
  if (sign_flips & 1) v = -v;
  return {col ^ s.flip_mask, v};
}

constexpr Eigen::Index kColumnBlock = 16;

}  // namespace

SpinOperator::Sparse materialize_serial(const PauliSum& sum) {
  const Eigen::Index dim = Eigen::Index{1} << sum.num_spins();
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * sum.terms().size());
  for (Eigen::Index col = 0; col < dim; ++col) {
    for (const auto& term : sum.terms()) {
      const auto [row, value] = apply(term, static_cast<std::uint64_t>(col));
      triplets.emplace_back(static_cast<Eigen::Index>(row), col, value);
    }
  }
  SpinOperator::Sparse m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune([](Eigen::Index, Eigen::Index, const Complex& v) {
    return v != Complex(0.0, 0.0);
  });
  m.makeCompressed();
  return m;
}

SpinOperator::Sparse materialize_parallel(const PauliSum& sum) {
  const Eigen::Index dim = Eigen::Index{1} << sum.num_spins();
  const auto& terms = sum.terms();
  const auto width = static_cast<Eigen::Index>(terms.size());

  std::vector<Eigen::Index> rows(static_cast<std::size_t>(dim * width));
  std::vector<Complex> values(rows.size());
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(dim), 0);

#pragma omp parallel
  {
    std::vector<std::pair<Eigen::Index, Complex>> column(terms.size());
#pragma omp for schedule(static)
    for (Eigen::Index col = 0; col < dim; ++col) {
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const auto [row, value] = apply(terms[t], static_cast<std::uint64_t>(col));
        column[t] = {static_cast<Eigen::Index>(row), value};
      }
      std::sort(column.begin(), column.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      Eigen::Index n = 0;
      const Eigen::Index base = col * width;
      for (std::size_t t = 0; t < column.size();) {
        Complex acc = column[t].second;
        std::size_t u = t + 1;
        while (u < column.size() && column[u].first == column[t].first) {
          acc += column[u].second;
          ++u;
        }
        if (acc != Complex(0.0, 0.0)) {
          rows[base + n] = column[t].first;
          values[base + n] = acc;
          ++n;
        }
        t = u;
      }
      counts[col] = n;
    }
  }

  SpinOperator::Sparse m(dim, dim);
  Eigen::Index nnz = 0;
  for (Eigen::Index col = 0; col < dim; ++col) nnz += counts[col];
  m.resizeNonZeros(nnz);
  auto* outer = m.outerIndexPtr();
  outer[0] = 0;
  for (Eigen::Index col = 0; col < dim; ++col) {
    outer[col + 1] = outer[col] + static_cast<int>(counts[col]);
  }
  auto* inner = m.innerIndexPtr();
  auto* data = m.valuePtr();
#pragma omp parallel for schedule(static)
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Eigen::Index base = col * width;
    for (Eigen::Index n = 0; n < counts[col]; ++n) {
      inner[outer[col] + n] = static_cast<int>(rows[base + n]);
      data[outer[col] + n] = values[base + n];
    }
  }
  return m;
}

Expectations expectations_serial(const std::vector<SpinOperator>& charges,
                                 const Eigen::MatrixXcd& states) {
  const auto n = static_cast<Eigen::Index>(charges.size());
  Expectations out{Eigen::MatrixXd(states.cols(), n),
                   Eigen::MatrixXd(states.cols(), n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::MatrixXcd image = charges[i].matrix() * states;
    for (Eigen::Index k = 0; k < states.cols(); ++k) {
      const double r = states.col(k).dot(image.col(k)).real();
      out.values(k, i) = r;
      out.residuals(k, i) = (image.col(k) - r * states.col(k)).norm();
    }
  }
  return out;
}

Expectations expectations_parallel(const std::vector<SpinOperator>& charges,
                                   const Eigen::MatrixXcd& states) {
  const auto n = static_cast<Eigen::Index>(charges.size());
  const Eigen::Index cols = states.cols();
  Expectations out{Eigen::MatrixXd(cols, n), Eigen::MatrixXd(cols, n)};
  const Eigen::Index blocks = (cols + kColumnBlock - 1) / kColumnBlock;
#pragma omp parallel for collapse(2) schedule(dynamic)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index b = 0; b < blocks; ++b) {
      const Eigen::Index first = b * kColumnBlock;
      const Eigen::Index width = std::min(kColumnBlock, cols - first);
      const auto block = states.middleCols(first, width);
      const Eigen::MatrixXcd image = charges[i].matrix() * block;
      for (Eigen::Index k = 0; k < width; ++k) {
        const double r = block.col(k).dot(image.col(k)).real();
        out.values(first + k, i) = r;
        out.residuals(first + k, i) = (image.col(k) - r * block.col(k)).norm();
      }
    }
  }
  return out;
}

std::vector<double> commutator_norms_serial(
    const std::vector<SpinOperator>& charges) {
  std::vector<double> norms;
  for (std::size_t i = 0; i < charges.size(); ++i) {
    for (std::size_t j = i + 1; j < charges.size(); ++j) {
      norms.push_back(frobenius_norm(commutator(charges[i], charges[j])));
    }
  }
  return norms;
}

std::vector<double> commutator_norms_parallel(
    const std::vector<SpinOperator>& charges) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < charges.size(); ++i) {
    for (std::size_t j = i + 1; j < charges.size(); ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> norms(pairs.size());
  const auto count = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (long p = 0; p < count; ++p) {
    const auto [i, j] = pairs[p];
    norms[p] = frobenius_norm(commutator(charges[i], charges[j]));
  }
  return norms;
}

}  // namespace rgquad::kernels
