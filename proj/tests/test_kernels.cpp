#include <random>

#include <gtest/gtest.h>

#include "rgquad/catalog.hpp"
#include "rgquad/kernels.hpp"

using namespace rgquad;

namespace {

ModelSpec model(int n) {
  std::vector<double> eps;
  for (int i = 0; i < n; ++i) eps.push_back(0.5 + 0.7 * i);
  return xxz_pip(eps, 0.9, 0.3);
}

}  // namespace

TEST(Kernels, MaterializeSerialEqualsParallel) {
  for (int n = 1; n <= 8; ++n) {
    const auto spec = model(n);
    for (int i = 0; i < n; ++i) {
      const auto terms = charge_terms(spec, i);
      const SpinOperator::Sparse a = kernels::materialize_serial(terms);
      const SpinOperator::Sparse b = kernels::materialize_parallel(terms);
      ASSERT_EQ(a.nonZeros(), b.nonZeros());
      EXPECT_LT((a - b).norm(), 1e-14 * (1.0 + a.norm()));
    }
  }
}

TEST(Kernels, ExpectationsSerialEqualsParallel) {
  const auto charges = build_charges(model(6));
  const Eigen::MatrixXcd states = Eigen::MatrixXcd::Random(64, 40).colwise().normalized();
  const auto a = kernels::expectations_serial(charges, states);
  const auto b = kernels::expectations_parallel(charges, states);
  EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((a.residuals - b.residuals).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(a.values.rows(), 40);
  EXPECT_EQ(a.values.cols(), 6);
}

TEST(Kernels, ExpectationsOfEigenstatesHaveZeroResidual) {
  ModelSpec s(2);
  s.set_field(0, PauliAxis::Z, 1.0);
  s.set_field(1, PauliAxis::Z, 2.0);
  const auto e = kernels::expectations_serial(build_charges(s),
                                              Eigen::MatrixXcd::Identity(4, 4));
  EXPECT_EQ(e.residuals.maxCoeff(), 0.0);
  EXPECT_EQ(e.values(0, 1), 2.0);
  EXPECT_EQ(e.values(1, 1), -2.0);
}

TEST(Kernels, CommutatorNormsSerialEqualsParallel) {
  auto spec = model(5);
  spec.set_coupling(1, 3, PauliAxis::Y, 0.4);
  const auto charges = build_charges(spec);
  const auto a = kernels::commutator_norms_serial(charges);
  const auto b = kernels::commutator_norms_parallel(charges);
  ASSERT_EQ(a.size(), 10u);
  ASSERT_EQ(b.size(), 10u);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-14 * (1 + a[k]));
  EXPECT_GT(*std::max_element(a.begin(), a.end()), 1e-3);
}
