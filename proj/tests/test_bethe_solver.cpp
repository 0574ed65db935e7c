#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "rgquad/bethe_solver.hpp"
#include "rgquad/catalog.hpp"
#include "rgquad/errors.hpp"
#include "support/oracle.hpp"

using namespace rgquad;

namespace {

QuadraticSystem scalar_system(double k) {
  QuadraticSystem q;
  q.num_spins = 1;
  q.C = Eigen::MatrixXd::Zero(1, 1);
  q.K_field = Eigen::VectorXd::Constant(1, k);
  q.K_coupling = Eigen::VectorXd::Zero(1);
  q.provenance.resize(1);
  return q;
}

QuadraticSystem xxx2() {
  const std::vector<double> eps{0.0, 1.0};
  return derive_coefficients(xxx_rational(eps, 1.0), 1e-10);
}

/// Dense ED tuples sorted lexicographically.
std::vector<Eigen::VectorXd> dense_tuples(const oracle::Fields& B, const oracle::Tensor& G) {
  std::vector<Eigen::MatrixXcd> rs;
  for (std::size_t i = 0; i < B.size(); ++i) rs.push_back(oracle::charge(B, G, static_cast<int>(i)));
  auto t = oracle::joint_tuples(rs, 99);
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return t;
}

double central_fd_error(const QuadraticSystem& q, const Eigen::VectorXd& r) {
  const double h = 1e-6;
  const auto rj = residual_and_jacobian(q, r);
  double worst = 0.0;
  for (int j = 0; j < r.size(); ++j) {
    Eigen::VectorXd up = r, dn = r;
    up[j] += h;
    dn[j] -= h;
    const Eigen::VectorXd col = (bethe_residual(q, up) - bethe_residual(q, dn)) / (2 * h);
    for (int i = 0; i < r.size(); ++i) {
      worst = std::max(worst, std::abs(col[i] - rj.J(i, j)) / std::max(1.0, std::abs(rj.J(i, j))));
    }
  }
  return worst;
}

}  // namespace

TEST(Residual, ScalarCase) {
  const auto q = scalar_system(4.0);
  const auto rj = residual_and_jacobian(q, Eigen::VectorXd::Constant(1, 2.0));
  EXPECT_EQ(rj.F[0], 0.0);
  EXPECT_EQ(rj.J(0, 0), 4.0);
}

TEST(Residual, XxxTwoSpinsByHand) {
  const auto q = xxx2();
  const Eigen::Vector2d r(1.5, -0.5);
  const auto F = bethe_residual(q, r);
  // F_0 = r_0^2 + r_1 - 7/4, F_1 = r_1^2 - r_0 - 7/4
  EXPECT_NEAR(F[0], 2.25 - 0.5 - 1.75, 1e-15);
  EXPECT_NEAR(F[1], 0.25 - 1.5 - 1.75, 1e-15);
  EXPECT_LT(central_fd_error(q, r), 1e-6);
}

TEST(Residual, JacobianMatchesFiniteDifferencesProperty) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    const auto eps = oracle::spread_levels(rng, n, -1.0, 0.4);
    const auto spec = trial % 2 ? xxx_rational(eps, 1.0) : xxz_pip(eps, 0.7, 0.2);
    const auto q = derive_coefficients(spec, 1e-10);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r[i] = u(rng);
    EXPECT_LT(central_fd_error(q, r), 1e-6);
  }
}

TEST(Newton, ScalarSquareRoot) {
  const auto res = newton_solve(scalar_system(4.0), Eigen::VectorXd::Constant(1, 1.7));
  ASSERT_TRUE(res.converged());
  EXPECT_NEAR(res.best.r[0], 2.0, 1e-14);
}

TEST(Newton, TrivialZero) {
  const auto res = newton_solve(scalar_system(0.0), Eigen::VectorXd::Zero(1));
  ASSERT_TRUE(res.converged());
  EXPECT_EQ(res.iterations, 0);
  EXPECT_EQ(res.best.r[0], 0.0);
}

TEST(Newton, ConvergesToNearbyEdTuple) {
  oracle::Fields B;
  oracle::Tensor G;
  oracle::xxx({0.0, 1.0}, 1.0, B, G);
  const auto q = xxx2();
  for (const auto& t : dense_tuples(B, G)) {
    const auto res = newton_solve(q, t + Eigen::Vector2d(0.01, -0.02));
    ASSERT_TRUE(res.converged());
    EXPECT_LT((res.best.r - t).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Dedupe, Contracts) {
  const double tol = 1e-6;
  auto tuple = [](double a, double b, double res) {
    EigenvalueTuple t;
    t.r = Eigen::Vector2d(a, b);
    t.residual_norm = res;
    return t;
  };
  EXPECT_EQ(dedupe({tuple(1, 2, 0), tuple(1, 2, 0)}, tol).found(), 1u);
  EXPECT_EQ(dedupe({tuple(1, 2, 0), tuple(1 + 10 * tol, 2, 0)}, tol).found(), 2u);
  const auto s = dedupe({tuple(1 + 0.1 * tol, 2, 3e-13), tuple(1, 2 - 0.1 * tol, 1e-13),
                         tuple(1 - 0.05 * tol, 2, 2e-13)},
                        tol);
  ASSERT_EQ(s.found(), 1u);
  EXPECT_EQ(s.tuples[0].residual_norm, 1e-13);
  EXPECT_EQ(s.expected, 4u);
}

TEST(Dedupe, OutputIsSortedProperty) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<EigenvalueTuple> ts;
  for (int k = 0; k < 50; ++k) {
    EigenvalueTuple t;
    t.r = Eigen::Vector3d(u(rng), u(rng), u(rng));
    ts.push_back(t);
  }
  const auto s = dedupe(ts, 1e-9);
  EXPECT_EQ(s.found(), 50u);
  for (std::size_t k = 1; k < s.tuples.size(); ++k) {
    EXPECT_TRUE(std::lexicographical_compare(s.tuples[k - 1].r.begin(), s.tuples[k - 1].r.end(),
                                             s.tuples[k].r.begin(), s.tuples[k].r.end()));
  }
}

TEST(Homotopy, DecoupledGivesSignTuples) {
  ModelSpec s(3);
  const double b[3] = {0.5, 1.25, 2.0};
  for (int i = 0; i < 3; ++i) s.set_field(i, PauliAxis::Z, b[i]);
  const auto set = solve_all_homotopy(s);
  ASSERT_TRUE(set.complete());
  for (const auto& t : set.tuples) {
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(t.r[i]), b[i], 1e-14);
  }
}

TEST(Homotopy, XxxTwoSpinsMatchesDenseEd) {
  oracle::Fields B;
  oracle::Tensor G;
  oracle::xxx({0.0, 1.0}, 1.0, B, G);
  const std::vector<double> eps{0.0, 1.0};
  const auto set = solve_all_homotopy(xxx_rational(eps, 1.0));
  ASSERT_EQ(set.found(), 4u);
  const auto ed = dense_tuples(B, G);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_LT((set.tuples[k].r - ed[k]).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Homotopy, XxxSixSpinsSumRule) {
  const std::vector<double> eps{0.0, 0.9, 2.1, 2.8, 4.0, 5.3};
  const auto spec = xxx_rational(eps, 1.0);
  const auto q = derive_coefficients(spec, 1e-10);
  const auto set = solve_all_homotopy(spec, q);
  ASSERT_EQ(set.found(), 64u);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(6);
  for (const auto& t : set.tuples) sum += t.r;
  EXPECT_LT(sum.cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_TRUE(spectral_sum_rules(set, q).passed(1e-8));
}

TEST(Homotopy, RejectsVanishingField) {
  const std::vector<double> eps{0.0, 1.0};
  EXPECT_FALSE(homotopy_applicable(xxx_rational(eps, 0.0)));
  EXPECT_THROW(solve_all_homotopy(xxx_rational(eps, 0.0)), StartupDegenerate);
}

TEST(Homotopy, SerialAndParallelAgree) {
  const std::vector<double> eps{0.4, 1.0, 1.7, 2.3};
  const auto spec = xxz_pip(eps, 0.9, 0.3);
  HomotopyOptions s;
  s.exec = Execution::kSerial;
  const auto a = solve_all_homotopy(spec, s);
  const auto b = solve_all_homotopy(spec);
  ASSERT_EQ(a.found(), b.found());
  for (std::size_t k = 0; k < a.found(); ++k) EXPECT_EQ(a.tuples[k].r, b.tuples[k].r);
}

TEST(Multistart, ScalarFindsBothRoots) {
  const auto set = solve_all_multistart(scalar_system(4.0));
  ASSERT_EQ(set.found(), 2u);
  EXPECT_NEAR(set.tuples[0].r[0], -2.0, 1e-14);
  EXPECT_NEAR(set.tuples[1].r[0], 2.0, 1e-14);
}

TEST(Multistart, AgreesWithHomotopyOnXxx3) {
  const std::vector<double> eps{0.0, 1.0, 2.0};
  const auto spec = xxx_rational(eps, 1.0);
  const auto q = derive_coefficients(spec, 1e-10);
  const auto h = solve_all_homotopy(spec, q);
  const auto m = solve_all_multistart(q);
  ASSERT_EQ(h.found(), 8u);
  ASSERT_EQ(m.found(), 8u);
  for (std::size_t k = 0; k < 8; ++k) {
    EXPECT_LT((h.tuples[k].r - m.tuples[k].r).cwiseAbs().maxCoeff(), h.dedupe_tol);
  }
}

TEST(Multistart, TinySampleReportsIncomplete) {
  const std::vector<double> eps{0.0, 1.0, 2.0};
  const auto q = derive_coefficients(xxx_rational(eps, 1.0), 1e-10);
  MultistartOptions o;
  o.sample_count = 2;
  const auto set = solve_all_multistart(q, o);
  EXPECT_LE(set.found(), 2u);
  EXPECT_FALSE(set.complete());
  EXPECT_EQ(set.expected, 8u);
}

TEST(Multistart, SeedIsReproducible) {
  const std::vector<double> eps{0.1, 0.8, 1.9};
  const auto q = derive_coefficients(xxz_pip(eps, 0.6, 0.2), 1e-10);
  MultistartOptions o;
  o.seed = 77;
  o.sample_count = 100;
  const auto a = solve_all_multistart(q, o);
  o.exec = Execution::kSerial;
  const auto b = solve_all_multistart(q, o);
  ASSERT_EQ(a.found(), b.found());
  for (std::size_t k = 0; k < a.found(); ++k) EXPECT_EQ(a.tuples[k].r, b.tuples[k].r);
  EXPECT_EQ(a.seed.value(), 77u);
}

TEST(SumRules, NotApplicableToIncompleteSets) {
  const auto q = scalar_system(4.0);
  SolutionSet s;
  s.expected = 2;
  EigenvalueTuple t;
  t.r = Eigen::VectorXd::Constant(1, 2.0);
  s.tuples.push_back(t);
  EXPECT_FALSE(spectral_sum_rules(s, q).applicable);
  EXPECT_FALSE(spectral_sum_rules(s, q).passed(1.0));
}
