#include <random>

#include <gtest/gtest.h>

#include "rgquad/catalog.hpp"
#include "support/oracle.hpp"

using namespace rgquad;

TEST(Xxx, TwoSpinCouplings) {
  const std::vector<double> eps{0.0, 1.0};
  const auto s = xxx_rational(eps, 1.0);
  for (auto a : kAxes) {
    EXPECT_EQ(s.coupling(0, 1, a), -0.5);
    EXPECT_EQ(s.coupling(1, 0, a), 0.5);
  }
  EXPECT_EQ(s.field(0), (Vec3{0, 0, 1}));
}

TEST(Xxx, SkewSymmetricAndIntegrableProperty) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto eps = oracle::spread_levels(rng, 2 + trial % 6, -3.0, 0.25);
    const auto s = xxx_rational(eps, 0.5);
    EXPECT_TRUE(check_integrability_algebraic(s, 1e-12).passed());
    for (int i = 0; i < s.num_spins(); ++i) {
      for (int j = 0; j < s.num_spins(); ++j) {
        for (auto a : kAxes) EXPECT_EQ(s.coupling(i, j, a), -s.coupling(j, i, a));
      }
    }
  }
}

TEST(Xxx, RejectsRepeatedLevels) {
  const std::vector<double> eps{0.0, 1.0, 1.0};
  EXPECT_THROW(xxx_rational(eps, 1.0), std::invalid_argument);
}

TEST(Pip, TwoSpinCouplings) {
  const std::vector<double> eps{1.0, 2.0};
  const auto s = xxz_pip(eps, 1.0, 0.0);
  EXPECT_NEAR(s.coupling(0, 1, PauliAxis::X), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.coupling(0, 1, PauliAxis::Y), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.coupling(0, 1, PauliAxis::Z), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.coupling(1, 0, PauliAxis::Z), -1.0 / 6.0, 1e-15);
  EXPECT_EQ(s.field(0), (Vec3{0, 0, 0.5}));
}

TEST(Pip, MatchesOracleAndCommutes) {
  const std::vector<double> eps{0.6, 1.1, 1.9, 2.6};
  const auto s = xxz_pip(eps, 0.8, 0.35);
  oracle::Fields B;
  oracle::Tensor G;
  oracle::pip(eps, 0.8, 0.35, B, G);
  for (int i = 0; i < 4; ++i) {
    for (auto a : kAxes) EXPECT_NEAR(s.field(i, a), B[i][axis_index(a)], 1e-15);
    for (int j = 0; j < 4; ++j) {
      for (auto a : kAxes) EXPECT_NEAR(s.coupling(i, j, a), G[i][j][axis_index(a)], 1e-15);
    }
  }
  EXPECT_TRUE(check_commutators_numerical(s, 1e-10).passed());
}

TEST(Pip, RejectsBadLevels) {
  const std::vector<double> zero{0.0, 1.0};
  EXPECT_THROW(xxz_pip(zero, 1.0, 0.0), std::invalid_argument);
  const std::vector<double> mirrored{-1.0, 1.0};
  EXPECT_THROW(xxz_pip(mirrored, 1.0, 0.0), std::invalid_argument);
}

TEST(Trigonometric, SmallAngleLimitIsRational) {
  const std::vector<double> eps{1e-4, 0.0};
  const auto s = xxz_trigonometric(eps, 1.0);
  EXPECT_NEAR(s.coupling(0, 1, PauliAxis::X), 0.5e4, 1e-3);
  EXPECT_NEAR(s.coupling(0, 1, PauliAxis::Z), 0.5e4, 1e-3);
}

TEST(Trigonometric, ThreeSpinsIntegrableAndSkew) {
  const std::vector<double> eps{0.3, 0.9, 1.7};
  const auto s = xxz_trigonometric(eps, 1.0);
  EXPECT_TRUE(check_integrability_algebraic(s, 1e-11).passed());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(s.coupling(i, j, PauliAxis::X), -s.coupling(j, i, PauliAxis::X));
      EXPECT_EQ(s.coupling(i, j, PauliAxis::Z), -s.coupling(j, i, PauliAxis::Z));
    }
  }
}

TEST(Trigonometric, RejectsCommensurateLevels) {
  const std::vector<double> eps{0.0, M_PI};
  EXPECT_THROW(xxz_trigonometric(eps, 1.0), std::invalid_argument);
}

TEST(Shifts, XxxTwoSpins) {
  const std::vector<double> eps{0.0, 1.0};
  const auto d = xxx_shift(eps).offsets;
  EXPECT_EQ(d[0], 0.5);
  EXPECT_EQ(d[1], -0.5);
}

TEST(Shifts, XxxSumsToZeroProperty) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto eps = oracle::spread_levels(rng, 2 + trial % 7, -2.0, 0.1);
    double sum = 0.0;
    for (double d : xxx_shift(eps).offsets) sum += d;
    EXPECT_NEAR(sum, 0.0, 1e-10);
  }
}

TEST(Shifts, PipTwoSpins) {
  const std::vector<double> eps{1.0, 2.0};
  EXPECT_NEAR(pip_shift(eps, 1.0).offsets[0], -1.0 / 6.0, 1e-15);
}

TEST(ShiftedRelation, Xxx) {
  const std::vector<double> two{0.0, 1.0};
  for (double r : verify_shifted_relation_xxx(two, 1.0)) EXPECT_LE(r, 1e-12);
  std::mt19937_64 rng(12);
  const auto eps = oracle::spread_levels(rng, 5, -1.0, 0.3);
  for (double r : verify_shifted_relation_xxx(eps, 0.7)) EXPECT_LE(r, 1e-11);
}

TEST(ShiftedRelation, Pip) {
  const std::vector<double> two{1.0, 2.0};
  for (double r : verify_shifted_relation_pip(two, 0.5, 0.3)) EXPECT_LE(r, 1e-12);
  for (double r : verify_shifted_relation_pip(two, 0.5, 0.0)) EXPECT_LE(r, 1e-12);
}

TEST(ConstantIdentities, RandomLevelsProperty) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> g(0.1, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto eps = oracle::spread_levels(rng, 2 + trial % 7, 0.2, 0.2);
    for (double r : xxx_constant_identity(eps)) EXPECT_LE(r, 1e-12);
    for (double r : pip_constant_identity(eps, g(rng))) EXPECT_LE(r, 1e-12);
  }
}

TEST(Families, ListingAndParsing) {
  const auto fams = catalog_families();
  ASSERT_EQ(fams.size(), 3u);
  for (const auto& f : fams) {
    EXPECT_EQ(family_name(parse_family(f.name)), f.name);
    EXPECT_FALSE(f.parameters.empty());
  }
  EXPECT_THROW(parse_family("xyz_elliptic"), std::invalid_argument);
}

TEST(Families, BuildCatalogModelDispatches) {
  CatalogParams p;
  p.family = CatalogFamily::kXxzPip;
  p.epsilon = {1.0, 2.0};
  p.G = 1.0;
  EXPECT_EQ(build_catalog_model(p), xxz_pip(p.epsilon, 1.0, 0.0));
}
