#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cbch/trotter.hpp"

using namespace cbch;

namespace {
const ProductParams kReferencePoint{kTwoPi - 0.1, 0.2};
}

TEST(TrotterMatrix, SingleFactorIsExact) {
  const double eta = 0.37;
  const SymplecticMatrix2 m = trotter_matrix({0.0, eta, 0.0, 0.0}, 1);
  EXPECT_LT((m - exp2(eta * adjoint_generator(GeneratorKind::MINUS))).norm(), 1e-15);
}

TEST(TrotterMatrix, ConvergesToTheSingleExponential) {
  const AlgebraCoeffs c = solve(kReferencePoint);
  const SymplecticMatrix2 exact = exp2(algebra_element(c.alpha, c.beta, c.gamma));
  EXPECT_LT(spectral_norm(trotter_matrix(c, 10000) - exact), 1e-6);
}

TEST(TrotterMatrix, IgnoresDeltaAndValidates) {
  AlgebraCoeffs c = solve(kReferencePoint);
  const SymplecticMatrix2 with = trotter_matrix(c, 3);
  c.delta = 0.0;
  EXPECT_EQ(with, trotter_matrix(c, 3));
  EXPECT_THROW(trotter_matrix(c, 0), Error);
  c.beta = NAN;
  EXPECT_THROW(trotter_matrix(c, 1), Error);
}

TEST(TrotterError, QuotedPercentages) {
  const double quoted[] = {0.005, 0.0025, 0.001};
  const int ns[] = {1, 2, 5};
  for (int k = 0; k < 3; ++k) {
    const TrotterRecord r = trotter_error(kReferencePoint, ns[k]);
    EXPECT_EQ(r.n_steps, ns[k]);
    EXPECT_NEAR(r.error_abs, quoted[k], 0.5 * quoted[k]);
    EXPECT_NEAR(r.error_rel, quoted[k], 0.5 * quoted[k]);
  }
  EXPECT_LT(trotter_error(kReferencePoint, 10000).error_abs, 1e-6);
}

TEST(TrotterError, MonotoneInPowersOfTwo) {
  double prev = INFINITY;
  for (int n = 1; n <= 64; n *= 2) {
    const TrotterRecord r = trotter_error(kReferencePoint, n);
    EXPECT_LE(r.error_abs, prev) << n;
    EXPECT_GE(r.error_abs, 0.0);
    // target norm exceeds one here, so the relative error is the smaller one
    EXPECT_LE(r.error_rel, r.error_abs);
    prev = r.error_abs;
  }
}

TEST(TrotterError, NeedsAnAdmissibleSecondBranch) {
  try {
    trotter_error({0.2, 1.0}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CurveSingular);
  }
  EXPECT_THROW(trotter_error(kReferencePoint, 0), Error);
}

TEST(TrotterError, NumberBasisAgreesOnTheLowestStates) {
  FockConfig cfg;
  for (int n : {1, 2, 5}) {
    const double sym = trotter_error(kReferencePoint, n).error_abs;
    const double fock = fock_trotter_error(kReferencePoint, n, cfg, 1).error_abs;
    EXPECT_LT(fock / sym, 3.0) << n;
    EXPECT_GT(fock / sym, 1.0 / 3.0) << n;
  }
  EXPECT_THROW(fock_trotter_error(kReferencePoint, 1, cfg, cfg.n_max + 1), Error);
}

TEST(TrotterError, NumberBasisErrorGrowsWithPhotonNumber) {
  FockConfig cfg;
  const double low = fock_trotter_error(kReferencePoint, 2, cfg, 1).error_abs;
  const double high = fock_trotter_error(kReferencePoint, 2, cfg, 12).error_abs;
  EXPECT_GT(high, low);
}

TEST(ScalingReport, FirstOrderAtReferencePoint) {
  const ScalingReport rep = scaling_report(kReferencePoint, {1, 2, 4, 8, 16, 32, 64});
  EXPECT_FALSE(rep.degenerate);
  EXPECT_EQ(rep.records.size(), 7u);
  EXPECT_GE(rep.slope, -1.15);
  EXPECT_LE(rep.slope, -0.85);
}

TEST(ScalingReport, PureSqueezingIsDegenerate) {
  const ScalingReport rep = scaling_report({0.0, 0.8}, {1, 2, 4}, BranchPolicy::FORCE_MAIN);
  EXPECT_TRUE(rep.degenerate);
  EXPECT_TRUE(std::isnan(rep.slope));
  for (const auto& r : rep.records) EXPECT_LT(r.error_abs, 1e-13);
}

TEST(ScalingReport, RandomSecondBranchPoints) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> w(3.5, kTwoPi), e(-0.6, 0.6);
  int used = 0;
  while (used < 20) {
    const ProductParams p{w(rng), e(rng)};
    if (region_x(p.omega, p.eta) > 0.0) continue;
    const ScalingReport rep = scaling_report(p, {1, 2, 4, 8, 16});
    if (rep.degenerate) continue;
    EXPECT_GE(rep.slope, -1.3) << p.omega << " " << p.eta;
    EXPECT_LE(rep.slope, -0.7) << p.omega << " " << p.eta;
    ++used;
  }
}

TEST(ScalingReport, InputValidation) {
  EXPECT_THROW(scaling_report(kReferencePoint, {1, 2}), Error);
  EXPECT_THROW(scaling_report(kReferencePoint, {4, 2, 1}), Error);
  EXPECT_THROW(scaling_report(kReferencePoint, {0, 1, 2}), Error);
}
