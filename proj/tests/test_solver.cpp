#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "cbch/oracles.hpp"
#include "cbch/solver.hpp"

using namespace cbch;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

double triple_distance(const AlgebraCoeffs& a, const AlgebraCoeffs& b) {
  return std::hypot(a.alpha - b.alpha, a.beta - b.beta, a.gamma - b.gamma);
}

/// omega on the far side of pi where x takes the given value at this eta.
double omega_at_x(double x, double eta) { return 2.0 * std::acos(x / std::cosh(0.5 * eta)); }

FockConfig fock_cfg() { return FockConfig{}; }

FockConfig wide_fock_cfg() {
  FockConfig cfg;
  cfg.dim = 128;
  return cfg;
}

}  // namespace

TEST(Classify, RegionsFromX) {
  EXPECT_EQ(classify({0.0, 1.0}).region, Region::MAIN_ONLY);
  EXPECT_EQ(classify({1.0, 1.0}).region, Region::OVERLAP);
  EXPECT_EQ(classify({kTwoPi, 0.2}).region, Region::SECOND_ONLY);
  EXPECT_EQ(classify({0.0, 0.0}).region, Region::CURVE_PLUS);
  EXPECT_EQ(classify({kTwoPi, 0.0}).region, Region::HORIZON);
  EXPECT_NEAR(classify({1.0, 1.0}).x, std::cosh(0.5) * std::cos(0.5), 1e-15);
  EXPECT_EQ(region_name(Region::SECOND_ONLY), "SECOND_ONLY");
}

TEST(Classify, RejectsNonFinite) {
  EXPECT_EQ(kind_of([] { classify({NAN, 0.0}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { solve({0.1, INFINITY}); }), ErrorKind::InvalidArgument);
}

TEST(SolveMain, CheckedByBothOracles) {
  const ProductParams p{1.0, 1.0};
  const BranchResult r = solve_main_traced(p);
  EXPECT_EQ(r.coeffs.delta, 0.0);
  EXPECT_EQ(r.coeffs.branch, Branch::MAIN);
  EXPECT_LT(verify_coeffs(p, r.coeffs), 1e-10);
  EXPECT_LT(fock_verify(p, r.coeffs, wide_fock_cfg()), 1e-6);
  const Sl2Log lg = matrix_log_sl2(symplectic_product(p));
  ASSERT_EQ(lg.kind, LogKind::Real);
  EXPECT_NEAR(lg.triple[0], r.coeffs.alpha, 1e-10);
  EXPECT_NEAR(lg.triple[1], r.coeffs.beta, 1e-10);
  EXPECT_NEAR(lg.triple[2], r.coeffs.gamma, 1e-10);
}

TEST(SolveMain, PureSqueezing) {
  const AlgebraCoeffs c = solve_main({0.0, 1.3});
  EXPECT_NEAR(c.alpha, 0.0, 1e-15);
  EXPECT_NEAR(c.beta, 1.3, 1e-14);
  EXPECT_NEAR(c.gamma, 0.0, 1e-15);
}

TEST(SolveMain, DivergesTowardHorizon) {
  const double eta = 0.2;
  const AlgebraCoeffs near = solve_main({omega_at_x(-1.0 + 1e-8, eta), eta});
  EXPECT_GT(near.triple_norm(), 10.0);
  const double n6 = solve_main({omega_at_x(-1.0 + 1e-6, eta), eta}).triple_norm();
  const double n3 = solve_main({omega_at_x(-1.0 + 1e-3, eta), eta}).triple_norm();
  EXPECT_GE(n6, 2.0 * n3);
}

TEST(SolveMain, Errors) {
  EXPECT_EQ(kind_of([] { solve({kTwoPi - 0.1, 0.2}, BranchPolicy::FORCE_MAIN); }),
            ErrorKind::HorizonSingular);
  EXPECT_EQ(kind_of([] { solve_main({1.0, 0.0}); }), ErrorKind::DegenerateEta);
  EXPECT_EQ(kind_of([] { solve_main({7.0, 0.3}); }), ErrorKind::OutOfCanonicalDomain);
}

TEST(SolveSecond, ReferencePointChecked) {
  const ProductParams p{kTwoPi - 0.1, 0.2};
  const AlgebraCoeffs c = solve_second(p);
  EXPECT_DOUBLE_EQ(c.delta, kHalfPi);
  EXPECT_LT(verify_coeffs(p, c), 1e-12);
  EXPECT_LT(fock_verify(p, c, fock_cfg()), 1e-6);
}

TEST(SolveSecond, Errors) {
  EXPECT_EQ(kind_of([] { solve_second({0.1, 1.0}); }), ErrorKind::CurveSingular);
  EXPECT_EQ(kind_of([] { solve({0.0, 0.0}, BranchPolicy::FORCE_SECOND); }), ErrorKind::CurveSingular);
  EXPECT_EQ(kind_of([] { solve_second({4.0, 0.0}); }), ErrorKind::DegenerateEta);
}

TEST(SolveEtaZero, ClosedForms) {
  const AlgebraCoeffs a = solve_eta_zero(0.5);
  EXPECT_EQ(a.gamma, 0.5);
  EXPECT_EQ(a.delta, 0.0);
  const AlgebraCoeffs b = solve_eta_zero(kTwoPi);
  EXPECT_NEAR(b.gamma, 0.0, 1e-15);
  EXPECT_EQ(b.delta, kHalfPi);
  const AlgebraCoeffs c = solve_eta_zero(1.5 * kPi);
  EXPECT_NEAR(c.gamma, -kHalfPi, 1e-15);
  EXPECT_EQ(c.delta, kHalfPi);
  // Diagonal operators: the truncated number-basis comparison is exact.
  for (double w : {0.5, 1.5 * kPi, kTwoPi, -1.5 * kPi}) {
    FockConfig cfg;
    cfg.dim = 16;
    cfg.n_max = 8;
    EXPECT_LT(fock_verify({w, 0.0}, solve_eta_zero(w), cfg), 1e-13) << w;
    EXPECT_LT(verify_coeffs({w, 0.0}, solve_eta_zero(w)), 1e-14) << w;
  }
  EXPECT_EQ(kind_of([] { solve_eta_zero(7.0); }), ErrorKind::OutOfCanonicalDomain);
}

TEST(SolveContinuous, RandomPointsPassBothOracles) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> w(-kTwoPi, kTwoPi), e(-0.5, 0.5);
  int fock_checked = 0;
  for (int k = 0; k < 200; ++k) {
    const ProductParams p{w(rng), e(rng)};
    const RegionClass rc = classify(p);
    if (std::abs(rc.x - 1.0) < 1e-6 || std::abs(rc.x + 1.0) < 1e-6) continue;
    const AlgebraCoeffs c = solve(p);
    EXPECT_TRUE(c.delta == 0.0 || std::abs(c.delta) == kHalfPi);
    EXPECT_LT(verify_coeffs(p, c), 1e-9) << p.omega << " " << p.eta;
    try {
      EXPECT_LT(fock_verify(p, c, fock_cfg()), 1e-6) << p.omega << " " << p.eta;
      ++fock_checked;
    } catch (const Error& err) {
      EXPECT_EQ(err.kind(), ErrorKind::TruncationUnreliable);
    }
  }
  EXPECT_GT(fock_checked, 100);
}

TEST(SolveContinuous, NegativeOmegaIsTheConjugate) {
  for (double w : {0.7, 2.0, 3.5, 5.9, 6.2}) {
    for (double eta : {-0.3, 0.25}) {
      const AlgebraCoeffs pos = solve({w, eta});
      const AlgebraCoeffs neg = solve({-w, eta});
      EXPECT_NEAR(neg.alpha, -pos.alpha, 1e-14);
      EXPECT_NEAR(neg.beta, pos.beta, 1e-14);
      EXPECT_NEAR(neg.gamma, -pos.gamma, 1e-14);
      EXPECT_EQ(neg.delta, -pos.delta);
      EXPECT_LT(verify_coeffs({-w, eta}, neg), 1e-9);
      EXPECT_LT(fock_verify({-w, eta}, neg, fock_cfg()), 1e-6);
    }
  }
}

TEST(SolveContinuous, OperatorContinuousAcrossPi) {
  // The triple jumps to its negative at omega = pi, the operator does not.
  const FockGenerators g(64);
  for (double eta : {-0.4, 0.1, 0.3}) {
    const AlgebraCoeffs left = solve({kPi - 1e-9, eta});
    const AlgebraCoeffs right = solve({kPi + 1e-9, eta});
    EXPECT_EQ(left.branch, Branch::MAIN);
    EXPECT_EQ(right.branch, Branch::SECOND);
    const ComplexMatrix diff = fock_exponential(left, g) - fock_exponential(right, g);
    EXPECT_LT(spectral_norm(diff.leftCols(13)), 1e-6);
    const AlgebraCoeffs m = solve_main({kPi, eta}), s = solve_second({kPi, eta});
    EXPECT_NEAR(m.alpha, -s.alpha, 1e-14);
    EXPECT_NEAR(m.beta, -s.beta, 1e-14);
    EXPECT_NEAR(m.gamma, -s.gamma, 1e-14);
  }
}

TEST(BranchTrace, LiteralParametrizationReproducesCoefficients) {
  // Outside the x = +-1 curves a*cosh(xi) etc. are finite and equal the
  // assembled form; the second branch carries its sign inside a.
  const ProductParams pts[] = {{0.3, 1.2}, {1.0, 1.0}, {2.5, 0.4}, {4.0, 0.3}, {6.0, 0.5}, {5.0, -0.9}};
  for (const auto& p : pts) {
    for (Branch b : {Branch::MAIN, Branch::SECOND}) {
      BranchResult r;
      try {
        r = b == Branch::MAIN ? solve_main_traced(p) : solve_second_traced(p);
      } catch (const Error&) {
        continue;
      }
      const BranchSolution& t = r.trace;
      double lit_a, lit_g;
      if (t.parametrization == Parametrization::HYPERBOLIC) {
        lit_a = t.a * std::cosh(t.xi);
        lit_g = t.a * std::sinh(t.xi);
      } else {
        lit_a = t.a * std::sinh(t.xi);
        lit_g = t.a * std::cosh(t.xi);
      }
      const double tol = 1e-12 * std::max(1.0, r.coeffs.triple_norm());
      EXPECT_NEAR(lit_a * std::cos(t.phi), r.coeffs.alpha, tol) << p.omega << " " << p.eta;
      EXPECT_NEAR(lit_a * std::sin(t.phi), r.coeffs.beta, tol) << p.omega << " " << p.eta;
      EXPECT_NEAR(lit_g, r.coeffs.gamma, tol) << p.omega << " " << p.eta;
    }
  }
}

TEST(Piecewise, AgreesWithContinuousSolve) {
  for (int i = 0; i <= 60; ++i) {
    for (double eta : {-2.0, -0.7, -0.05, 0.05, 0.3, 1.1, 2.5}) {
      const double w = kTwoPi * i / 60.0;
      const RegionClass rc = classify({w, eta});
      if (std::abs(rc.x - 1.0) < 1e-9 || std::abs(rc.x + 1.0) < 1e-9) continue;
      const PiecewiseResult pw = piecewise_C(w, eta);
      const AlgebraCoeffs c = solve({w, eta});
      EXPECT_LT(triple_distance(pw.coeffs, c), 1e-10 * std::max(1.0, c.triple_norm())) << w << " " << eta;
      EXPECT_EQ(pw.coeffs.delta, c.delta);
    }
  }
}

TEST(Piecewise, EndpointsOfTheTable) {
  const double eta = 0.4;
  const PiecewiseResult start = piecewise_C(0.0, eta);
  EXPECT_EQ(start.region, 1);
  EXPECT_NEAR(start.coeffs.alpha, 0.0, 1e-15);
  EXPECT_NEAR(start.coeffs.beta, eta, 1e-14);
  EXPECT_NEAR(start.coeffs.gamma, 0.0, 1e-15);
  EXPECT_NEAR(start.trace.a, eta, 1e-14);

  const double w1 = 2.0 * std::acos(1.0 / std::cosh(0.5 * eta));
  EXPECT_NEAR(piecewise_C(w1, eta).trace.a, 0.0, 1e-6);

  const PiecewiseResult end = piecewise_C(kTwoPi, eta);
  EXPECT_EQ(end.region, 4);
  EXPECT_NEAR(end.trace.a, eta, 1e-12);
  EXPECT_NEAR(end.coeffs.alpha, 0.0, 1e-14);
  EXPECT_NEAR(end.coeffs.beta, eta, 1e-13);
  EXPECT_NEAR(end.coeffs.gamma, 0.0, 1e-14);
  EXPECT_EQ(end.coeffs.delta, kHalfPi);

  EXPECT_EQ(piecewise_C(2.0, eta).region, 2);
  EXPECT_EQ(piecewise_C(4.0, eta).region, 3);
  EXPECT_EQ(kind_of([] { piecewise_C(-0.1, 0.4); }), ErrorKind::OutOfCanonicalDomain);
  EXPECT_EQ(kind_of([] { piecewise_C(1.0, 0.0); }), ErrorKind::DegenerateEta);
}

TEST(SmallT, ClosedFormValues) {
  const AlgebraCoeffs z = small_t_series(1.0, 1.0, 0.0);
  EXPECT_EQ(z.triple_norm(), 0.0);
  const AlgebraCoeffs c = small_t_series(1.0, 1.0, 0.1);
  EXPECT_NEAR(c.alpha, 0.005, 1e-16);
  EXPECT_NEAR(c.beta, 0.1 - 1e-3 / 12.0, 1e-16);
  EXPECT_NEAR(c.gamma, 0.1 + 1e-3 / 12.0, 1e-16);
  EXPECT_EQ(kind_of([] { small_t_series(1.0, 1.0, 1.0); }), ErrorKind::InvalidArgument);
}

TEST(SmallT, RemainderShrinksFasterThanCubic) {
  const double w = 1.0, e = 1.0;
  auto remainder = [&](double t) { return triple_distance(small_t_series(w, e, t), solve_main({w * t, e * t})); };
  const double r1 = remainder(0.1), r2 = remainder(0.05);
  EXPECT_GE(r1 / r2, 12.0);
}
