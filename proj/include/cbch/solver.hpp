#pragma once

// Closed-form single exponent h of  e^{i omega h_H} e^{i eta h_-} = e^{i h}:
//   h = alpha h_+ + beta h_- + gamma h_H + delta q,   q = 1 + 2 P_odd.
//
// Everything is organised around x = cosh(eta/2) cos(omega/2). The main
// branch (delta = 0) exists for x > -1 and diverges at the horizon x = -1;
// the second branch (delta = +-pi/2) exists for x < 1 and diverges at x = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "cbch/errors.hpp"

namespace cbch {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

/// |x -+ 1| below this snaps to the boundary region tags.
inline constexpr double kBoundaryTol = 1e-12;
/// A branch refuses to evaluate within this distance of its singular curve.
inline constexpr double kGuardTol = 1e-9;

struct ProductParams {
  double omega = 0.0;
  double eta = 0.0;

  void validate() const {
    if (!std::isfinite(omega) || !std::isfinite(eta))
      throw Error(ErrorKind::InvalidArgument, "omega and eta must be finite");
  }
};

enum class Region { MAIN_ONLY, OVERLAP, SECOND_ONLY, CURVE_PLUS, HORIZON };
enum class Branch { MAIN, SECOND };
enum class Parametrization { HYPERBOLIC, TRIGONOMETRIC };
enum class BranchPolicy { CONTINUOUS, FORCE_MAIN, FORCE_SECOND };

constexpr std::string_view region_name(Region r) {
  switch (r) {
    case Region::MAIN_ONLY: return "MAIN_ONLY";
    case Region::OVERLAP: return "OVERLAP";
    case Region::SECOND_ONLY: return "SECOND_ONLY";
    case Region::CURVE_PLUS: return "CURVE_PLUS";
    case Region::HORIZON: return "HORIZON";
  }
  return "?";
}

constexpr std::string_view branch_name(Branch b) { return b == Branch::MAIN ? "MAIN" : "SECOND"; }

constexpr std::string_view parametrization_name(Parametrization p) {
  return p == Parametrization::HYPERBOLIC ? "HYPERBOLIC" : "TRIGONOMETRIC";
}

struct RegionClass {
  double x = 0.0;
  Region region = Region::OVERLAP;
};

/// Raw branch parameters. For HYPERBOLIC, (a, xi) solve
///   sinh(a/2)cosh(xi) = +-sinh(eta/2), sinh(a/2)sinh(xi) = +-cosh(eta/2)sin(omega/2)
/// and for TRIGONOMETRIC they are the continued (a~, xi~) with
/// a = i a~, xi = xi~ - i pi/2. xi is infinite exactly on x = +-1.
struct BranchSolution {
  Branch branch = Branch::MAIN;
  double a = 0.0;
  double xi = 0.0;
  double phi = 0.0;
  Parametrization parametrization = Parametrization::HYPERBOLIC;
};

struct AlgebraCoeffs {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  Branch branch = Branch::MAIN;

  std::array<double, 3> triple() const { return {alpha, beta, gamma}; }
  double triple_norm() const { return std::sqrt(alpha * alpha + beta * beta + gamma * gamma); }
};

struct BranchResult {
  AlgebraCoeffs coeffs;
  BranchSolution trace;
};

inline double sign_of(double s) { return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0); }

inline double region_x(double omega, double eta) {
  return std::cosh(0.5 * eta) * std::cos(0.5 * omega);
}

inline RegionClass classify(const ProductParams& p, double boundary_tol = kBoundaryTol) {
  p.validate();
  const double x = region_x(p.omega, p.eta);
  Region r;
  if (std::abs(x - 1.0) <= boundary_tol)
    r = Region::CURVE_PLUS;
  else if (std::abs(x + 1.0) <= boundary_tol)
    r = Region::HORIZON;
  else if (x > 1.0)
    r = Region::MAIN_ONLY;
  else if (x < -1.0)
    r = Region::SECOND_ONLY;
  else
    r = Region::OVERLAP;
  return {x, r};
}

namespace detail {

inline void require_canonical(double omega) {
  if (std::abs(omega) > kTwoPi)
    throw Error(ErrorKind::OutOfCanonicalDomain, "|omega| > 2 pi is not supported");
}

/// kappa = a / sinh(a/2), continued to a~ / sin(a~/2); equals 2 at a = 0.
inline double kappa_hyperbolic(double a) {
  if (std::abs(a) < 1e-6) return 2.0 - a * a / 12.0;
  return a / std::sinh(0.5 * a);
}

inline double kappa_trigonometric(double a) {
  if (std::abs(a) < 1e-6) return 2.0 + a * a / 12.0;
  return a / std::sin(0.5 * a);
}

/// The direction both branches share: (sinh(eta/2)sin, sinh(eta/2)cos, cosh(eta/2)sin).
inline std::array<double, 3> branch_direction(double omega, double eta) {
  const double s = std::sin(0.5 * omega), c = std::cos(0.5 * omega);
  const double sh = std::sinh(0.5 * eta), ch = std::cosh(0.5 * eta);
  return {sh * s, sh * c, ch * s};
}

/// Shared by both branches: y = +x (main) or -x (second) selects the inverse
/// function. Returns the trace and kappa.
inline BranchResult evaluate_branch(const ProductParams& p, Branch branch) {
  const double x = region_x(p.omega, p.eta);
  const double y = branch == Branch::MAIN ? x : -x;
  const double sign = branch == Branch::MAIN ? 1.0 : -1.0;
  const double r = std::sin(0.5 * p.omega) / std::tanh(0.5 * p.eta);

  BranchSolution trace;
  trace.branch = branch;
  trace.phi = kHalfPi - 0.5 * p.omega;
  double kappa;
  if (y >= 1.0) {
    trace.parametrization = Parametrization::HYPERBOLIC;
    trace.a = sign * 2.0 * sign_of(p.eta) * std::acosh(y);
    trace.xi = std::atanh(std::clamp(r, -1.0, 1.0));
    kappa = kappa_hyperbolic(trace.a);
  } else {
    trace.parametrization = Parametrization::TRIGONOMETRIC;
    trace.a = sign * 2.0 * sign_of(std::sin(0.5 * p.omega)) * std::acos(std::max(y, -1.0));
    trace.xi = std::atanh(std::clamp(1.0 / r, -1.0, 1.0));
    kappa = kappa_trigonometric(trace.a);
  }

  const auto v = branch_direction(p.omega, p.eta);
  AlgebraCoeffs c;
  c.alpha = sign * kappa * v[0];
  c.beta = sign * kappa * v[1];
  c.gamma = sign * kappa * v[2];
  c.branch = branch;
  c.delta = branch == Branch::MAIN ? 0.0 : (p.omega >= 0.0 ? kHalfPi : -kHalfPi);
  return {c, trace};
}

}  // namespace detail

/// Main branch, connected to the identity at (0, 0). Valid for x > -1.
inline BranchResult solve_main_traced(const ProductParams& p) {
  p.validate();
  detail::require_canonical(p.omega);
  if (p.eta == 0.0) throw Error(ErrorKind::DegenerateEta, "eta = 0: use solve_eta_zero");
  const double x = region_x(p.omega, p.eta);
  if (x <= -1.0 + kGuardTol)
    throw Error(ErrorKind::HorizonSingular, "main branch diverges at x = -1 (x = " + std::to_string(x) + ")");
  return detail::evaluate_branch(p, Branch::MAIN);
}

inline AlgebraCoeffs solve_main(const ProductParams& p) { return solve_main_traced(p).coeffs; }

/// Second branch, carrying the central term delta q. Valid for x < 1.
inline BranchResult solve_second_traced(const ProductParams& p) {
  p.validate();
  detail::require_canonical(p.omega);
  if (p.eta == 0.0) throw Error(ErrorKind::DegenerateEta, "eta = 0: use solve_eta_zero");
  const double x = region_x(p.omega, p.eta);
  if (x >= 1.0 - kGuardTol)
    throw Error(ErrorKind::CurveSingular, "second branch diverges at x = 1 (x = " + std::to_string(x) + ")");
  return detail::evaluate_branch(p, Branch::SECOND);
}

inline AlgebraCoeffs solve_second(const ProductParams& p) { return solve_second_traced(p).coeffs; }

/// eta = 0: the product is the single phase shift. For |omega| > pi the
/// exponent is shifted by -+2 pi using e^{+-2 pi i h_H} = e^{+-i pi q / 2}.
inline AlgebraCoeffs solve_eta_zero(double omega) {
  if (!std::isfinite(omega)) throw Error(ErrorKind::InvalidArgument, "omega must be finite");
  detail::require_canonical(omega);
  AlgebraCoeffs c;
  if (omega > kPi) {
    c.gamma = omega - kTwoPi;
    c.delta = kHalfPi;
    c.branch = Branch::SECOND;
  } else if (omega < -kPi) {
    c.gamma = omega + kTwoPi;
    c.delta = -kHalfPi;
    c.branch = Branch::SECOND;
  } else {
    c.gamma = omega;
  }
  return c;
}

inline AlgebraCoeffs solve(const ProductParams& p, BranchPolicy policy = BranchPolicy::CONTINUOUS) {
  p.validate();
  detail::require_canonical(p.omega);
  if (p.eta == 0.0) {
    const double x = region_x(p.omega, 0.0);
    switch (policy) {
      case BranchPolicy::CONTINUOUS: return solve_eta_zero(p.omega);
      case BranchPolicy::FORCE_MAIN:
        if (x <= -1.0 + kGuardTol) throw Error(ErrorKind::HorizonSingular, "main branch at omega = +-2 pi");
        return AlgebraCoeffs{0.0, 0.0, p.omega, 0.0, Branch::MAIN};
      case BranchPolicy::FORCE_SECOND: {
        if (x >= 1.0 - kGuardTol) throw Error(ErrorKind::CurveSingular, "second branch at omega = 0");
        const double shift = p.omega > 0.0 ? -kTwoPi : kTwoPi;
        return AlgebraCoeffs{0.0, 0.0, p.omega + shift, p.omega > 0.0 ? kHalfPi : -kHalfPi, Branch::SECOND};
      }
    }
  }
  switch (policy) {
    case BranchPolicy::FORCE_MAIN: return solve_main(p);
    case BranchPolicy::FORCE_SECOND: return solve_second(p);
    case BranchPolicy::CONTINUOUS: break;
  }
  if (p.omega < 0.0) {
    // e^{-i omega h_H} e^{i eta h_-} is the complex conjugate (p -> -p) of
    // the omega > 0 product.
    AlgebraCoeffs c = solve({-p.omega, p.eta}, policy);
    c.alpha = -c.alpha;
    c.gamma = -c.gamma;
    c.delta = -c.delta;
    return c;
  }
  return p.omega <= kPi ? solve_main(p) : solve_second(p);
}

// ---------------------------------------------------------------------------
// four-region table on 0 <= omega <= 2 pi

struct PiecewiseResult {
  AlgebraCoeffs coeffs;
  BranchSolution trace;
  int region = 1;  // 1: x >= 1, 2: 0 <= x < 1, 3: -1 < x < 0, 4: x <= -1
};

/// Region-by-region evaluation with xi obtained from the sinh-ratio equation
/// (asinh) rather than artanh/arcoth. Must agree with solve(CONTINUOUS).
inline PiecewiseResult piecewise_C(double omega, double eta) {
  if (!std::isfinite(omega) || !std::isfinite(eta))
    throw Error(ErrorKind::InvalidArgument, "omega and eta must be finite");
  if (omega < 0.0 || omega > kTwoPi)
    throw Error(ErrorKind::OutOfCanonicalDomain, "piecewise table covers 0 <= omega <= 2 pi");
  if (eta == 0.0) throw Error(ErrorKind::DegenerateEta, "eta = 0: use solve_eta_zero");

  const double s = std::sin(0.5 * omega), c = std::cos(0.5 * omega);
  const double sh = std::sinh(0.5 * eta), ch = std::cosh(0.5 * eta);
  const double x = ch * c;

  PiecewiseResult out;
  BranchSolution& t = out.trace;
  AlgebraCoeffs& k = out.coeffs;
  t.phi = kHalfPi - 0.5 * omega;

  if (x >= 1.0) {
    out.region = 1;
    t.branch = Branch::MAIN;
    t.parametrization = Parametrization::HYPERBOLIC;
    t.a = 2.0 * sign_of(eta) * std::acosh(x);
    const double sa = std::sinh(0.5 * t.a);
    if (sa == 0.0) {
      t.xi = std::copysign(INFINITY, s);
      k.alpha = 2.0 * sh * s;
      k.beta = 2.0 * sh * c;
      k.gamma = 2.0 * ch * s;
    } else {
      t.xi = std::asinh(ch * s / sa);
      k.alpha = t.a * std::cosh(t.xi) * s;
      k.beta = t.a * std::cosh(t.xi) * c;
      k.gamma = t.a * std::sinh(t.xi);
    }
  } else if (omega <= kPi) {
    out.region = 2;
    t.branch = Branch::MAIN;
    t.parametrization = Parametrization::TRIGONOMETRIC;
    t.a = 2.0 * std::acos(x);  // 0 -> pi
    t.xi = std::asinh(sh / std::sin(0.5 * t.a));
    k.alpha = t.a * std::sinh(t.xi) * s;
    k.beta = t.a * std::sinh(t.xi) * c;
    k.gamma = t.a * std::cosh(t.xi);
  } else if (x > -1.0) {
    out.region = 3;
    t.branch = Branch::SECOND;
    t.parametrization = Parametrization::TRIGONOMETRIC;
    t.a = -2.0 * std::acos(-x);  // -pi -> 0
    const double sa = std::sin(0.5 * t.a);
    if (sa == 0.0) {
      t.xi = std::copysign(INFINITY, eta);
      k.alpha = -2.0 * sh * s;
      k.beta = -2.0 * sh * c;
      k.gamma = -2.0 * ch * s;
    } else {
      t.xi = std::asinh(-sh / sa);
      k.alpha = t.a * std::sinh(t.xi) * s;
      k.beta = t.a * std::sinh(t.xi) * c;
      k.gamma = t.a * std::cosh(t.xi);
    }
    k.delta = kHalfPi;
  } else {
    out.region = 4;
    t.branch = Branch::SECOND;
    t.parametrization = Parametrization::HYPERBOLIC;
    t.a = 2.0 * sign_of(eta) * std::acosh(-x);  // 0 -> eta
    const double sa = std::sinh(0.5 * t.a);
    if (sa == 0.0) {
      t.xi = std::copysign(INFINITY, s);
      k.alpha = -2.0 * sh * s;
      k.beta = -2.0 * sh * c;
      k.gamma = -2.0 * ch * s;
    } else {
      t.xi = std::asinh(ch * s / sa);
      k.alpha = -t.a * std::cosh(t.xi) * s;
      k.beta = -t.a * std::cosh(t.xi) * c;
      k.gamma = -t.a * std::sinh(t.xi);
    }
    k.delta = kHalfPi;
  }
  k.branch = t.branch;
  return out;
}

/// Small-t expansion of the main branch at (omega t, eta t), through t^3.
inline AlgebraCoeffs small_t_series(double omega, double eta, double t) {
  if (std::abs(t) * (std::abs(omega) + std::abs(eta)) > 0.5)
    throw Error(ErrorKind::InvalidArgument, "small_t_series needs |t|(|omega|+|eta|) <= 0.5");
  const double t2 = t * t, t3 = t2 * t;
  AlgebraCoeffs c;
  c.alpha = eta * omega * t2 / 2.0;
  c.beta = eta * t - eta * omega * omega * t3 / 12.0;
  c.gamma = omega * t + eta * eta * omega * t3 / 12.0;
  return c;
}

}  // namespace cbch
