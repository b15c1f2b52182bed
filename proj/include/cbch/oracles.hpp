#pragma once

// Independent checks of the closed-form exponent:
//  - 2x2 quadrature action and its real logarithm,
//  - truncated number-basis comparison (the only place the central term q is
//    visible beyond a sign),
//  - a logarithm continued along s -> U(s),
//  - the nested-commutator series in coefficient space,
//  - the linear four-vector system and the compact su(2) counterpart.
//
// Convention: SymplecticMatrix2 is the quadrature (Heisenberg) action
// U (x,p)^T U^dagger. Conjugation reverses factor order, so the product
// e^{i omega h_H} e^{i eta h_-} acts as exp(eta G_-) exp(omega G_H).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "cbch/errors.hpp"
#include "cbch/lie_core.hpp"
#include "cbch/solver.hpp"

namespace cbch {

// ---------------------------------------------------------------------------
// 2x2 quadrature representation

inline SymplecticMatrix2 symplectic_product(const ProductParams& p) {
  p.validate();
  return exp2(p.eta * adjoint_generator(GeneratorKind::MINUS)) *
         exp2(p.omega * adjoint_generator(GeneratorKind::H));
}

/// Quadrature image of e^{i delta q}: +-1 for delta a multiple of pi/2.
inline double central_sign(double delta) {
  const double k = delta / kHalfPi;
  if (std::abs(k - std::round(k)) > 1e-9)
    throw Error(ErrorKind::InvalidArgument, "delta must be a multiple of pi/2");
  return (static_cast<long long>(std::llround(k)) % 2 == 0) ? 1.0 : -1.0;
}

/// Quadrature action of e^{i(alpha h_+ + beta h_- + gamma h_H + delta q)}.
inline SymplecticMatrix2 symplectic_exponential(const AlgebraCoeffs& c) {
  return central_sign(c.delta) * exp2(algebra_element(c.alpha, c.beta, c.gamma));
}

inline double verify_coeffs(const ProductParams& p, const AlgebraCoeffs& c) {
  if (!std::isfinite(c.alpha) || !std::isfinite(c.beta) || !std::isfinite(c.gamma) ||
      !std::isfinite(c.delta))
    throw Error(ErrorKind::InvalidArgument, "coefficients must be finite");
  return spectral_norm(symplectic_product(p) - symplectic_exponential(c));
}

enum class LogKind { Real, CentralRequired, MinusIdentity };

struct Sl2Log {
  LogKind kind = LogKind::Real;
  std::array<double, 3> triple{0.0, 0.0, 0.0};  // (alpha, beta, gamma); canonical for MinusIdentity
};

/// Real logarithm of a unimodular 2x2 matrix, mapped to (alpha, beta, gamma).
/// Exists iff tr M > -2 (or M = -I, where 2 pi G_H is returned as the
/// flagged, non-unique representative).
inline Sl2Log matrix_log_sl2(const SymplecticMatrix2& m) {
  if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite matrix entry");
  if (std::abs(m.determinant() - 1.0) > 1e-8)
    throw Error(ErrorKind::NotUnimodular, "det = " + std::to_string(m.determinant()));
  Sl2Log out;
  if ((m + SymplecticMatrix2::Identity()).cwiseAbs().maxCoeff() <= 1e-12) {
    out.kind = LogKind::MinusIdentity;
    out.triple = {0.0, 0.0, kTwoPi};
    return out;
  }
  const double t = 0.5 * m.trace();
  if (t <= -1.0) {
    out.kind = LogKind::CentralRequired;
    return out;
  }
  // (M - tI)^2 = (t^2 - 1) I, so log M = f(t) (M - tI).
  double f;
  if (std::abs(t - 1.0) < 1e-12) {
    f = 1.0 - (t - 1.0) / 3.0;
  } else if (t > 1.0) {
    const double theta = std::acosh(t);
    f = theta / std::sinh(theta);
  } else {
    const double theta = std::acos(t);
    f = theta / std::sin(theta);
  }
  const SymplecticMatrix2 x = f * (m - t * SymplecticMatrix2::Identity());
  const Eigen::Vector3d c = algebra_coordinates(x);
  out.triple = {c(0), c(1), c(2)};
  return out;
}

// ---------------------------------------------------------------------------
// truncated number basis

/// e^{i omega H_H} e^{i eta H_-} with H_H applied as an exact diagonal phase.
inline ComplexMatrix fock_product(const ProductParams& p, const FockGenerators& g) {
  const int d = g.dim();
  ComplexVector phase(d);
  for (int n = 0; n < d; ++n) phase(n) = std::polar(1.0, p.omega * (2.0 * n + 1.0) / 4.0);
  return phase.asDiagonal() * exp_i_hermitian(p.eta * g.minus);
}

inline ComplexMatrix fock_hamiltonian(const AlgebraCoeffs& c, const FockGenerators& g) {
  return c.alpha * g.plus + c.beta * g.minus + c.gamma * g.h + c.delta * g.q;
}

inline ComplexMatrix fock_exponential(const AlgebraCoeffs& c, const FockGenerators& g) {
  return exp_i_hermitian(fock_hamiltonian(c, g));
}

namespace detail {

inline double tail_norm(const ComplexVector& v, int from) {
  return v.tail(v.size() - from).norm();
}

}  // namespace detail

/// Amplitude pushed above n = D-4 when starting from |n_max>: by the product
/// itself and along the exponent path e^{i s h}, s = 1/8 .. 1.
inline double leakage_estimate(const ProductParams& p, const AlgebraCoeffs& c,
                               const FockGenerators& g, int n_max) {
  const int d = g.dim();
  const int from = std::max(0, d - 4);
  ComplexVector seed = ComplexVector::Zero(d);
  seed(std::min(n_max, d - 1)) = 1.0;

  double leak = detail::tail_norm(fock_product(p, g) * seed, from);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(fock_hamiltonian(c, g));
  const ComplexVector seed_eig = es.eigenvectors().adjoint() * seed;
  for (int k = 1; k <= 8; ++k) {
    const double s = k / 8.0;
    const ComplexVector phases = (Complex(0.0, s) * es.eigenvalues().cast<Complex>()).array().exp();
    const ComplexVector state = es.eigenvectors() * phases.cwiseProduct(seed_eig);
    leak = std::max(leak, detail::tail_norm(state, from));
  }
  return leak;
}

enum class FockInputs { ALL, EVEN, ODD };

/// || (e^{i omega H_H} e^{i eta H_-} - e^{i(alpha H_+ + beta H_- + gamma H_H + delta Q)}) P ||
/// with P projecting onto n <= n_max (optionally one parity only).
inline double fock_verify(const ProductParams& p, const AlgebraCoeffs& c, const FockConfig& cfg,
                          FockInputs inputs = FockInputs::ALL) {
  cfg.validate();
  p.validate();
  if (!std::isfinite(c.alpha) || !std::isfinite(c.beta) || !std::isfinite(c.gamma) ||
      !std::isfinite(c.delta))
    throw Error(ErrorKind::InvalidArgument, "coefficients must be finite");
  const FockGenerators g(cfg.dim);
  const double leak = leakage_estimate(p, c, g, cfg.n_max);
  if (leak > cfg.tol)
    throw Error(ErrorKind::TruncationUnreliable,
                "amplitude " + std::to_string(leak) + " above n = D-4; raise the Fock dimension");

  const ComplexMatrix diff = fock_product(p, g) - fock_exponential(c, g);
  ComplexMatrix cols = diff.leftCols(cfg.n_max + 1);
  for (int n = 0; n <= cfg.n_max; ++n) {
    const bool odd = n % 2 == 1;
    if ((inputs == FockInputs::EVEN && odd) || (inputs == FockInputs::ODD && !odd))
      cols.col(n).setZero();
  }
  return spectral_norm(cols);
}

/// max | e^{2 pi i H_H} - e^{i pi Q / 2} | entrywise.
inline double parity_identity_check(const FockConfig& cfg) {
  if (cfg.dim < 2) throw Error(ErrorKind::InvalidArgument, "Fock dimension must be >= 2");
  const ComplexMatrix h = fock_generator(GeneratorKind::H, cfg.dim).entries;
  const ComplexMatrix q = fock_generator(GeneratorKind::Q, cfg.dim).entries;
  const Complex i(0.0, 1.0);
  const ComplexMatrix lhs = mat_exp(ComplexMatrix(i * kTwoPi * h));
  const ComplexMatrix rhs = mat_exp(ComplexMatrix(i * kHalfPi * q));
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// logarithm continued along the path

struct PathSample {
  double s = 0.0;
  std::array<double, 3> triple{0.0, 0.0, 0.0};
};

struct PathLogResult {
  std::array<double, 3> coeffs{0.0, 0.0, 0.0};
  int central_count = 0;
  std::vector<PathSample> samples;
};

/// Walks U(s) = exp(s eta G_-) exp(s omega G_H), s in [0, 1], composing the
/// small incremental logarithms of U(s_k) U(s_{k-1})^{-1}. The central count
/// k moves by one each time tr U(s) changes sign (the point where the
/// shorter exponent switches sheet), and U(1) = (-I)^k exp(triple).
inline PathLogResult path_continued_log(const ProductParams& p, int steps = 200,
                                        int max_halvings = 20) {
  p.validate();
  if (steps < 100) throw Error(ErrorKind::InvalidArgument, "path_continued_log needs steps >= 100");
  const SymplecticMatrix2 g_minus = adjoint_generator(GeneratorKind::MINUS);
  const SymplecticMatrix2 g_h = adjoint_generator(GeneratorKind::H);
  auto path = [&](double s) -> SymplecticMatrix2 {
    return exp2(s * p.eta * g_minus) * exp2(s * p.omega * g_h);
  };

  PathLogResult out;
  SymplecticMatrix2 w = SymplecticMatrix2::Identity();
  double last_trace = 2.0;
  out.samples.push_back({0.0, {0.0, 0.0, 0.0}});

  auto record = [&](double s) {
    const double tr = w.trace();
    if (last_trace >= 0.0 && tr < 0.0) ++out.central_count;
    if (last_trace < 0.0 && tr >= 0.0) --out.central_count;
    last_trace = tr;
    const SymplecticMatrix2 sheet = (out.central_count % 2 != 0) ? SymplecticMatrix2(-w) : w;
    const Sl2Log lg = matrix_log_sl2(sheet);
    if (lg.kind != LogKind::Real)
      throw Error(ErrorKind::StepTooCoarse, "path left the principal sheet between samples");
    out.samples.push_back({s, lg.triple});
  };

  std::function<void(double, double, int)> advance = [&](double s0, double s1, int depth) {
    const SymplecticMatrix2 inc = path(s1) * path(s0).inverse();
    const Sl2Log lg = matrix_log_sl2(inc);
    double size = INFINITY;
    SymplecticMatrix2 y = SymplecticMatrix2::Zero();
    if (lg.kind == LogKind::Real) {
      y = algebra_element(lg.triple[0], lg.triple[1], lg.triple[2]);
      size = std::sqrt(std::abs(y.determinant()));
    }
    if (size > kPi / 4.0 && depth < max_halvings) {
      const double mid = 0.5 * (s0 + s1);
      advance(s0, mid, depth + 1);
      advance(mid, s1, depth + 1);
      return;
    }
    if (size > kHalfPi)
      throw Error(ErrorKind::StepTooCoarse, "incremental rotation " + std::to_string(size) + " > pi/2");
    w = exp2(y) * w;
    record(s1);
  };

  for (int k = 1; k <= steps; ++k) advance(double(k - 1) / steps, double(k) / steps, 0);
  out.coeffs = out.samples.back().triple;
  return out;
}

// ---------------------------------------------------------------------------
// nested-commutator series in coefficient space

/// Bracket of X = sum u_K (i h_K) in the basis (i h_+, i h_-, i h_H):
///   [i h_+, i h_H] = i h_-,  [i h_H, i h_-] = i h_+,  [i h_-, i h_+] = -i h_H.
inline std::array<double, 3> algebra_bracket(const std::array<double, 3>& u,
                                             const std::array<double, 3>& v) {
  return {-(u[1] * v[2] - u[2] * v[1]), u[0] * v[2] - u[2] * v[0], u[0] * v[1] - u[1] * v[0]};
}

/// log(e^A e^B) with A = i omega h_H, B = i eta h_- through the given order
/// (2..4). The result never has a q component.
inline std::array<double, 3> bch_series_coeffs(const ProductParams& p, int order) {
  if (order < 2 || order > 4) throw Error(ErrorKind::InvalidArgument, "BCH order must be 2..4");
  const std::array<double, 3> a{0.0, 0.0, p.omega};
  const std::array<double, 3> b{0.0, p.eta, 0.0};
  auto axpy = [](std::array<double, 3>& acc, double s, const std::array<double, 3>& v) {
    for (int i = 0; i < 3; ++i) acc[i] += s * v[i];
  };
  std::array<double, 3> c{0.0, 0.0, 0.0};
  axpy(c, 1.0, a);
  axpy(c, 1.0, b);
  const auto ab = algebra_bracket(a, b);
  axpy(c, 0.5, ab);
  if (order >= 3) {
    axpy(c, 1.0 / 12.0, algebra_bracket(a, ab));
    axpy(c, 1.0 / 12.0, algebra_bracket(b, algebra_bracket(b, a)));
  }
  if (order >= 4) axpy(c, -1.0 / 24.0, algebra_bracket(b, algebra_bracket(a, ab)));
  return c;
}

// ---------------------------------------------------------------------------
// four-vector system

using FourVector = Eigen::Vector4d;

/// (sinh(a/2)cosh xi cos phi, sinh(a/2)cosh xi sin phi, sinh(a/2)sinh xi, cosh(a/2)),
/// continued through a = i a~, xi = xi~ - i pi/2 for the trigonometric form.
inline FourVector four_vector(const BranchSolution& b) {
  double shch, shsh, ch;
  if (b.parametrization == Parametrization::HYPERBOLIC) {
    shch = std::sinh(0.5 * b.a) * std::cosh(b.xi);
    shsh = std::sinh(0.5 * b.a) * std::sinh(b.xi);
    ch = std::cosh(0.5 * b.a);
  } else {
    shch = std::sin(0.5 * b.a) * std::sinh(b.xi);
    shsh = std::sin(0.5 * b.a) * std::cosh(b.xi);
    ch = std::cos(0.5 * b.a);
  }
  return {shch * std::cos(b.phi), shch * std::sin(b.phi), shsh, ch};
}

/// The 4x4 generator of the linear system satisfied by four_vector.
inline Eigen::Matrix4d four_vector_generator(double omega, double eta) {
  const double w = 0.5 * omega, e = 0.5 * eta;
  Eigen::Matrix4d m;
  m << 0.0, w, e, 0.0,
       -w, 0.0, 0.0, e,
       e, 0.0, 0.0, w,
       0.0, e, -w, 0.0;
  return m;
}

/// e^{Mt}: the two blocks commute, so it factors into a rotation by omega t/2
/// tensored with a boost by eta t/2.
inline Eigen::Matrix4d four_vector_propagator(double omega, double eta, double t) {
  const double c = std::cos(0.5 * omega * t), s = std::sin(0.5 * omega * t);
  const double ch = std::cosh(0.5 * eta * t), sh = std::sinh(0.5 * eta * t);
  Eigen::Matrix2d rot, boost;
  rot << c, s, -s, c;
  boost << ch, sh, sh, ch;
  Eigen::Matrix4d e;
  e << boost(0, 0) * rot, boost(0, 1) * rot,
       boost(1, 0) * rot, boost(1, 1) * rot;
  return e;
}

/// || four_vector(main branch at (omega t, eta t)) - e^{Mt} e_4 ||.
inline double four_vector_check(double omega, double eta, double t) {
  if (!std::isfinite(omega) || !std::isfinite(eta) || !std::isfinite(t))
    throw Error(ErrorKind::InvalidArgument, "omega, eta and t must be finite");
  const FourVector column = four_vector_propagator(omega, eta, t).col(3);
  FourVector closed;
  if (eta * t == 0.0) {
    // xi~ -> infinity limit: only the rotation survives.
    closed << 0.0, 0.0, std::sin(0.5 * omega * t), std::cos(0.5 * omega * t);
  } else {
    closed = four_vector(solve_main_traced({omega * t, eta * t}).trace);
  }
  return (closed - column).norm();
}

// ---------------------------------------------------------------------------
// compact counterpart: e^{i omega J_z} e^{i eta J_y} = e^{i a n.J}

struct Su2Solution {
  double a = 0.0;
  double xi = 0.0;
  double phi = 0.0;
};

/// sin(a/2)cos(xi) = sin(eta/2), sin(a/2)sin(xi) = cos(eta/2)sin(omega/2),
/// cos(a/2) = cos(eta/2)cos(omega/2); real for every real input.
inline Su2Solution su2_solve(double omega, double eta) {
  if (!std::isfinite(omega) || !std::isfinite(eta))
    throw Error(ErrorKind::InvalidArgument, "omega and eta must be finite");
  Su2Solution s;
  const double c = std::clamp(std::cos(0.5 * eta) * std::cos(0.5 * omega), -1.0, 1.0);
  s.a = 2.0 * std::acos(c);
  s.xi = std::atan2(std::cos(0.5 * eta) * std::sin(0.5 * omega), std::sin(0.5 * eta));
  s.phi = kHalfPi - 0.5 * omega;
  return s;
}

/// Rotation axis of the su(2) exponent in the (J_x, J_y, J_z) basis.
inline Eigen::Vector3d su2_axis(const Su2Solution& s) {
  // (e_1 sin(phi) + e_2 cos(phi)) = (sin(omega/2), cos(omega/2), 0) at t = 1.
  return {std::cos(s.xi) * std::cos(s.phi), std::cos(s.xi) * std::sin(s.phi), std::sin(s.xi)};
}

}  // namespace cbch
