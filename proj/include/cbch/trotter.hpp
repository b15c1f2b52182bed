#pragma once

// First-order Trotter product of the three algebra pieces of a solved
// exponent, with the central term left out:
//   (e^{i alpha h_+/N} e^{i beta h_-/N} e^{i gamma h_H/N})^N.
// For a second-branch exponent this converges to e^{-i delta q} times the
// product, i.e. to minus the product in the quadrature picture.

#include <cmath>
#include <limits>
#include <vector>

#include "cbch/errors.hpp"
#include "cbch/lie_core.hpp"
#include "cbch/oracles.hpp"
#include "cbch/solver.hpp"

namespace cbch {

struct TrotterRecord {
  int n_steps = 1;
  double error_abs = 0.0;
  double error_rel = 0.0;
};

namespace detail {

inline void require_steps(int n_steps) {
  if (n_steps < 1) throw Error(ErrorKind::InvalidArgument, "Trotter step count must be >= 1");
}

inline void require_finite(const AlgebraCoeffs& c) {
  if (!std::isfinite(c.alpha) || !std::isfinite(c.beta) || !std::isfinite(c.gamma) ||
      !std::isfinite(c.delta))
    throw Error(ErrorKind::InvalidArgument, "coefficients must be finite");
}

}  // namespace detail

/// Quadrature action of the Trotter product. Conjugation reverses the order
/// of the operator factors, so one step is exp(gamma G_H/N) exp(beta G_-/N) exp(alpha G_+/N).
inline SymplecticMatrix2 trotter_matrix(const AlgebraCoeffs& c, int n_steps) {
  detail::require_steps(n_steps);
  detail::require_finite(c);
  const double inv = 1.0 / n_steps;
  const SymplecticMatrix2 step = exp2(c.gamma * inv * adjoint_generator(GeneratorKind::H)) *
                                 exp2(c.beta * inv * adjoint_generator(GeneratorKind::MINUS)) *
                                 exp2(c.alpha * inv * adjoint_generator(GeneratorKind::PLUS));
  SymplecticMatrix2 out = SymplecticMatrix2::Identity();
  for (int k = 0; k < n_steps; ++k) out = step * out;
  return out;
}

/// What the delta-free Trotter product should converge to: cos(2 delta) times
/// the product (-1 on the second branch).
inline SymplecticMatrix2 trotter_target(const ProductParams& p, const AlgebraCoeffs& c) {
  return central_sign(c.delta) * symplectic_product(p);
}

inline TrotterRecord trotter_error(const ProductParams& p, int n_steps,
                                   BranchPolicy policy = BranchPolicy::FORCE_SECOND) {
  detail::require_steps(n_steps);
  const AlgebraCoeffs c = solve(p, policy);
  const SymplecticMatrix2 target = trotter_target(p, c);
  TrotterRecord r;
  r.n_steps = n_steps;
  r.error_abs = spectral_norm(trotter_matrix(c, n_steps) - target);
  r.error_rel = r.error_abs / spectral_norm(target);
  return r;
}

// ---------------------------------------------------------------------------
// number-basis version

inline ComplexMatrix fock_trotter_product(const AlgebraCoeffs& c, int n_steps, const FockGenerators& g) {
  detail::require_steps(n_steps);
  detail::require_finite(c);
  const double inv = 1.0 / n_steps;
  const ComplexMatrix step = exp_i_hermitian(c.alpha * inv * g.plus) *
                             exp_i_hermitian(c.beta * inv * g.minus) *
                             exp_i_hermitian(c.gamma * inv * g.h);
  ComplexMatrix out = ComplexMatrix::Identity(g.dim(), g.dim());
  for (int k = 0; k < n_steps; ++k) out = out * step;
  return out;
}

/// Trotter error restricted to inputs n <= n_block, against e^{-i delta Q}
/// e^{i omega H_H} e^{i eta H_-}.
inline TrotterRecord fock_trotter_error(const ProductParams& p, int n_steps, const FockConfig& cfg,
                                        int n_block,
                                        BranchPolicy policy = BranchPolicy::FORCE_SECOND) {
  cfg.validate();
  if (n_block < 0 || n_block > cfg.n_max)
    throw Error(ErrorKind::InvalidArgument, "block size must lie in 0..n_max");
  const AlgebraCoeffs c = solve(p, policy);
  const FockGenerators g(cfg.dim);
  const double leak = leakage_estimate(p, c, g, n_block);
  if (leak > cfg.tol)
    throw Error(ErrorKind::TruncationUnreliable, "amplitude " + std::to_string(leak) + " above n = D-4");

  ComplexVector central(cfg.dim);
  for (int n = 0; n < cfg.dim; ++n) central(n) = std::polar(1.0, -c.delta * (1.0 + 2.0 * (n % 2)));
  const ComplexMatrix target = central.asDiagonal() * fock_product(p, g);
  const ComplexMatrix diff = fock_trotter_product(c, n_steps, g) - target;

  TrotterRecord r;
  r.n_steps = n_steps;
  r.error_abs = spectral_norm(diff.leftCols(n_block + 1));
  r.error_rel = r.error_abs / spectral_norm(target.leftCols(n_block + 1));
  return r;
}

// ---------------------------------------------------------------------------
// scaling law

struct ScalingReport {
  std::vector<TrotterRecord> records;
  double slope = std::numeric_limits<double>::quiet_NaN();
  bool degenerate = false;  // some error is zero to roundoff: no log-log fit
};

/// Least-squares slope of log(error_abs) against log(N).
inline ScalingReport scaling_report(const ProductParams& p, const std::vector<int>& ns,
                                    BranchPolicy policy = BranchPolicy::FORCE_SECOND) {
  if (ns.size() < 3) throw Error(ErrorKind::InvalidArgument, "scaling_report needs at least 3 step counts");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    detail::require_steps(ns[i]);
    if (i > 0 && ns[i] <= ns[i - 1])
      throw Error(ErrorKind::InvalidArgument, "step counts must be strictly increasing");
  }
  ScalingReport rep;
  for (int n : ns) rep.records.push_back(trotter_error(p, n, policy));

  for (const auto& r : rep.records)
    if (r.error_abs <= 1e-13) rep.degenerate = true;
  if (rep.degenerate) return rep;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(rep.records.size());
  for (const auto& r : rep.records) {
    const double lx = std::log(static_cast<double>(r.n_steps));
    const double ly = std::log(r.error_abs);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return rep;
}

}  // namespace cbch
