#pragma once

// Overlap between the exact two-gate product and the Trotterized exponent
// without its central term. The leftover is e^{i delta Q} restricted to each
// number state, so even and odd inputs pick up phases that differ by pi.

#include <algorithm>
#include <complex>
#include <vector>

#include "cbch/errors.hpp"
#include "cbch/lie_core.hpp"
#include "cbch/oracles.hpp"
#include "cbch/solver.hpp"
#include "cbch/trotter.hpp"

namespace cbch {

struct ParitySignature {
  int n = 0;
  Complex phase{1.0, 0.0};  // unit modulus
  double visibility = 0.0;  // in [0, 1]
};

namespace detail {

/// U_trot^dagger U_ref for the second-branch exponent at p.
inline ComplexMatrix parity_overlap_matrix(const ProductParams& p, int n_steps, const FockConfig& cfg,
                                           int n_seed) {
  cfg.validate();
  const AlgebraCoeffs c = solve_second(p);
  const FockGenerators g(cfg.dim);
  const double leak = leakage_estimate(p, c, g, n_seed);
  if (leak > cfg.tol)
    throw Error(ErrorKind::TruncationUnreliable,
                "amplitude " + std::to_string(leak) + " above n = D-4; raise the Fock dimension");
  return fock_trotter_product(c, n_steps, g).adjoint() * fock_product(p, g);
}

inline ParitySignature read_signature(const ComplexMatrix& overlap, int n) {
  const Complex amp = overlap(n, n);
  ParitySignature s;
  s.n = n;
  s.visibility = std::min(1.0, std::abs(amp));
  s.phase = std::abs(amp) > 0.0 ? amp / std::abs(amp) : Complex(1.0, 0.0);
  return s;
}

inline void require_index(int n, const FockConfig& cfg) {
  if (n < 0 || n > cfg.n_max)
    throw Error(ErrorKind::InvalidArgument, "Fock index must lie in 0..n_max");
}

}  // namespace detail

/// <n| U_trot^dagger U_ref |n>, split into a unit phase and its modulus.
inline ParitySignature signature(const ProductParams& p, int n_steps, int n, const FockConfig& cfg) {
  detail::require_index(n, cfg);
  return detail::read_signature(detail::parity_overlap_matrix(p, n_steps, cfg, n), n);
}

/// Same as signature() for several n, sorted by n, sharing one overlap matrix.
inline std::vector<ParitySignature> signature_sweep(const ProductParams& p, int n_steps,
                                                    std::vector<int> n_list, const FockConfig& cfg) {
  std::vector<ParitySignature> out;
  if (n_list.empty()) return out;
  for (int n : n_list) detail::require_index(n, cfg);
  std::sort(n_list.begin(), n_list.end());
  const ComplexMatrix overlap = detail::parity_overlap_matrix(p, n_steps, cfg, n_list.back());
  out.reserve(n_list.size());
  for (int n : n_list) out.push_back(detail::read_signature(overlap, n));
  return out;
}

}  // namespace cbch
