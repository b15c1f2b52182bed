#pragma once

// Generators of sp(2,R) in the 2x2 quadrature representation and in a
// truncated number basis, plus the dense matrix-function helpers the rest of
// the library is built on.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include "cbch/errors.hpp"

namespace cbch {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

/// Real 2x2 matrix acting on the quadrature column (x, p).
using SymplecticMatrix2 = Eigen::Matrix2d;

enum class GeneratorKind { PLUS, MINUS, H, Q, NUMBER, PARITY_ODD_PROJECTOR };

constexpr std::string_view generator_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::PLUS: return "h+";
    case GeneratorKind::MINUS: return "h-";
    case GeneratorKind::H: return "hH";
    case GeneratorKind::Q: return "q";
    case GeneratorKind::NUMBER: return "n";
    case GeneratorKind::PARITY_ODD_PROJECTOR: return "P_odd";
  }
  return "?";
}

constexpr bool is_algebra_generator(GeneratorKind kind) {
  return kind == GeneratorKind::PLUS || kind == GeneratorKind::MINUS || kind == GeneratorKind::H;
}

struct FockOperatorMatrix {
  ComplexMatrix entries;
  std::string role;

  int dim() const { return static_cast<int>(entries.rows()); }
};

/// Truncation parameters for the number-basis representation.
struct FockConfig {
  int dim = 64;      // D: basis states |0> .. |D-1>
  int n_max = 12;    // verification block n <= n_max
  double tol = 1e-6;

  void validate() const {
    if (dim < 2 || dim % 2 != 0)
      throw Error(ErrorKind::InvalidArgument, "Fock dimension must be even and >= 2");
    if (n_max < 0 || dim < n_max + 8)
      throw Error(ErrorKind::InvalidArgument, "Fock dimension must be >= n_max + 8");
    if (!(tol > 0.0))
      throw Error(ErrorKind::InvalidArgument, "Fock tolerance must be positive");
  }
};

// ---------------------------------------------------------------------------
// 2x2 quadrature representation

/// Generator G with e^{it h_K} (x, p)^T e^{-it h_K} = e^{tG} (x, p)^T.
///   G_PLUS = -sigma_1/2,  G_MINUS = -sigma_3/2,  G_H = i sigma_2/2.
inline SymplecticMatrix2 adjoint_generator(GeneratorKind kind) {
  SymplecticMatrix2 g;
  switch (kind) {
    case GeneratorKind::PLUS:
      g << 0.0, -0.5, -0.5, 0.0;
      return g;
    case GeneratorKind::MINUS:
      g << -0.5, 0.0, 0.0, 0.5;
      return g;
    case GeneratorKind::H:
      g << 0.0, 0.5, -0.5, 0.0;
      return g;
    default:
      throw Error(ErrorKind::InvalidArgument,
                  std::string("no 2x2 adjoint image for generator ") +
                      std::string(generator_name(kind)));
  }
}

/// alpha*G_PLUS + beta*G_MINUS + gamma*G_H.
inline SymplecticMatrix2 algebra_element(double alpha, double beta, double gamma) {
  SymplecticMatrix2 g;
  g << -0.5 * beta, 0.5 * (gamma - alpha), -0.5 * (alpha + gamma), 0.5 * beta;
  return g;
}

/// Inverse of algebra_element on the traceless part of m.
inline Eigen::Vector3d algebra_coordinates(const SymplecticMatrix2& m) {
  return {-(m(0, 1) + m(1, 0)), m(1, 1) - m(0, 0), m(0, 1) - m(1, 0)};
}

/// Closed-form exponential of a real 2x2 matrix (Cayley-Hamilton on the
/// traceless part).
inline SymplecticMatrix2 exp2(const SymplecticMatrix2& m) {
  if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite matrix entry");
  const double half_trace = 0.5 * m.trace();
  const SymplecticMatrix2 x = m - half_trace * SymplecticMatrix2::Identity();
  // x^2 = d * I
  const double d = -x.determinant();
  double c = 1.0;
  double s = 1.0;
  if (std::abs(d) < 1e-10) {
    c = 1.0 + d / 2.0 + d * d / 24.0;
    s = 1.0 + d / 6.0 + d * d / 120.0;
  } else if (d > 0.0) {
    const double theta = std::sqrt(d);
    if (theta > 700.0) throw Error(ErrorKind::Overflow, "2x2 exponent out of range");
    c = std::cosh(theta);
    s = std::sinh(theta) / theta;
  } else {
    const double theta = std::sqrt(-d);
    c = std::cos(theta);
    s = std::sin(theta) / theta;
  }
  if (std::abs(half_trace) > 700.0) throw Error(ErrorKind::Overflow, "2x2 exponent out of range");
  return std::exp(half_trace) * (c * SymplecticMatrix2::Identity() + s * x);
}

// ---------------------------------------------------------------------------
// dense matrix functions

template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  return svd.singularValues()(0);
}

namespace detail {

inline bool is_anti_hermitian(const ComplexMatrix& m) {
  return (m + m.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff());
}

inline bool is_hermitian(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff());
}

}  // namespace detail

/// e^{iH} for Hermitian H via its eigendecomposition; the result is unitary
/// to roundoff regardless of the size of H.
inline ComplexMatrix exp_i_hermitian(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::InvalidArgument, "eigendecomposition failed");
  const ComplexVector phases = (Complex(0.0, 1.0) * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Matrix exponential. Anti-Hermitian and Hermitian inputs are diagonalized,
/// everything else goes through scaling-and-squaring Pade.
inline ComplexMatrix mat_exp(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "mat_exp needs a square matrix");
  if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite matrix entry");
  if (m.size() == 0) return m;
  if (detail::is_anti_hermitian(m)) {
    const ComplexMatrix h = Complex(0.0, -1.0) * m;
    return exp_i_hermitian(0.5 * (h + h.adjoint()));
  }
  if (detail::is_hermitian(m)) {
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.eigenvalues().maxCoeff() > 700.0)
      throw Error(ErrorKind::Overflow, "exponent out of double range");
    const ComplexVector e = es.eigenvalues().array().exp().cast<Complex>();
    return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
  }
  if (m.cwiseAbs().colwise().sum().maxCoeff() > 700.0)
    throw Error(ErrorKind::Overflow, "exponent out of double range");
  return m.exp();
}

inline RealMatrix mat_exp(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "mat_exp needs a square matrix");
  if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite matrix entry");
  if (m.cwiseAbs().colwise().sum().maxCoeff() > 700.0)
    throw Error(ErrorKind::Overflow, "exponent out of double range");
  return m.exp();
}

// ---------------------------------------------------------------------------
// truncated number basis

/// Number-basis matrix of a generator, truncated to |0> .. |dim-1>.
inline FockOperatorMatrix fock_generator(GeneratorKind kind, int dim) {
  if (dim < 2) throw Error(ErrorKind::InvalidArgument, "Fock dimension must be >= 2");
  FockOperatorMatrix out{ComplexMatrix::Zero(dim, dim), std::string(generator_name(kind))};
  ComplexMatrix& m = out.entries;
  for (int n = 0; n < dim; ++n) {
    const double nd = n;
    switch (kind) {
      case GeneratorKind::H: m(n, n) = (2.0 * nd + 1.0) / 4.0; break;
      case GeneratorKind::Q: m(n, n) = 1.0 + 2.0 * (n % 2); break;
      case GeneratorKind::NUMBER: m(n, n) = nd; break;
      case GeneratorKind::PARITY_ODD_PROJECTOR: m(n, n) = (n % 2); break;
      case GeneratorKind::PLUS:
      case GeneratorKind::MINUS: {
        if (n + 2 >= dim) break;
        const double amp = std::sqrt((nd + 1.0) * (nd + 2.0)) / 4.0;
        if (kind == GeneratorKind::PLUS) {
          m(n + 2, n) = amp;
          m(n, n + 2) = amp;
        } else {
          m(n + 2, n) = Complex(0.0, -amp);
          m(n, n + 2) = Complex(0.0, amp);
        }
        break;
      }
    }
  }
  return out;
}

/// Projector onto the block n <= n_max (clamped to the truncation).
inline ComplexMatrix block_projector(int dim, int n_max) {
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n <= std::min(n_max, dim - 1); ++n) p(n, n) = 1.0;
  return p;
}

/// The three generators in one place; the Fock checks use all of them.
struct FockGenerators {
  ComplexMatrix plus, minus, h, q;

  explicit FockGenerators(int dim)
      : plus(fock_generator(GeneratorKind::PLUS, dim).entries),
        minus(fock_generator(GeneratorKind::MINUS, dim).entries),
        h(fock_generator(GeneratorKind::H, dim).entries),
        q(fock_generator(GeneratorKind::Q, dim).entries) {}

  int dim() const { return static_cast<int>(h.rows()); }
};

/// Max spectral norm of the residuals [h+,hH]+ih-, [hH,h-]+ih+, [h-,h+]-ihH.
/// With interior_only the residuals are restricted to n <= D-4, the block
/// where truncation cannot enter the products.
inline double commutator_table_check(const FockConfig& cfg, bool interior_only = true) {
  const FockGenerators g(cfg.dim);
  const Complex i(0.0, 1.0);
  auto comm = [](const ComplexMatrix& a, const ComplexMatrix& b) -> ComplexMatrix {
    return a * b - b * a;
  };
  const ComplexMatrix r1 = comm(g.plus, g.h) + i * g.minus;
  const ComplexMatrix r2 = comm(g.h, g.minus) + i * g.plus;
  const ComplexMatrix r3 = comm(g.minus, g.plus) - i * g.h;
  auto restrict_norm = [&](const ComplexMatrix& r) {
    if (!interior_only) return spectral_norm(r);
    const int keep = cfg.dim - 3;  // n = 0 .. D-4
    if (keep <= 0) return 0.0;
    return spectral_norm(r.topLeftCorner(keep, keep));
  };
  return std::max({restrict_norm(r1), restrict_norm(r2), restrict_norm(r3)});
}

}  // namespace cbch
