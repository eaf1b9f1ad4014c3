#pragma once

#include <limits>
#include <span>
#include <vector>

namespace rglab {

/// Real polynomial in the monomial basis: sum_k c_k x^k.
class RealPolynomial {
 public:
  RealPolynomial() = default;
  explicit RealPolynomial(std::vector<double> coefficients);

  /// Degree after trimming exact-zero leading coefficients; -1 for zero.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  std::span<const double> coefficients() const noexcept { return c_; }

  double operator()(double x) const noexcept;  // Horner
  /// sum_k |c_k| |x|^k, the rounding scale of an evaluation at x.
  double magnitude(double x) const noexcept;
  RealPolynomial derivative() const;

  static RealPolynomial from_roots(std::span<const double> roots,
                                   double leading = 1.0);

 private:
  std::vector<double> c_;
};

struct Root {
  double value;
  int multiplicity;
};

struct RootOptions {
  double tol = 1e-10;  ///< accepted |p(x)| relative to magnitude(x)
  /// A finite endpoint e with |p(e)| below this (relative) is treated as a
  /// root and divided out, repeatedly, before the interior search. Rounding
  /// would otherwise scatter a multiple endpoint root into the interval.
  double endpoint_tol = 1e-8;
};

/// Real roots in the open interval (lo, hi), ascending, clustered roots
/// collapsed with a multiplicity. Companion-matrix eigenvalues polished by
/// Newton steps; a sign-change bisection scan is used if the eigen solve
/// fails. Throws ErrorCode::degenerate for the zero polynomial.
std::vector<Root> real_roots(const RealPolynomial& p, double lo,
                             double hi = std::numeric_limits<double>::infinity(),
                             RootOptions opts = {});

/// Roots found by scanning for sign changes on a grid and bisecting; misses
/// even-multiplicity roots. Exposed for cross-checks.
std::vector<double> sign_change_roots(const RealPolynomial& p, double lo,
                                      double hi, int grid = 4096);

}  // namespace rglab
