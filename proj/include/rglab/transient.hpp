#pragma once

#include <span>
#include <vector>

#include "rglab/polynomial.hpp"
#include "rglab/rates.hpp"

namespace rglab {

// Closed-form solutions of the homogeneous system
//   dDelta_0/dt = -lambda_0 Delta_0
//   dDelta_n/dt = -lambda_n Delta_n + mu_{n-1} Delta_{n-1}
// for Delta_n = P_n - Q_n under a constant reset rate.

/// Constant growth: Delta_n(t) = e^{-lambda t} f_n(mu t).
struct ConstantGrowthTransient {
  double mu = 1.0;
  double lambda = 2.0;  ///< gamma + mu
  std::vector<double> initial_deltas;

  static ConstantGrowthTransient from_rates(double gamma, double mu,
                                            std::vector<double> deltas0);
};

/// f_n(x) = sum_k Delta_{n-k}(0) x^k / k!, x = mu t.
RealPolynomial f_poly(const ConstantGrowthTransient& tr, Index n);
double delta_constant(const ConstantGrowthTransient& tr, Index n, double t);
/// e^{lambda t} dDelta_n/dt as a polynomial in x = mu t.
RealPolynomial stationary_point_poly_constant(const ConstantGrowthTransient& tr,
                                              Index n);

/// alpha_k^n = prod_{m=k}^{n-1} mu_m / prod_{m=k+1}^{n} (lambda_m - lambda_k).
/// Exact binomial coefficients on the lambda_n = gamma + sigma (n + 1) family.
/// Throws ErrorCode::repeated_lambda.
double alpha_coeff(const RateSequence& seq, Index n, Index k);

/// Mode amplitudes C_0..C_n from Delta_0(0)..Delta_n(0).
std::vector<double> c_from_initial(std::span<const double> deltas0,
                                   const RateSequence& seq);
/// Delta_n(0) = sum_k C_k alpha_k^n.
std::vector<double> initial_from_c(std::span<const double> C,
                                   const RateSequence& seq);
/// Delta_n(t) = sum_k C_k alpha_k^n e^{-lambda_k t}, any distinct lambdas.
double delta_general(const RateSequence& seq, std::span<const double> C,
                     Index n, double t);

/// Linear growth mu_n = sigma (n + 1):
/// Delta_n(t) = e^{-(gamma+sigma) t} sum_k C_k binom(n,k) e^{-sigma k t}.
struct LinearGrowthTransient {
  double gamma = 1.0;
  double sigma = 1.0;
  std::vector<double> C;

  static LinearGrowthTransient from_initial(double gamma, double sigma,
                                            std::span<const double> deltas0);
  RateSequence rates() const;
  Index max_index() const { return C.empty() ? 0 : C.size() - 1; }
};

double binomial(Index n, Index k);

double delta_linear(const LinearGrowthTransient& tr, Index n, double t);
/// e^{lambda t} dDelta_n/dt as a polynomial in y = e^{-sigma t}, with
/// lambda = gamma + sigma.
RealPolynomial stationary_point_poly_linear(const LinearGrowthTransient& tr,
                                            Index n);

struct StationaryPoints {
  std::vector<double> times;  ///< ascending, t > 0
  bool degenerate = false;    ///< Delta_n is constant (zero polynomial)
};

StationaryPoints stationary_points_constant(const ConstantGrowthTransient& tr,
                                            Index n);
StationaryPoints stationary_points_linear(const LinearGrowthTransient& tr,
                                          Index n);

}  // namespace rglab
