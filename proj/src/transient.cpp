#include "rglab/transient.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "rglab/error.hpp"
#include "rglab/numeric.hpp"

namespace rglab {

namespace {

constexpr double kRepeatedLambdaTol = 1e-12;
// A difference that is this small relative to its two terms is rounding
// noise of data that satisfies the stationary recurrence exactly.
constexpr double kCancellationTol = 1e-12;
constexpr Index kConditioningWarnAbove = 25;

void require_distinct_lambdas(const RateSequence& seq, Index n) {
  if (is_binomial_family(seq)) return;
  std::vector<double> lam(n + 1);
  for (Index m = 0; m <= n; ++m) lam[m] = seq.lambda_at(m);
  for (Index i = 0; i <= n; ++i)
    for (Index j = i + 1; j <= n; ++j)
      if (std::abs(lam[i] - lam[j]) <=
          kRepeatedLambdaTol * std::max(std::abs(lam[i]), std::abs(lam[j])))
        throw Error(ErrorCode::repeated_lambda,
                    "lambda_" + std::to_string(i) + " and lambda_" +
                        std::to_string(j) + " coincide");
}

}  // namespace

ConstantGrowthTransient ConstantGrowthTransient::from_rates(
    double gamma, double mu, std::vector<double> deltas0) {
  if (!(gamma > 0.0) || !(mu > 0.0))
    throw Error(ErrorCode::invalid_argument, "rates must be positive");
  return {mu, gamma + mu, std::move(deltas0)};
}

RealPolynomial f_poly(const ConstantGrowthTransient& tr, Index n) {
  if (n >= tr.initial_deltas.size())
    throw Error(ErrorCode::index_out_of_range,
                "f_n needs Delta_0(0)..Delta_n(0)");
  std::vector<double> c(n + 1);
  double inv_fact = 1.0;
  for (Index k = 0; k <= n; ++k) {
    if (k > 0) inv_fact /= static_cast<double>(k);
    c[k] = tr.initial_deltas[n - k] * inv_fact;
  }
  return RealPolynomial(std::move(c));
}

double delta_constant(const ConstantGrowthTransient& tr, Index n, double t) {
  return std::exp(-tr.lambda * t) * f_poly(tr, n)(tr.mu * t);
}

RealPolynomial stationary_point_poly_constant(const ConstantGrowthTransient& tr,
                                              Index n) {
  if (n >= tr.initial_deltas.size())
    throw Error(ErrorCode::index_out_of_range,
                "stationary-point polynomial needs Delta_0(0)..Delta_n(0)");
  const auto& d = tr.initial_deltas;
  std::vector<double> c(n + 1);
  double inv_fact = 1.0;
  for (Index k = 0; k < n; ++k) {
    if (k > 0) inv_fact /= static_cast<double>(k);
    const double a = tr.mu * d[n - k - 1];
    const double b = tr.lambda * d[n - k];
    double diff = a - b;
    if (std::abs(diff) <= kCancellationTol * (std::abs(a) + std::abs(b)))
      diff = 0.0;
    c[k] = diff * inv_fact;
  }
  if (n > 0) inv_fact /= static_cast<double>(n);
  c[n] = -tr.lambda * d[0] * inv_fact;
  return RealPolynomial(std::move(c));
}

double binomial(Index n, Index k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 62) {
    std::uint64_t b = 1;
    for (Index i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return static_cast<double>(b);
  }
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                             std::lgamma(n - k + 1.0)));
}

double alpha_coeff(const RateSequence& seq, Index n, Index k) {
  if (k > n)
    throw Error(ErrorCode::invalid_argument, "alpha_k^n requires k <= n");
  if (is_binomial_family(seq)) return binomial(n, k);
  require_distinct_lambdas(seq, n);
  const double lk = seq.lambda_at(k);
  double a = 1.0;
  for (Index m = k; m < n; ++m) a *= seq.mu_at(m) / (seq.lambda_at(m + 1) - lk);
  return a;
}

std::vector<double> c_from_initial(std::span<const double> deltas0,
                                   const RateSequence& seq) {
  if (deltas0.empty()) return {};
  const Index n = deltas0.size() - 1;
  if (n > kConditioningWarnAbove)
    warn("mode amplitudes for n = " + std::to_string(n) +
         " come from alternating sums and may be ill-conditioned");
  std::vector<double> C(n + 1);

  if (is_binomial_family(seq)) {
    for (Index k = 0; k <= n; ++k) {
      CompensatedSum s;
      for (Index j = 0; j <= k; ++j) {
        const double term = binomial(k, j) * deltas0[j];
        s += ((k - j) % 2 == 0) ? term : -term;
      }
      C[k] = s.value();
    }
    return C;
  }

  require_distinct_lambdas(seq, n);
  std::vector<double> mu(n + 1), lam(n + 1);
  for (Index m = 0; m <= n; ++m) {
    mu[m] = seq.mu_at(m);
    lam[m] = seq.lambda_at(m);
  }
  for (Index k = 0; k <= n; ++k) {
    CompensatedSum s(deltas0[k]);
    double prod = 1.0;
    for (Index j = k; j-- > 0;) {
      prod *= mu[j] / (lam[j] - lam[k]);
      s += prod * deltas0[j];
    }
    C[k] = s.value();
  }
  return C;
}

namespace {

// alpha_k^m for all k <= m <= n via alpha_k^m = alpha_k^{m-1} mu_{m-1} /
// (lambda_m - lambda_k); row m holds alpha_0^m..alpha_m^m.
std::vector<std::vector<double>> alpha_table(const RateSequence& seq, Index n) {
  std::vector<std::vector<double>> a(n + 1);
  if (is_binomial_family(seq)) {
    for (Index m = 0; m <= n; ++m) {
      a[m].resize(m + 1);
      for (Index k = 0; k <= m; ++k) a[m][k] = binomial(m, k);
    }
    return a;
  }
  require_distinct_lambdas(seq, n);
  std::vector<double> mu(n + 1), lam(n + 1);
  for (Index m = 0; m <= n; ++m) {
    mu[m] = seq.mu_at(m);
    lam[m] = seq.lambda_at(m);
  }
  a[0] = {1.0};
  for (Index m = 1; m <= n; ++m) {
    a[m].resize(m + 1);
    for (Index k = 0; k < m; ++k)
      a[m][k] = a[m - 1][k] * mu[m - 1] / (lam[m] - lam[k]);
    a[m][m] = 1.0;
  }
  return a;
}

}  // namespace

std::vector<double> initial_from_c(std::span<const double> C,
                                   const RateSequence& seq) {
  if (C.empty()) return {};
  const Index n = C.size() - 1;
  const auto alpha = alpha_table(seq, n);
  std::vector<double> d(n + 1);
  for (Index m = 0; m <= n; ++m) {
    CompensatedSum s;
    for (Index k = 0; k <= m; ++k) s += C[k] * alpha[m][k];
    d[m] = s.value();
  }
  return d;
}

double delta_general(const RateSequence& seq, std::span<const double> C,
                     Index n, double t) {
  if (n >= C.size())
    throw Error(ErrorCode::index_out_of_range, "Delta_n needs C_0..C_n");
  const auto alpha = alpha_table(seq, n);
  CompensatedSum s;
  for (Index k = 0; k <= n; ++k)
    s += C[k] * alpha[n][k] * std::exp(-seq.lambda_at(k) * t);
  return s.value();
}

LinearGrowthTransient LinearGrowthTransient::from_initial(
    double gamma, double sigma, std::span<const double> deltas0) {
  LinearGrowthTransient tr{gamma, sigma, {}};
  tr.C = c_from_initial(deltas0, tr.rates());
  return tr;
}

RateSequence LinearGrowthTransient::rates() const {
  return RateSequence(RateFamily::constant(gamma), RateFamily::linear(sigma, 1.0));
}

double delta_linear(const LinearGrowthTransient& tr, Index n, double t) {
  if (n >= tr.C.size())
    throw Error(ErrorCode::index_out_of_range, "Delta_n needs C_0..C_n");
  const double y = std::exp(-tr.sigma * t);
  CompensatedSum s;
  double yk = 1.0;
  for (Index k = 0; k <= n; ++k) {
    s += tr.C[k] * binomial(n, k) * yk;
    yk *= y;
  }
  return std::exp(-(tr.gamma + tr.sigma) * t) * s.value();
}

RealPolynomial stationary_point_poly_linear(const LinearGrowthTransient& tr,
                                            Index n) {
  if (n >= tr.C.size())
    throw Error(ErrorCode::index_out_of_range,
                "stationary-point polynomial needs C_0..C_n");
  const double lambda = tr.gamma + tr.sigma;
  std::vector<double> c(n + 1);
  for (Index k = 0; k <= n; ++k)
    c[k] = -tr.C[k] * binomial(n, k) * (lambda + static_cast<double>(k) * tr.sigma);
  return RealPolynomial(std::move(c));
}

StationaryPoints stationary_points_constant(const ConstantGrowthTransient& tr,
                                            Index n) {
  const RealPolynomial p = stationary_point_poly_constant(tr, n);
  StationaryPoints out;
  if (p.is_zero()) {
    out.degenerate = true;
    return out;
  }
  for (const Root& r : real_roots(p, 0.0)) out.times.push_back(r.value / tr.mu);
  return out;
}

StationaryPoints stationary_points_linear(const LinearGrowthTransient& tr,
                                          Index n) {
  const RealPolynomial p = stationary_point_poly_linear(tr, n);
  StationaryPoints out;
  if (p.is_zero()) {
    out.degenerate = true;
    return out;
  }
  for (const Root& r : real_roots(p, 0.0, 1.0))
    out.times.push_back(-std::log(r.value) / tr.sigma);
  std::sort(out.times.begin(), out.times.end());
  return out;
}

}  // namespace rglab
