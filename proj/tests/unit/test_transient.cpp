#include <doctest.h>

#include <cmath>
#include <random>

#include "rglab/error.hpp"
#include "rglab/stationary.hpp"
#include "rglab/transient.hpp"

using namespace rglab;

namespace {

// Taylor series of the bidiagonal homogeneous system in long double, applied
// over sub-steps short enough that the series does not cancel.
std::vector<double> taylor_oracle(const RateSequence& seq, std::vector<double> d0, double t) {
  const std::size_t n = d0.size();
  const int steps = 1 + static_cast<int>(std::ceil(t * seq.lambda_at(n - 1)));
  const long double h = static_cast<long double>(t) / steps;
  std::vector<long double> state(d0.begin(), d0.end());
  for (int s = 0; s < steps; ++s) {
    std::vector<long double> term(state), sum(state);
    for (int k = 1; k < 60; ++k) {
      std::vector<long double> next(n);
      for (std::size_t i = 0; i < n; ++i) {
        next[i] = -static_cast<long double>(seq.lambda_at(i)) * term[i];
        if (i > 0) next[i] += static_cast<long double>(seq.mu_at(i - 1)) * term[i - 1];
        next[i] *= h / k;
      }
      term = next;
      for (std::size_t i = 0; i < n; ++i) sum[i] += term[i];
    }
    state = sum;
  }
  return {state.begin(), state.end()};
}

std::vector<double> random_deltas(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<double> d(n + 1);
  for (auto& x : d) x = u(rng);
  return d;
}

}  // namespace

TEST_CASE("constant-growth closed form against the series oracle") {
  std::mt19937_64 rng(3);
  const RateSequence seq(RateFamily::constant(0.8), RateFamily::constant(1.3));
  for (Index n : {1u, 4u, 9u}) {
    const auto d0 = random_deltas(rng, n);
    const auto tr = ConstantGrowthTransient::from_rates(0.8, 1.3, d0);
    for (double t : {0.0, 0.3, 1.7, 4.0}) {
      const auto ref = taylor_oracle(seq, d0, t);
      for (Index k = 0; k <= n; ++k) CHECK(delta_constant(tr, k, t) == doctest::Approx(ref[k]).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("linear-growth closed form against the series oracle") {
  std::mt19937_64 rng(4);
  const double gamma = 0.6, sigma = 1.4;
  const RateSequence seq(RateFamily::constant(gamma), RateFamily::linear(sigma, 1.0));
  for (Index n : {1u, 5u, 10u}) {
    const auto d0 = random_deltas(rng, n);
    const auto tr = LinearGrowthTransient::from_initial(gamma, sigma, d0);
    for (double t : {0.0, 0.2, 1.0, 2.5}) {
      const auto ref = taylor_oracle(seq, d0, t);
      for (Index k = 0; k <= n; ++k)
        CHECK(delta_linear(tr, k, t) == doctest::Approx(ref[k]).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("general modes reproduce a table-driven sequence") {
  std::mt19937_64 rng(8);
  const RateSequence seq(RateFamily::constant(1.0),
                         RateFamily::table({0.5, 2.0, 3.5, 1.1, 4.7, 0.3}, family::Extension::error));
  const auto d0 = random_deltas(rng, 5);
  const auto C = c_from_initial(d0, seq);
  const auto back = initial_from_c(C, seq);
  for (Index k = 0; k <= 5; ++k) CHECK(back[k] == doctest::Approx(d0[k]).epsilon(1e-12));
  for (double t : {0.1, 1.0, 3.0}) {
    const auto ref = taylor_oracle(seq, d0, t);
    for (Index k = 0; k <= 5; ++k)
      CHECK(delta_general(seq, C, k, t) == doctest::Approx(ref[k]).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("alpha coefficients are binomial on the linear family") {
  const RateSequence lin(RateFamily::constant(0.9), RateFamily::linear(1.7, 1.0));
  std::vector<double> mu(13);
  for (Index i = 0; i < mu.size(); ++i) mu[i] = lin.mu_at(i);
  const RateSequence tab(RateFamily::constant(0.9), RateFamily::table(mu, family::Extension::error));
  for (Index n = 0; n <= 12; ++n)
    for (Index k = 0; k <= n; ++k) {
      CHECK(alpha_coeff(lin, n, k) == binomial(n, k));
      CHECK(alpha_coeff(tab, n, k) == doctest::Approx(binomial(n, k)).epsilon(1e-12));
    }
  CHECK(binomial(70, 35) == doctest::Approx(1.1218627781666799e20).epsilon(1e-12));
  CHECK(binomial(5, 7) == 0.0);
}

TEST_CASE("repeated lambda is refused") {
  const RateSequence seq(RateFamily::constant(1.0),
                         RateFamily::table({1.0, 2.0, 2.0}, family::Extension::error));
  bool repeated = false;
  try {
    alpha_coeff(seq, 2, 1);
  } catch (const Error& e) {
    repeated = e.code() == ErrorCode::repeated_lambda;
  }
  CHECK(repeated);
}

TEST_CASE("stationary points are extrema of Delta_n") {
  std::mt19937_64 rng(21);
  const auto check_extrema = [](auto delta, const StationaryPoints& sp) {
    for (double t : sp.times) {
      const double h = 1e-3 * std::max(1.0, t);
      const double left = delta(t) - delta(t - h);
      const double right = delta(t + h) - delta(t);
      CHECK(left * right <= 0.0);
    }
  };
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + trial % 6;
    const auto d0 = random_deltas(rng, n);
    const auto ct = ConstantGrowthTransient::from_rates(1.0, 2.0, d0);
    check_extrema([&](double t) { return delta_constant(ct, n, t); }, stationary_points_constant(ct, n));
    const auto lt = LinearGrowthTransient::from_initial(1.0, 1.0, d0);
    check_extrema([&](double t) { return delta_linear(lt, n, t); }, stationary_points_linear(lt, n));
  }
}

TEST_CASE("reset from state zero: one stationary point at ln(n+1)") {
  // gamma = sigma = 1 gives C_k = (-1)^k (k+1)/(k+2) and a stationary
  // polynomial (1 - y)^(n-1) (1 - (n+1) y)
  const RateSequence seq(RateFamily::constant(1.0), RateFamily::linear(1.0, 1.0));
  const auto Q = q_iterate(seq, 0.5, 12);
  std::vector<double> d0(13);
  for (Index k = 0; k <= 12; ++k) d0[k] = (k == 0 ? 1.0 : 0.0) - Q[k];
  const auto tr = LinearGrowthTransient::from_initial(1.0, 1.0, d0);
  for (Index k = 0; k <= 12; ++k)
    CHECK(tr.C[k] == doctest::Approx((k % 2 ? -1.0 : 1.0) * (k + 1.0) / (k + 2.0)).epsilon(1e-9));
  for (Index n = 1; n <= 12; ++n) {
    const auto sp = stationary_points_linear(tr, n);
    REQUIRE(sp.times.size() == 1);
    CHECK(sp.times[0] == doctest::Approx(std::log(n + 1.0)).epsilon(1e-8));
  }
}

TEST_CASE("stationary initial data is degenerate") {
  const auto ct = ConstantGrowthTransient::from_rates(1.0, 1.0, std::vector<double>(4, 0.0));
  CHECK(stationary_points_constant(ct, 3).degenerate);
}

TEST_CASE("deviations decay at least like e^{-gamma t}") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 8;
    const auto d0 = random_deltas(rng, n);
    double bound0 = 0.0;
    for (double x : d0) bound0 = std::max(bound0, std::abs(x));
    const auto lt = LinearGrowthTransient::from_initial(0.7, 1.2, d0);
    for (double t : {0.5, 2.0, 8.0})
      for (Index k = 0; k <= n; ++k)
        CHECK(std::abs(delta_linear(lt, k, t)) <= bound0 * std::exp(-0.7 * t) * (1.0 + 1e-9) + 1e-14);
  }
}
