#include <doctest.h>

#include <cmath>

#include "rglab/error.hpp"
#include "rglab/rates.hpp"

using namespace rglab;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::config;
}

}  // namespace

TEST_CASE("family values") {
  CHECK(RateFamily::constant(2.5).at(7) == 2.5);
  CHECK(RateFamily::linear(2.0, 1.0).at(3) == 8.0);
  CHECK(RateFamily::power(1.0, 2.0).at(4) == 25.0);
  CHECK(RateFamily::exponential(3.0, 0.5).at(2) == doctest::Approx(0.75));
  const auto t = RateFamily::table({1.0, 2.0, 3.0}, family::Extension::hold_last);
  CHECK(t.at(1) == 2.0);
  CHECK(t.at(10) == 3.0);
}

TEST_CASE("log values stay finite where values underflow") {
  const auto f = RateFamily::exponential(1.0, std::exp(-1.0));
  CHECK(f.at(1000) == 0.0);
  CHECK(f.log_at(1000) == doctest::Approx(-1000.0));
  for (Index n : {0u, 5u, 50u})
    CHECK(f.log_at(n) == doctest::Approx(std::log(f.at(n))).epsilon(1e-14));
}

TEST_CASE("invalid rates are rejected") {
  CHECK(code_of([] { RateFamily::constant(0.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { RateFamily::linear(1.0, 0.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { RateFamily::linear(-1.0, 1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { RateFamily::power(1.0, std::nan("")); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { RateFamily::table({}, family::Extension::error); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([] { RateFamily::table({1.0, -2.0}, family::Extension::error); }) ==
        ErrorCode::invalid_argument);
  const auto t = RateFamily::table({1.0, 2.0}, family::Extension::error);
  CHECK(code_of([&] { t.at(2); }) == ErrorCode::index_out_of_range);
}

TEST_CASE("sequence identities") {
  const RateSequence seq(RateFamily::power(0.3, 0.5), RateFamily::linear(2.0, 1.5));
  for (Index n = 0; n < 100; ++n) {
    CHECK(seq.lambda_at(n) == seq.gamma_at(n) + seq.mu_at(n));
    CHECK(seq.r_at(n) == doctest::Approx(seq.gamma_at(n) / seq.mu_at(n)));
    CHECK(seq.log1p_r_at(n) == doctest::Approx(std::log1p(seq.r_at(n))).epsilon(1e-14));
    CHECK(seq.log_lambda_at(n) == doctest::Approx(std::log(seq.lambda_at(n))).epsilon(1e-14));
  }
}

TEST_CASE("log1p_r stays accurate for tiny ratios") {
  const RateSequence seq(RateFamily::constant(1e-300), RateFamily::constant(1.0));
  CHECK(seq.log1p_r_at(0) == doctest::Approx(1e-300));
}

TEST_CASE("r tail classification") {
  const auto c = [](double g) { return RateFamily::constant(g); };
  CHECK(classify_r_tail({c(1.0), c(1.0)}) == RTail::not_vanishing);
  CHECK(classify_r_tail({c(1.0), RateFamily::linear(1.0, 1.0)}) == RTail::harmonic_or_slower);
  CHECK(classify_r_tail({c(1.0), RateFamily::power(1.0, 0.5)}) == RTail::harmonic_or_slower);
  CHECK(classify_r_tail({c(1.0), RateFamily::power(1.0, 2.0)}) == RTail::summable_log);
  CHECK(classify_r_tail({c(1.0), RateFamily::exponential(1.0, 1.1)}) == RTail::summable_log);
  CHECK(classify_r_tail({RateFamily::exponential(1.0, 0.5), RateFamily::exponential(2.0, 0.5)}) ==
        RTail::not_vanishing);
  CHECK(classify_r_tail({c(1.0), RateFamily::table({1.0}, family::Extension::hold_last)}) ==
        RTail::unknown);
}

TEST_CASE("binomial family detection") {
  CHECK(is_binomial_family({RateFamily::constant(1.0), RateFamily::linear(2.0, 1.0)}));
  CHECK_FALSE(is_binomial_family({RateFamily::constant(1.0), RateFamily::linear(2.0, 2.0)}));
  CHECK_FALSE(is_binomial_family({RateFamily::power(1.0, 0.0), RateFamily::linear(2.0, 1.0)}));
  CHECK(exponential_beta({RateFamily::constant(1.0), RateFamily::constant(1.0)}).value() ==
        doctest::Approx(std::log(2.0)));
}
