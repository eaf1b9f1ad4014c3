#include "rglab/rates.hpp"

#include <cmath>
#include <string>

#include "rglab/error.hpp"
#include "rglab/numeric.hpp"

namespace rglab {

namespace {

constexpr double kExponentTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw Error(ErrorCode::invalid_argument,
                std::string(what) + " must be a positive finite number");
}

const double& table_entry(const family::Table& t, Index n) {
  if (n < t.values.size()) return t.values[n];
  if (t.extension == family::Extension::hold_last) return t.values.back();
  throw Error(ErrorCode::index_out_of_range,
              "rate table has " + std::to_string(t.values.size()) +
                  " entries, index " + std::to_string(n) + " requested");
}

}  // namespace

RateFamily RateFamily::constant(double value) {
  require_positive(value, "constant rate value");
  return RateFamily(family::Constant{value});
}

RateFamily RateFamily::linear(double sigma, double b) {
  require_positive(sigma, "linear rate sigma");
  require_positive(b, "linear rate offset b");
  return RateFamily(family::Linear{sigma, b});
}

RateFamily RateFamily::power(double c, double s) {
  require_positive(c, "power rate coefficient c");
  if (!std::isfinite(s))
    throw Error(ErrorCode::invalid_argument, "power rate exponent s must be finite");
  return RateFamily(family::Power{c, s});
}

RateFamily RateFamily::exponential(double c, double a) {
  require_positive(c, "exponential rate coefficient c");
  require_positive(a, "exponential rate base a");
  return RateFamily(family::Exponential{c, a});
}

RateFamily RateFamily::table(std::vector<double> values,
                             family::Extension extension) {
  if (values.empty())
    throw Error(ErrorCode::invalid_argument, "rate table must not be empty");
  for (double v : values) require_positive(v, "rate table entry");
  return RateFamily(family::Table{std::move(values), extension});
}

double RateFamily::at(Index n) const {
  const double x = static_cast<double>(n);
  return std::visit(
      overloaded{
          [](const family::Constant& f) { return f.value; },
          [x](const family::Linear& f) { return f.sigma * (x + f.b); },
          [x](const family::Power& f) { return f.c * std::pow(x + 1.0, f.s); },
          [x](const family::Exponential& f) { return f.c * std::pow(f.a, x); },
          [n](const family::Table& f) { return table_entry(f, n); },
      },
      kind_);
}

double RateFamily::log_at(Index n) const {
  const double x = static_cast<double>(n);
  return std::visit(
      overloaded{
          [](const family::Constant& f) { return std::log(f.value); },
          [x](const family::Linear& f) {
            return std::log(f.sigma) + std::log(x + f.b);
          },
          [x](const family::Power& f) {
            return std::log(f.c) + f.s * std::log1p(x);
          },
          [x](const family::Exponential& f) {
            return std::log(f.c) + x * std::log(f.a);
          },
          [n](const family::Table& f) { return std::log(table_entry(f, n)); },
      },
      kind_);
}

std::optional<Asymptotics> RateFamily::asymptotics() const {
  return std::visit(
      overloaded{
          [](const family::Constant& f) -> std::optional<Asymptotics> {
            return Asymptotics{f.value, 0.0, 1.0};
          },
          [](const family::Linear& f) -> std::optional<Asymptotics> {
            return Asymptotics{f.sigma, 1.0, 1.0};
          },
          [](const family::Power& f) -> std::optional<Asymptotics> {
            return Asymptotics{f.c, f.s, 1.0};
          },
          [](const family::Exponential& f) -> std::optional<Asymptotics> {
            return Asymptotics{f.c, 0.0, f.a};
          },
          [](const family::Table&) -> std::optional<Asymptotics> {
            return std::nullopt;
          },
      },
      kind_);
}

std::string_view RateFamily::kind_name() const {
  return std::visit(
      overloaded{
          [](const family::Constant&) { return std::string_view("constant"); },
          [](const family::Linear&) { return std::string_view("linear"); },
          [](const family::Power&) { return std::string_view("power"); },
          [](const family::Exponential&) {
            return std::string_view("exponential");
          },
          [](const family::Table&) { return std::string_view("table"); },
      },
      kind_);
}

std::string_view to_string(RTail tail) {
  switch (tail) {
    case RTail::not_vanishing: return "not-vanishing";
    case RTail::harmonic_or_slower: return "harmonic-or-slower";
    case RTail::summable_log: return "summable-log";
    case RTail::unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::not_normalizable: return "not-normalizable";
    case ErrorCode::undetermined: return "undetermined";
    case ErrorCode::repeated_lambda: return "repeated-lambda";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::step_underflow: return "step-underflow";
    case ErrorCode::verification_failure: return "verification-failure";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

double RateSequence::log_lambda_at(Index n) const {
  // log(gamma + mu) = log(mu) + log(1 + r)
  return log_mu_at(n) + log1p_r_at(n);
}

double RateSequence::log1p_r_at(Index n) const {
  return log1p_exp(log_r_at(n));
}

std::optional<double> RateSequence::constant_gamma() const {
  if (const auto* c = gamma_.get_if<family::Constant>()) return c->value;
  return std::nullopt;
}

std::optional<Asymptotics> r_asymptotics(const RateSequence& seq) {
  const auto g = seq.gamma().asymptotics();
  const auto m = seq.mu().asymptotics();
  if (!g || !m) return std::nullopt;
  double log_base = std::log(g->base) - std::log(m->base);
  if (std::abs(log_base) <= kExponentTol) log_base = 0.0;
  double power = g->power - m->power;
  if (std::abs(power) <= kExponentTol) power = 0.0;
  if (std::abs(power + 1.0) <= kExponentTol) power = -1.0;
  return Asymptotics{g->coefficient / m->coefficient, power, std::exp(log_base)};
}

RTail classify_r_tail(const RateSequence& seq) {
  const auto r = r_asymptotics(seq);
  if (!r) return RTail::unknown;
  if (r->base > 1.0) return RTail::not_vanishing;
  if (r->base < 1.0) return RTail::summable_log;
  if (r->power >= 0.0) return RTail::not_vanishing;
  if (r->power >= -1.0) return RTail::harmonic_or_slower;
  return RTail::summable_log;
}

std::optional<double> exponential_beta(const RateSequence& seq) {
  const auto* g = seq.gamma().get_if<family::Constant>();
  const auto* m = seq.mu().get_if<family::Constant>();
  if (!g || !m) return std::nullopt;
  return std::log1p(g->value / m->value);
}

bool is_binomial_family(const RateSequence& seq) {
  const auto* lin = seq.mu().get_if<family::Linear>();
  return seq.constant_gamma().has_value() && lin != nullptr && lin->b == 1.0;
}

}  // namespace rglab
