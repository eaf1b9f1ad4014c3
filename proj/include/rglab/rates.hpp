#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace rglab {

using Index = std::size_t;

namespace family {
struct Constant {
  double value;
};
/// sigma * (n + b)
struct Linear {
  double sigma;
  double b;
};
/// c * (n + 1)^s; the shift keeps the n = 0 rate positive.
struct Power {
  double c;
  double s;
};
/// c * a^n
struct Exponential {
  double c;
  double a;
};
enum class Extension { error, hold_last };
struct Table {
  std::vector<double> values;
  Extension extension = Extension::error;
};
}  // namespace family

/// Leading-order behaviour rate_n ~ coefficient * n^power * base^n.
struct Asymptotics {
  double coefficient;
  double power;
  double base;
};

/// A positive rate sequence given by a closed-form family or a finite table.
/// Values are computed on demand, never tabulated.
class RateFamily {
 public:
  using Kind = std::variant<family::Constant, family::Linear, family::Power,
                            family::Exponential, family::Table>;

  static RateFamily constant(double value);
  static RateFamily linear(double sigma, double b);
  static RateFamily power(double c, double s);
  static RateFamily exponential(double c, double a);
  static RateFamily table(std::vector<double> values,
                          family::Extension extension);

  double at(Index n) const;
  /// Natural log of at(n); stays finite where at(n) would under/overflow.
  double log_at(Index n) const;

  std::optional<Asymptotics> asymptotics() const;
  std::string_view kind_name() const;
  const Kind& kind() const noexcept { return kind_; }

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&kind_);
  }

 private:
  explicit RateFamily(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

enum class RTail { not_vanishing, harmonic_or_slower, summable_log, unknown };

std::string_view to_string(RTail tail);

/// The reset rates gamma_n and growth rates mu_n of one model instance.
class RateSequence {
 public:
  RateSequence(RateFamily gamma, RateFamily mu)
      : gamma_(std::move(gamma)), mu_(std::move(mu)) {}

  const RateFamily& gamma() const noexcept { return gamma_; }
  const RateFamily& mu() const noexcept { return mu_; }

  double gamma_at(Index n) const { return gamma_.at(n); }
  double mu_at(Index n) const { return mu_.at(n); }
  double lambda_at(Index n) const { return gamma_.at(n) + mu_.at(n); }
  double r_at(Index n) const { return gamma_.at(n) / mu_.at(n); }

  double log_gamma_at(Index n) const { return gamma_.log_at(n); }
  double log_mu_at(Index n) const { return mu_.log_at(n); }
  double log_r_at(Index n) const { return gamma_.log_at(n) - mu_.log_at(n); }
  double log_lambda_at(Index n) const;
  /// log(1 + r_n), accurate for r_n down to denormal range.
  double log1p_r_at(Index n) const;

  /// Constant gamma: returns its value.
  std::optional<double> constant_gamma() const;

 private:
  RateFamily gamma_;
  RateFamily mu_;
};

/// Analytic classification of whether sum_n log(1 + r_n) diverges.
RTail classify_r_tail(const RateSequence& seq);

/// Asymptotics of r_n = gamma_n / mu_n, when both families are closed-form.
std::optional<Asymptotics> r_asymptotics(const RateSequence& seq);

/// beta = ln(lambda / mu) for constant rates, so that Q_n = Q_0 e^{-beta n}.
std::optional<double> exponential_beta(const RateSequence& seq);

/// True for constant gamma with mu_n = sigma (n + 1), where the transient
/// mode coefficients reduce to binomials.
bool is_binomial_family(const RateSequence& seq);

}  // namespace rglab
