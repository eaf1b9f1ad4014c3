#include "rglab/stationary.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rglab/error.hpp"
#include "rglab/numeric.hpp"

namespace rglab {

namespace {

const double kLogMax = std::log(std::numeric_limits<double>::max());

// Decay of Q_n beyond the truncation, derived from the rate asymptotics.
struct Decay {
  TailModel model = TailModel::none;
  double q = 0.0;  // power-law exponent when model == power_law
};

double log_base_of(const Asymptotics& a) {
  const double l = std::log(a.base);
  return std::abs(l) <= 1e-12 ? 0.0 : l;
}

// Sum over n > N of r_n (first order) minus half the sum of r_n^2, i.e. the
// leading terms of sum_{n>N} log(1 + r_n).
double log_sum_tail(const RateSequence& seq, Index N) {
  const auto r = r_asymptotics(seq);
  if (!r) return 0.0;
  const double r1 = std::exp(seq.log_r_at(N));
  const double r2 = std::exp(seq.log_r_at(N + 1));
  if (r->base < 1.0) {
    const double r3 = std::exp(seq.log_r_at(N + 2));
    const double rho = r3 / r2;
    if (!(rho < 1.0)) return 0.0;
    return r2 / (1.0 - rho) - 0.5 * r2 * r2 / (1.0 - rho * rho);
  }
  const double q = -r->power;
  if (!(q > 1.0)) return 0.0;
  return power_tail_sum(r1, r2, N, q) -
         0.5 * power_tail_sum(r1 * r1, r2 * r2, N, 2.0 * q);
}

Decay decay_model(const RateSequence& seq, const S0Result& s0) {
  const auto m = seq.mu().asymptotics();
  const auto r = r_asymptotics(seq);
  if (!m || !r) return {};
  const double log_am = log_base_of(*m);
  switch (s0.tail) {
    case RTail::summable_log:
      // Q_n ~ lambda_0 Q_0 (1 - S0) / mu_n
      if (log_am > 0.0) return {TailModel::geometric, 0.0};
      return {TailModel::power_law, m->power};
    case RTail::not_vanishing:
      return {TailModel::geometric, 0.0};
    case RTail::harmonic_or_slower:
      if (log_am > 0.0) return {TailModel::geometric, 0.0};
      if (r->power == -1.0)
        return {TailModel::power_law, r->coefficient + m->power};
      return {};
    case RTail::unknown:
      return {};
  }
  return {};
}

}  // namespace

std::string_view to_string(S0Class c) {
  switch (c) {
    case S0Class::exactly_one: return "exactly-one";
    case S0Class::strictly_below_one: return "strictly-below-one";
    case S0Class::undetermined: return "undetermined";
  }
  return "undetermined";
}

std::string_view to_string(Normalizable n) {
  switch (n) {
    case Normalizable::yes: return "yes";
    case Normalizable::no: return "no";
    case Normalizable::undetermined: return "undetermined";
  }
  return "undetermined";
}

std::string_view to_string(TailModel m) {
  switch (m) {
    case TailModel::none: return "none";
    case TailModel::geometric: return "geometric";
    case TailModel::power_law: return "power-law";
    case TailModel::truncated: return "truncated";
  }
  return "none";
}

std::vector<double> q_iterate(const RateSequence& seq, double Q0, Index N) {
  if (!(Q0 > 0.0))
    throw Error(ErrorCode::invalid_argument, "Q0 must be positive");
  std::vector<double> q(N + 1);
  q[0] = Q0;
  CompensatedSum log_q(std::log(Q0));
  for (Index n = 1; n <= N; ++n) {
    log_q += seq.log_mu_at(n - 1);
    log_q -= seq.log_lambda_at(n);
    const double lq = log_q.value();
    if (lq > kLogMax)
      throw Error(ErrorCode::overflow,
                  "Q_" + std::to_string(n) + " exceeds the double range");
    q[n] = std::exp(lq);
  }
  return q;
}

double q_product_form(const RateSequence& seq, double Q0, Index n) {
  if (!(Q0 > 0.0))
    throw Error(ErrorCode::invalid_argument, "Q0 must be positive");
  CompensatedSum log_q(std::log(Q0));
  log_q += seq.log_lambda_at(0);
  log_q -= seq.log_gamma_at(n);
  log_q += seq.log_r_at(n);
  for (Index k = 0; k <= n; ++k) log_q -= seq.log1p_r_at(k);
  return std::exp(log_q.value());
}

double z_at(const RateSequence& seq, Index n) {
  CompensatedSum log_z(seq.log_r_at(n));
  for (Index k = 0; k <= n; ++k) log_z -= seq.log1p_r_at(k);
  return std::exp(log_z.value());
}

double power_tail_sum(double f_N, double f_N1, Index N, double q) {
  if (!(f_N > 0.0) || !(q > 1.0)) return 0.0;
  const double rho = f_N1 / f_N;
  double u = static_cast<double>(N) + 1.0;
  if (rho > 0.0 && rho < 1.0) {
    const double s = std::pow(rho, 1.0 / q);
    const double fitted = s / (1.0 - s);
    if (std::isfinite(fitted) && fitted > 0.0) u = fitted;
  }
  // integral of A (x + h)^{-q} from N + 1/2 with A = f_N (N + h)^q, u = N + h
  return f_N * (u + 0.5) * std::pow(u / (u + 0.5), q) / (q - 1.0);
}

S0Result s0_compute(const RateSequence& seq, Index N_max, double tail_threshold) {
  if (N_max < 1)
    throw Error(ErrorCode::invalid_argument, "N_max must be at least 1");
  CompensatedSum log_sum;
  for (Index n = 0; n <= N_max; ++n) log_sum += seq.log1p_r_at(n);

  S0Result out;
  out.N = N_max;
  out.tail_log_sum = log_sum.value();
  out.partial_value = -std::expm1(-out.tail_log_sum);
  out.lower = out.partial_value;
  out.upper = 1.0;
  out.tail = classify_r_tail(seq);

  switch (out.tail) {
    case RTail::not_vanishing:
    case RTail::harmonic_or_slower:
      out.classification = S0Class::exactly_one;
      break;
    case RTail::summable_log:
      out.classification = S0Class::strictly_below_one;
      break;
    case RTail::unknown:
      out.classification = out.tail_log_sum > tail_threshold
                               ? S0Class::exactly_one
                               : S0Class::undetermined;
      break;
  }

  switch (out.classification) {
    case S0Class::exactly_one:
      out.estimate = 1.0;
      break;
    case S0Class::strictly_below_one:
      out.estimate =
          -std::expm1(-(out.tail_log_sum + log_sum_tail(seq, N_max)));
      break;
    case S0Class::undetermined:
      out.estimate = 0.5 * (out.lower + out.upper);
      break;
  }
  return out;
}

BoundaryLimit boundary_limit(const RateSequence& seq, double Q0,
                             const S0Result& s0) {
  const double scale = seq.lambda_at(0) * Q0;
  BoundaryLimit out;
  switch (s0.classification) {
    case S0Class::exactly_one:
      break;
    case S0Class::strictly_below_one:
      out.value = scale * (1.0 - s0.estimate);
      out.uncertainty = scale * (s0.estimate - s0.partial_value);
      break;
    case S0Class::undetermined:
      out.value = scale * (1.0 - s0.estimate);
      out.uncertainty = scale * 0.5 * (s0.upper - s0.lower);
      break;
  }
  return out;
}

Normalizable normalizability(const RateSequence& seq, const S0Result& s0) {
  const auto m = seq.mu().asymptotics();
  const auto r = r_asymptotics(seq);
  if (!m || !r) return Normalizable::undetermined;
  const double log_am = log_base_of(*m);
  const auto by_sign = [](double x) {
    return x > 0.0 ? Normalizable::yes : Normalizable::no;
  };

  switch (s0.tail) {
    case RTail::summable_log:
      // Q_n ~ const / mu_n
      if (log_am != 0.0) return by_sign(log_am);
      return m->power > 1.0 ? Normalizable::yes : Normalizable::no;
    case RTail::not_vanishing: {
      if (r->base > 1.0 || r->power > 0.0) return Normalizable::yes;
      // r_n -> c: Q_n ~ (1 + c)^{-n} / mu_n
      const double x = log_am + std::log1p(r->coefficient);
      if (std::abs(x) <= 1e-12) return Normalizable::undetermined;
      return by_sign(x);
    }
    case RTail::harmonic_or_slower:
      if (log_am != 0.0) return by_sign(log_am);
      if (r->power > -1.0) return Normalizable::yes;
      // r_n ~ c / n: Q_n ~ n^{-(c + p_mu)}
      return r->coefficient + m->power > 1.0 ? Normalizable::yes
                                             : Normalizable::no;
    case RTail::unknown:
      return Normalizable::undetermined;
  }
  return Normalizable::undetermined;
}

StationaryResult normalize(const RateSequence& seq, Index N, const S0Result& s0,
                           TailPolicy policy) {
  StationaryResult out;
  out.s0 = s0;
  out.normalizable = normalizability(seq, s0);
  if (out.normalizable == Normalizable::no)
    throw Error(ErrorCode::not_normalizable,
                "stationary candidate is not summable for these rates");
  if (out.normalizable == Normalizable::undetermined &&
      policy == TailPolicy::estimate)
    throw Error(ErrorCode::undetermined,
                "normalizability cannot be decided from the rate families");

  std::vector<double> q = q_iterate(seq, 1.0, N);
  const double partial = compensated_sum(q);
  const double q_last = q.back();
  const double q_next = q_last * seq.mu_at(N) / seq.lambda_at(N + 1);

  double tail = 0.0;
  if (policy == TailPolicy::truncated) {
    out.tail_model = TailModel::truncated;
  } else if (q_last == 0.0) {
    out.tail_model = TailModel::none;  // underflowed: nothing left to add
  } else {
    const Decay d = decay_model(seq, s0);
    out.tail_model = d.model;
    switch (d.model) {
      case TailModel::geometric: {
        const double rho = q_next / q_last;
        if (!(rho < 1.0))
          throw Error(ErrorCode::undetermined,
                      "truncation N is below the geometric decay regime");
        tail = q_last * rho / (1.0 - rho);
        break;
      }
      case TailModel::power_law:
        tail = power_tail_sum(q_last, q_next, N, d.q);
        break;
      case TailModel::none:
      case TailModel::truncated:
        if (q_last >= 1e-12 * partial)
          throw Error(ErrorCode::undetermined,
                      "truncation N=" + std::to_string(N) +
                          " leaves a partial-sum increment above 1e-12");
        break;
    }
  }

  const double R = 1.0 / (partial + tail);
  for (double& v : q) v *= R;
  out.Q0 = q[0];
  out.values = std::move(q);
  out.normalization_sum = compensated_sum(out.values);
  out.tail_estimate = tail * R;
  out.boundary_limit = boundary_limit(seq, out.Q0, s0);
  return out;
}

}  // namespace rglab
