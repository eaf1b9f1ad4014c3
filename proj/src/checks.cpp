#include "rglab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <future>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "rglab/error.hpp"
#include "rglab/evolution.hpp"
#include "rglab/numeric.hpp"
#include "rglab/stationary.hpp"
#include "rglab/transient.hpp"

namespace rglab {

namespace {

using nlohmann::json;

double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

CheckResult bound_check(std::string name, double worst, double tol) {
  return {std::move(name), worst <= tol,
          "worst " + fmt(worst) + " (tol " + fmt(tol) + ")"};
}

CheckResult rate_identities(const RateSequence& seq, Index N) {
  double worst = 0.0;
  bool positive = true;
  for (Index n = 0; n <= std::min<Index>(N, 1000); ++n) {
    const double g = seq.gamma_at(n), m = seq.mu_at(n);
    positive = positive && g > 0.0 && m > 0.0;
    worst = std::max(worst, rel_err(seq.lambda_at(n), g + m));
    worst = std::max(worst, rel_err(seq.r_at(n) * m, g));
  }
  auto c = bound_check("rate_identities", worst, 4e-16);
  c.pass = c.pass && positive;
  return c;
}

CheckResult z_telescoping(const RateSequence& seq, Index N) {
  // sum_{n<=N} Z_n = 1 - Z_N / r_N, with Z_N / r_N = prod_{k<=N} 1/(1 + r_k)
  double worst = 0.0;
  CompensatedSum direct, log_prod;
  for (Index n = 0; n <= std::min<Index>(N, 50); ++n) {
    direct += z_at(seq, n);
    log_prod += seq.log1p_r_at(n);
    const double closed = -std::expm1(-log_prod.value());
    if (n >= 1) worst = std::max(worst, rel_err(direct.value(), closed));
  }
  return bound_check("z_telescoping_identity", worst, 1e-12);
}

CheckResult product_forms(const RateSequence& seq, Index N) {
  const Index top = std::min<Index>(N, 200);
  const auto q = q_iterate(seq, 1.0, top);
  double worst = 0.0;
  for (Index n = 0; n <= top; ++n)
    worst = std::max(worst, rel_err(q[n], q_product_form(seq, 1.0, n)));
  return bound_check("q_forms_agree", worst, 1e-10);
}

CheckResult recurrence(const RateSequence& seq, Index N) {
  const Index top = std::min<Index>(N, 1000);
  const auto q = q_iterate(seq, 1.0, top);
  double worst = 0.0;
  for (Index n = 1; n <= top; ++n)
    worst = std::max(worst,
                     rel_err(seq.lambda_at(n) * q[n], seq.mu_at(n - 1) * q[n - 1]));
  return bound_check("stationary_recurrence", worst, 1e-12);
}

CheckResult reset_sum(const RateSequence& seq, Index N) {
  const Index top = std::min<Index>(N, 1000);
  const auto q = q_iterate(seq, 1.0, top);
  const double lambda0 = seq.lambda_at(0);
  CompensatedSum sum;
  double worst = 0.0;
  for (Index n = 0; n <= top; ++n) {
    sum += seq.gamma_at(n) * q[n];
    if (n >= 1 && (n % 37 == 0 || n == top)) {
      const double s0 = s0_compute(seq, n).partial_value;
      worst = std::max(worst, rel_err(sum.value(), lambda0 * s0));
    }
  }
  return bound_check("reset_sum_identity", worst, 1e-12);
}

CheckResult s0_monotone(const RateSequence& seq, Index N) {
  CompensatedSum log_sum;
  double prev = 0.0;
  bool ok = true;
  for (Index n = 0; n <= N; ++n) {
    log_sum += seq.log1p_r_at(n);
    const double s = -std::expm1(-log_sum.value());
    if (s < prev || s > 1.0) ok = false;
    prev = s;
  }
  return {"s0_monotone", ok, "partial S0 at N: " + fmt(prev)};
}

CheckResult mass_balance(const RateSequence& seq, Index N) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TruncatedState s;
  s.P.resize(std::min<Index>(N, 200) + 1);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    for (double& p : s.P) p = u(rng);
    const auto d = rhs(s, variant::Original{}, seq);
    CompensatedSum total, scale;
    for (double x : d) {
      total += x;
      scale += std::abs(x);
    }
    const double outflow = seq.mu_at(s.N()) * s.P.back();
    worst = std::max(worst, std::abs(total.value() + outflow) /
                                std::max(1.0, scale.value() + outflow));
  }
  return bound_check("truncated_mass_balance", worst, 1e-13);
}

CheckResult transient_round_trip(const RateSequence& seq) {
  // the alternating binomial transform amplifies rounding by up to 4^n
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (Index n = 1; n <= 12; ++n) {
    std::vector<double> d(n + 1);
    for (double& x : d) x = u(rng);
    const auto back = initial_from_c(c_from_initial(d, seq), seq);
    const double scale = std::ldexp(std::numeric_limits<double>::epsilon(), 2 * n);
    for (Index k = 0; k <= n; ++k)
      worst = std::max(worst, std::abs(back[k] - d[k]) / scale);
  }
  return bound_check("transient_round_trip", worst, 16.0);
}

CheckResult variant_consistency(const RateSequence& seq, Index N) {
  const double gamma = *seq.constant_gamma();
  const double lambda0 = seq.lambda_at(0);
  const double s0 = std::min(1.0, s0_compute(seq, N).estimate);
  const double R = gamma / (lambda0 * s0);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TruncatedState s;
  s.P.resize(std::min<Index>(N, 200) + 1);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    for (double& p : s.P) p = u(rng);
    const double mass = s.mass();
    for (double& p : s.P) p /= mass;
    const double a = rhs(s, variant::Modified{R, s0}, seq)[0];
    const double b = rhs(s, variant::ConstantReset{s0}, seq)[0];
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, lambda0));
  }
  return bound_check("variant_consistency", worst, 1e-12);
}

bool is_number(const json& j, const char* key) {
  return j.contains(key) && j.at(key).is_number();
}

CheckResult check_s0_json(const json& j, const std::string& label) {
  CheckResult c{label, false, ""};
  if (!is_number(j, "partial") || !j.contains("bracket") || !j.contains("classification")) {
    c.detail = "missing S0 fields";
    return c;
  }
  const double p = j.at("partial").get<double>();
  const auto b = j.at("bracket").get<std::vector<double>>();
  const auto cls = j.at("classification").get<std::string>();
  c.pass = p > 0.0 && p <= 1.0 && b.size() == 2 && b[0] == p && b[1] == 1.0 &&
           (cls == "exactly-one" || cls == "strictly-below-one" || cls == "undetermined");
  c.detail = "S0 report, partial " + fmt(p) + ", " + cls;
  return c;
}

}  // namespace

unsigned thread_budget() {
  if (const char* env = std::getenv("RGLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<CheckResult> run_invariant_suite(const RateSequence& seq, Index N,
                                             unsigned threads) {
  std::vector<std::pair<std::string, std::function<CheckResult()>>> jobs = {
      {"rate_identities", [&] { return rate_identities(seq, N); }},
      {"z_telescoping_identity", [&] { return z_telescoping(seq, N); }},
      {"q_forms_agree", [&] { return product_forms(seq, N); }},
      {"stationary_recurrence", [&] { return recurrence(seq, N); }},
      {"reset_sum_identity", [&] { return reset_sum(seq, N); }},
      {"s0_monotone", [&] { return s0_monotone(seq, N); }},
      {"truncated_mass_balance", [&] { return mass_balance(seq, N); }},
  };
  if (is_binomial_family(seq))
    jobs.push_back({"transient_round_trip", [&] { return transient_round_trip(seq); }});
  if (seq.constant_gamma())
    jobs.push_back({"variant_consistency", [&] { return variant_consistency(seq, N); }});

  const auto guarded = [](const std::string& name, const std::function<CheckResult()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return CheckResult{name, false, e.what()};
    }
  };

  std::vector<CheckResult> out(jobs.size());
  const std::size_t width = std::max(1u, threads);
  for (std::size_t start = 0; start < jobs.size(); start += width) {
    std::vector<std::future<CheckResult>> batch;
    const std::size_t stop = std::min(jobs.size(), start + width);
    for (std::size_t i = start; i < stop; ++i)
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred,
                                 guarded, jobs[i].first, jobs[i].second));
    for (std::size_t i = start; i < stop; ++i) out[i] = batch[i - start].get();
  }
  return out;
}

CheckResult check_report(const json& j, const std::string& label) {
  CheckResult c{label, false, ""};
  try {
    if (j.is_array()) {
      bool ok = !j.empty();
      for (const auto& e : j) {
        const auto pts = e.at("points").get<std::vector<double>>();
        ok = ok && e.at("count").get<std::size_t>() == pts.size() &&
             std::is_sorted(pts.begin(), pts.end()) &&
             std::all_of(pts.begin(), pts.end(), [](double t) { return t > 0.0; }) &&
             pts.size() <= e.at("n").get<std::size_t>();
      }
      c.pass = ok;
      c.detail = "stationary-point report, " + std::to_string(j.size()) + " entries";
      return c;
    }
    if (j.contains("classification")) return check_s0_json(j, label);
    if (j.contains("Q0") && j.contains("S0")) {
      auto inner = check_s0_json(j.at("S0"), label);
      const bool values_ok =
          j.at("normalizable") != "yes" ||
          (j.at("Q0").get<double>() > 0.0 &&
           std::abs(j.at("normalization_sum").get<double>() +
                    j.at("tail_estimate").get<double>() - 1.0) <= 1e-9);
      c.pass = inner.pass && values_ok && j.at("boundary_limit").get<double>() >= 0.0;
      c.detail = "stationary report; " + inner.detail;
      return c;
    }
    if (j.contains("checks") && j.contains("M")) {
      const auto pts = j.at("points").get<std::vector<double>>();
      const bool claimed = j.at("pass").get<bool>();
      const bool holds = pts.size() == j.at("n").get<std::size_t>() && !pts.empty() &&
                         *std::max_element(pts.begin(), pts.end()) > j.at("M").get<double>();
      c.pass = claimed == holds && holds;
      c.detail = "adversarial certificate, " + std::to_string(pts.size()) + " points";
      return c;
    }
    if (j.contains("checks") && j.contains("pass")) {
      bool all = true;
      for (const auto& e : j.at("checks")) all = all && e.at("pass").get<bool>();
      c.pass = all == j.at("pass").get<bool>();
      c.detail = "check report";
      return c;
    }
    c.detail = "unrecognized report";
  } catch (const std::exception& e) {
    c.detail = std::string("malformed report: ") + e.what();
  }
  return c;
}

}  // namespace rglab
