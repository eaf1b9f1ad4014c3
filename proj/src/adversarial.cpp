#include "rglab/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rglab/error.hpp"
#include "rglab/numeric.hpp"
#include "rglab/polynomial.hpp"
#include "rglab/stationary.hpp"
#include "rglab/transient.hpp"

namespace rglab {

namespace {

constexpr double kRootStretch = 1.2;
constexpr int kMaxStretchPasses = 10;
// Upper limit on sigma M, so e^{-sigma M} stays a normal double.
constexpr double kLogBudget = 500.0;
constexpr double kProbTol = 1e-15;

std::vector<double> stationary_prefix(const RateSequence& seq, Index count) {
  const Index N = std::max<Index>(count, 20000);
  const S0Result s0 = s0_compute(seq, N);
  const StationaryResult st = normalize(seq, N, s0);
  return {st.values.begin(), st.values.begin() + static_cast<long>(count)};
}

bool feasible(const std::vector<double>& delta, const std::vector<double>& Q,
              double eps) {
  CompensatedSum total;
  for (Index k = 0; k < delta.size(); ++k) {
    const double d = eps * delta[k];
    if (d < -Q[k] || d > 1.0 - Q[k]) return false;
    total += d;
    total += Q[k];
  }
  return total.value() <= 1.0;
}

// Shrinks epsilon by halving until the initial data fit a probability
// distribution, then fills P_0..P_{n+1}.
void fit_to_distribution(AdversarialResult& res,
                         const std::vector<double>& unit_delta) {
  const Index n = res.n;
  double eps = 1.0;
  while (!feasible(unit_delta, res.Q, eps)) {
    eps *= 0.5;
    if (eps < std::numeric_limits<double>::min())
      throw Error(ErrorCode::verification_failure,
                  "epsilon underflowed before the initial data became feasible");
  }
  res.epsilon = eps;
  res.initial_deltas.resize(n + 1);
  res.initial_P.assign(n + 2, 0.0);
  CompensatedSum mass;
  for (Index k = 0; k <= n; ++k) {
    res.initial_deltas[k] = eps * unit_delta[k];
    res.initial_P[k] = std::max(0.0, res.Q[k] + res.initial_deltas[k]);
    mass += res.initial_P[k];
  }
  res.initial_P[n + 1] = std::max(0.0, 1.0 - mass.value());
}

void check_common(const AdversarialSpec& spec) {
  if (spec.n < 1)
    throw Error(ErrorCode::invalid_argument, "adversarial target needs n >= 1");
  if (!(spec.M > 1.0))
    throw Error(ErrorCode::invalid_argument, "adversarial target needs M > 1");
}

void check_roots(const std::vector<double>& roots, Index n, double lo,
                 double hi) {
  if (roots.size() != n)
    throw Error(ErrorCode::invalid_argument, "exactly n roots are required");
  auto sorted = roots;
  std::sort(sorted.begin(), sorted.end());
  for (Index i = 0; i < n; ++i) {
    if (!(sorted[i] > lo && sorted[i] < hi))
      throw Error(ErrorCode::invalid_argument, "root outside the admissible range");
    if (i > 0 && !(sorted[i] > sorted[i - 1]))
      throw Error(ErrorCode::invalid_argument, "roots must be distinct");
  }
}

// Scaled finite-difference derivative e^{lambda t} dDelta_n/dt on a grid
// over (0, t_end]; returns the number of sign changes.
template <class Scaled, class Magnitude>
int derivative_sign_changes(Scaled scaled, Magnitude magnitude, double t_end) {
  constexpr int kGrid = 4000;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  int changes = 0;
  int last_sign = 0;
  for (int i = 1; i <= kGrid; ++i) {
    const double t = t_end * i / kGrid;
    const double h = 1e-4 * std::max(1.0, t);
    const double d = (scaled(t + h, t) - scaled(t - h, t)) / (2.0 * h);
    const double noise =
        64.0 * kEps * (magnitude(t + h, t) + magnitude(t - h, t)) / (2.0 * h);
    if (std::abs(d) <= noise) continue;
    const int sign = d > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++changes;
    last_sign = sign;
  }
  return changes;
}

}  // namespace

std::string_view to_string(GrowthFamily f) {
  return f == GrowthFamily::constant ? "constant" : "linear";
}

std::string Certificate::failures() const {
  std::string out;
  const auto add = [&](bool ok, const char* name) {
    if (ok) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  add(!degenerate, "degenerate");
  add(probability_bounds, "probability_bounds");
  add(sums_to_one, "sums_to_one");
  add(consistent, "consistent");
  add(root_count, "root_count");
  add(latest_beyond_M, "latest_beyond_M");
  add(sign_changes, "sign_changes");
  return out;
}

void require_pass(const Certificate& cert) {
  if (!cert.pass())
    throw Error(ErrorCode::verification_failure,
                "adversarial certificate failed: " + cert.failures());
}

AdversarialResult construct_constant(const AdversarialSpec& spec) {
  check_common(spec);
  const auto gamma = spec.seq.constant_gamma();
  const auto* mu_c = spec.seq.mu().get_if<family::Constant>();
  if (!gamma || !mu_c)
    throw Error(ErrorCode::invalid_argument,
                "constant construction needs constant gamma and mu");
  const Index n = spec.n;
  const double mu = mu_c->value;
  const double lambda = *gamma + mu;
  const double target = kRootStretch * mu * spec.M;

  AdversarialResult res;
  res.family = GrowthFamily::constant;
  res.n = n;
  res.M = spec.M;
  res.Q = stationary_prefix(spec.seq, n + 2);

  std::vector<double> roots;
  if (spec.roots) {
    check_roots(*spec.roots, n, 0.0, std::numeric_limits<double>::infinity());
    roots = *spec.roots;
  } else {
    roots.resize(n);
    res.Lambda = target / static_cast<double>(n);
    for (Index i = 0; i < n; ++i) roots[i] = res.Lambda * static_cast<double>(i + 1);
  }

  for (int pass = 0; pass < kMaxStretchPasses; ++pass) {
    const double largest = *std::max_element(roots.begin(), roots.end());
    if (largest <= mu * spec.M) {
      const double stretch = target / largest;
      for (double& r : roots) r *= stretch;
      res.Lambda *= stretch;
    }
    // p(x) = prod (x - rho_i); match the stationary-point polynomial
    // sum_{k<n} [mu D_{n-k-1} - lambda D_{n-k}] x^k/k! - lambda D_0 x^n/n!
    const RealPolynomial target_poly = RealPolynomial::from_roots(roots);
    const auto a = target_poly.coefficients();
    std::vector<double> delta(n + 1);
    double fact = 1.0;
    for (Index k = 1; k <= n; ++k) fact *= static_cast<double>(k);
    delta[0] = -a[n] * fact / lambda;
    for (Index k = n; k-- > 0;) {
      fact /= static_cast<double>(k + 1);
      delta[n - k] = (mu * delta[n - k - 1] - a[k] * fact) / lambda;
    }
    fit_to_distribution(res, delta);
    res.roots = roots;
    const auto tr = ConstantGrowthTransient{mu, lambda, res.initial_deltas};
    res.predicted_points = stationary_points_constant(tr, n).times;
    if (res.predicted_points.size() == n && res.predicted_points.back() > spec.M)
      break;
    for (double& r : roots) r *= kRootStretch;
  }
  res.certificate = verify(res, spec.seq);
  return res;
}

AdversarialResult construct_linear(const AdversarialSpec& spec) {
  check_common(spec);
  if (!is_binomial_family(spec.seq))
    throw Error(ErrorCode::invalid_argument,
                "linear construction needs constant gamma and mu_n = sigma (n + 1)");
  const Index n = spec.n;
  const double gamma = *spec.seq.constant_gamma();
  const double sigma = spec.seq.mu().get_if<family::Linear>()->sigma;
  const double lambda = gamma + sigma;
  if (sigma * spec.M > kLogBudget)
    throw Error(ErrorCode::invalid_argument,
                "sigma * M too large: the smallest root underflows");

  AdversarialResult res;
  res.family = GrowthFamily::linear;
  res.n = n;
  res.M = spec.M;
  res.Q = stationary_prefix(spec.seq, n + 2);

  std::vector<double> roots(n);
  if (spec.roots) {
    check_roots(*spec.roots, n, 0.0, 1.0);
    roots = *spec.roots;
  } else {
    // Smallest root just past e^{-sigma M}, the others evenly in [0.1, 0.9].
    // The constant coefficient is the product of the roots and has to stay
    // well above the rounding noise of the alternating binomial transform,
    // so the roots are kept as large as the target allows.
    roots[0] = 0.5 * std::exp(-sigma * spec.M);
    for (Index i = 1; i < n; ++i)
      roots[i] = n == 2 ? 0.5 : 0.1 + 0.8 * (i - 1.0) / (n - 2.0);
  }

  for (int pass = 0; pass < kMaxStretchPasses; ++pass) {
    const double smallest = *std::min_element(roots.begin(), roots.end());
    if (-std::log(smallest) / sigma <= spec.M) {
      const double stretch = 0.5 * std::exp(-sigma * spec.M) / smallest;
      for (double& r : roots) r *= stretch;
      res.Lambda *= stretch;
    }
    // coefficient of y^k is -C_k binom(n,k) (lambda + k sigma)
    const RealPolynomial target_poly = RealPolynomial::from_roots(roots);
    const auto a = target_poly.coefficients();
    std::vector<double> C(n + 1);
    for (Index k = 0; k <= n; ++k)
      C[k] = -a[k] / (binomial(n, k) * (lambda + static_cast<double>(k) * sigma));
    fit_to_distribution(res, initial_from_c(C, spec.seq));
    res.roots = roots;
    const auto tr =
        LinearGrowthTransient::from_initial(gamma, sigma, res.initial_deltas);
    res.predicted_points = stationary_points_linear(tr, n).times;
    if (res.predicted_points.size() == n && res.predicted_points.back() > spec.M)
      break;
    *std::min_element(roots.begin(), roots.end()) *= 0.5;
  }
  res.certificate = verify(res, spec.seq);
  return res;
}

Certificate verify(const AdversarialResult& res, const RateSequence& seq) {
  Certificate cert;
  const Index n = res.n;
  if (res.initial_deltas.size() != n + 1 || res.Q.size() < n + 1)
    throw Error(ErrorCode::invalid_argument, "result arrays have the wrong size");

  cert.probability_bounds = std::all_of(
      res.initial_P.begin(), res.initial_P.end(),
      [](double p) { return p >= -kProbTol && p <= 1.0 + kProbTol; });
  cert.sums_to_one = std::abs(compensated_sum(res.initial_P) - 1.0) <= 1e-12;
  cert.consistent = true;
  for (Index k = 0; k <= n; ++k)
    if (std::abs(res.initial_P[k] - res.Q[k] - res.initial_deltas[k]) > 1e-12)
      cert.consistent = false;

  const double gamma = seq.gamma_at(0);
  const double mu0 = seq.mu_at(0);
  StationaryPoints sp;
  int changes = 0;
  if (res.family == GrowthFamily::constant) {
    const ConstantGrowthTransient tr{mu0, gamma + mu0, res.initial_deltas};
    sp = stationary_points_constant(tr, n);
    if (!sp.degenerate) {
      const RealPolynomial f = f_poly(tr, n);
      const double t_end = 2.0 * (sp.times.empty() ? res.M : sp.times.back());
      changes = derivative_sign_changes(
          [&](double tau, double t) {
            return std::exp(-tr.lambda * (tau - t)) * f(tr.mu * tau);
          },
          [&](double tau, double t) {
            return std::exp(-tr.lambda * (tau - t)) * f.magnitude(tr.mu * tau);
          },
          t_end);
    }
  } else {
    const double sigma = seq.mu().get_if<family::Linear>()->sigma;
    const auto tr = LinearGrowthTransient::from_initial(gamma, sigma, res.initial_deltas);
    sp = stationary_points_linear(tr, n);
    if (!sp.degenerate) {
      std::vector<double> g(n + 1);
      for (Index k = 0; k <= n; ++k) g[k] = tr.C[k] * binomial(n, k);
      const RealPolynomial gp(g);
      const double lambda = gamma + sigma;
      const double t_end = 2.0 * (sp.times.empty() ? res.M : sp.times.back());
      changes = derivative_sign_changes(
          [&](double tau, double t) {
            return std::exp(-lambda * (tau - t)) * gp(std::exp(-sigma * tau));
          },
          [&](double tau, double t) {
            return std::exp(-lambda * (tau - t)) *
                   gp.magnitude(std::exp(-sigma * tau));
          },
          t_end);
    }
  }
  cert.degenerate = sp.degenerate;
  cert.points = sp.times;
  cert.root_count = !sp.degenerate && sp.times.size() == n;
  cert.latest_beyond_M = !sp.times.empty() && sp.times.back() > res.M;
  cert.sign_changes =
      !sp.degenerate && changes == static_cast<int>(sp.times.size());
  return cert;
}

}  // namespace rglab
