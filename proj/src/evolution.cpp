#include "rglab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rglab/error.hpp"
#include "rglab/numeric.hpp"

namespace rglab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Rates tabulated once per integration.
class TruncatedSystem {
 public:
  TruncatedSystem(const RateSequence& seq, const ModelVariant& v, Index N)
      : gamma_(N + 1), mu_(N + 1), lambda_(N + 1) {
    validate(v, seq);
    for (Index n = 0; n <= N; ++n) {
      gamma_[n] = seq.gamma_at(n);
      mu_[n] = seq.mu_at(n);
      lambda_[n] = gamma_[n] + mu_[n];
    }
    std::visit(overloaded{
                   [](const variant::Original&) {},
                   [this](const variant::Modified& m) {
                     reset_extra_ = m.R * lambda_[0] * (1.0 - m.S0);
                   },
                   [this](const variant::ConstantReset& c) {
                     constant_source_ = gamma_[0] / c.S0;
                     constant_reset_ = true;
                   },
               },
               v);
  }

  Index size() const { return gamma_.size(); }

  // out has N + 2 entries: dP_0..dP_N and d(leak)/dt.
  void eval(const double* P, double* out) const {
    const Index N = size() - 1;
    if (constant_reset_) {
      out[0] = constant_source_ - lambda_[0] * P[0];
    } else {
      CompensatedSum inflow;
      for (Index n = 0; n <= N; ++n) inflow += (gamma_[n] + reset_extra_) * P[n];
      inflow -= lambda_[0] * P[0];
      out[0] = inflow.value();
    }
    for (Index n = 1; n <= N; ++n)
      out[n] = -lambda_[n] * P[n] + mu_[n - 1] * P[n - 1];
    out[N + 1] = mu_[N] * P[N];
  }

 private:
  std::vector<double> gamma_, mu_, lambda_;
  double reset_extra_ = 0.0;
  double constant_source_ = 0.0;
  bool constant_reset_ = false;
};

class Rk4 {
 public:
  explicit Rk4(const TruncatedSystem& sys)
      : sys_(sys), k1_(sys.size() + 1), k2_(k1_), k3_(k1_), k4_(k1_), tmp_(k1_) {}

  void step(const std::vector<double>& y, double h, std::vector<double>& out) {
    const Index m = y.size();
    sys_.eval(y.data(), k1_.data());
    for (Index i = 0; i < m; ++i) tmp_[i] = y[i] + 0.5 * h * k1_[i];
    sys_.eval(tmp_.data(), k2_.data());
    for (Index i = 0; i < m; ++i) tmp_[i] = y[i] + 0.5 * h * k2_[i];
    sys_.eval(tmp_.data(), k3_.data());
    for (Index i = 0; i < m; ++i) tmp_[i] = y[i] + h * k3_[i];
    sys_.eval(tmp_.data(), k4_.data());
    out.resize(m);
    for (Index i = 0; i < m; ++i)
      out[i] = y[i] + h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

 private:
  const TruncatedSystem& sys_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

TruncatedState unpack(double t, const std::vector<double>& y) {
  TruncatedState s;
  s.t = t;
  s.P.assign(y.begin(), y.end() - 1);
  s.leak = y.back();
  return s;
}

// Weights of the derivative at x of the interpolating polynomial through
// the given nodes.
std::vector<double> derivative_weights(const std::vector<double>& nodes,
                                       double x) {
  const std::size_t m = nodes.size();
  std::vector<double> w(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double denom = 1.0;
    for (std::size_t i = 0; i < m; ++i)
      if (i != j) denom *= nodes[j] - nodes[i];
    double num = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
      if (l == j) continue;
      double prod = 1.0;
      for (std::size_t i = 0; i < m; ++i)
        if (i != j && i != l) prod *= x - nodes[i];
      num += prod;
    }
    w[j] = num / denom;
  }
  return w;
}

}  // namespace

std::string_view variant_name(const ModelVariant& v) {
  return std::visit(
      overloaded{
          [](const variant::Original&) { return std::string_view("original"); },
          [](const variant::Modified&) { return std::string_view("modified"); },
          [](const variant::ConstantReset&) {
            return std::string_view("constant-reset");
          },
      },
      v);
}

void validate(const ModelVariant& v, const RateSequence& seq) {
  const auto check_s0 = [](double s0) {
    if (!(s0 > 0.0 && s0 <= 1.0))
      throw Error(ErrorCode::invalid_argument, "variant needs 0 < S0 <= 1");
  };
  std::visit(overloaded{
                 [](const variant::Original&) {},
                 [&](const variant::Modified& m) {
                   check_s0(m.S0);
                   if (!(m.R > 0.0))
                     throw Error(ErrorCode::invalid_argument,
                                 "modified variant needs R > 0");
                 },
                 [&](const variant::ConstantReset& c) {
                   check_s0(c.S0);
                   if (!seq.constant_gamma())
                     throw Error(ErrorCode::invalid_argument,
                                 "constant-reset variant needs constant gamma");
                 },
             },
             v);
}

double TruncatedState::mass() const { return compensated_sum(P); }

std::vector<double> rhs(const TruncatedState& state, const ModelVariant& v,
                        const RateSequence& seq) {
  if (state.P.empty())
    throw Error(ErrorCode::invalid_argument, "state has no components");
  const TruncatedSystem sys(seq, v, state.N());
  std::vector<double> out(state.P.size() + 1);
  sys.eval(state.P.data(), out.data());
  out.pop_back();
  return out;
}

Trajectory integrate(const TruncatedState& initial, const ModelVariant& v,
                     const RateSequence& seq, double t_end, double tol,
                     const IntegrateOptions& opts) {
  if (initial.P.empty())
    throw Error(ErrorCode::invalid_argument, "state has no components");
  if (!(t_end > initial.t))
    throw Error(ErrorCode::invalid_argument, "t_end must exceed the start time");
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tol must be positive");

  const TruncatedSystem sys(seq, v, initial.N());
  Rk4 rk(sys);

  std::vector<double> y(initial.P);
  y.push_back(initial.leak);
  std::vector<double> full, half, two_half;

  Trajectory traj;
  traj.states.push_back(initial);
  double t = initial.t;
  double h = opts.fixed_step > 0.0 ? opts.fixed_step
                                   : std::min(opts.initial_step, t_end - t);
  double next_save = opts.save_every > 0.0 ? t + opts.save_every : t_end;

  while (t < t_end) {
    if (traj.accepted + traj.rejected >= opts.max_steps)
      throw StepUnderflow(t, "step budget exhausted at t=" + std::to_string(t));
    const double stop = std::min(next_save, t_end);
    const bool hits_stop = t + h >= stop;
    const double dt = hits_stop ? stop - t : h;

    if (opts.fixed_step > 0.0) {
      rk.step(y, dt, full);
      y.swap(full);
      ++traj.accepted;
    } else {
      if (dt < 1e-14 * std::max(1.0, std::abs(t)))
        throw StepUnderflow(t, "step size underflow at t=" + std::to_string(t));
      rk.step(y, dt, full);
      rk.step(y, 0.5 * dt, half);
      rk.step(half, 0.5 * dt, two_half);
      double err = 0.0;
      for (Index i = 0; i < y.size(); ++i)
        err = std::max(err, std::abs(two_half[i] - full[i]) / 15.0);
      if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
      const double factor =
          err == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 4.0);
      if (err > tol) {
        ++traj.rejected;
        h = dt * factor;
        continue;
      }
      ++traj.accepted;
      y.swap(two_half);
      if (!hits_stop || factor < 1.0) h = dt * factor;
    }

    t = hits_stop ? stop : t + dt;
    if (hits_stop) {
      traj.states.push_back(unpack(t, y));
      next_save = opts.save_every > 0.0 ? next_save + opts.save_every : t_end;
      if (opts.save_every > 0.0 && t_end - next_save < 1e-12 * opts.save_every)
        next_save = t_end;
    } else if (opts.save_every <= 0.0) {
      traj.states.push_back(unpack(t, y));
    }
  }
  return traj;
}

double mass_identity_rhs(const TruncatedState& state, const ModelVariant& v,
                         const RateSequence& seq) {
  const Index N = state.N();
  const double outflow = seq.mu_at(N) * state.P[N];
  const double mass = state.mass();
  return std::visit(
      overloaded{
          [&](const variant::Original&) { return -outflow; },
          [&](const variant::Modified& m) {
            return m.R * seq.lambda_at(0) * (1.0 - m.S0) * mass - outflow;
          },
          [&](const variant::ConstantReset& c) {
            const double g = seq.gamma_at(0);
            // K = gamma / S0 - gamma equals Q_0 lambda_0 (1 - S0) at stationarity
            return g * (1.0 - mass) + (g / c.S0 - g) - outflow;
          },
      },
      v);
}

std::vector<FluxRow> mass_flux_report(const Trajectory& traj,
                                      const ModelVariant& v,
                                      const RateSequence& seq) {
  const auto& s = traj.states;
  const std::size_t m = s.size();
  std::vector<double> t(m), mass(m);
  for (std::size_t i = 0; i < m; ++i) {
    t[i] = s[i].t;
    mass[i] = s[i].mass();
  }
  std::vector<FluxRow> rows(m);
  const std::size_t width = std::min<std::size_t>(5, m);
  for (std::size_t i = 0; i < m; ++i) {
    double d = 0.0;
    if (width >= 2) {
      // centred stencil, shifted inward at the ends
      std::size_t lo = i >= width / 2 ? i - width / 2 : 0;
      lo = std::min(lo, m - width);
      std::vector<double> nodes(t.begin() + lo, t.begin() + lo + width);
      const auto w = derivative_weights(nodes, t[i]);
      CompensatedSum acc;
      for (std::size_t j = 0; j < width; ++j) acc += w[j] * mass[lo + j];
      d = acc.value();
    }
    const double id = mass_identity_rhs(s[i], v, seq);
    rows[i] = {t[i], mass[i], s[i].leak, d, id, d - id};
  }
  return rows;
}

Index default_truncation(const RateSequence& seq) {
  constexpr Index kCap = 100000;
  CompensatedSum log_q;
  Index n = 1;
  for (; n < kCap; ++n) {
    log_q += seq.log_mu_at(n - 1);
    log_q -= seq.log_lambda_at(n);
    if (log_q.value() < std::log(1e-14)) break;
  }
  return std::max<Index>(200, n);
}

}  // namespace rglab
