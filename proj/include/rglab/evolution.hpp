#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "rglab/rates.hpp"

namespace rglab {

namespace variant {
/// dP_0/dt = sum_{n<=N} gamma_n P_n - lambda_0 P_0
struct Original {};
/// dP_0/dt = sum_{n<=N} (gamma_n + R lambda_0 (1 - S0)) P_n - lambda_0 P_0
struct Modified {
  double R;
  double S0;
};
/// dP_0/dt = -lambda_0 P_0 + gamma / S0, constant gamma only
struct ConstantReset {
  double S0;
};
}  // namespace variant

using ModelVariant =
    std::variant<variant::Original, variant::Modified, variant::ConstantReset>;

std::string_view variant_name(const ModelVariant& v);
/// Throws invalid_argument for R <= 0, S0 outside (0, 1], or a
/// constant-reset variant over a non-constant gamma.
void validate(const ModelVariant& v, const RateSequence& seq);

struct TruncatedState {
  double t = 0.0;
  std::vector<double> P;  ///< P_0..P_N
  double leak = 0.0;      ///< integral of mu_N P_N dt

  Index N() const { return P.size() - 1; }
  double mass() const;
};

/// Time derivative of P_0..P_N. Rows n >= 1 follow the growth equation;
/// row 0 follows the variant. The flow mu_N P_N leaves through the
/// truncation boundary.
std::vector<double> rhs(const TruncatedState& state, const ModelVariant& v,
                        const RateSequence& seq);

struct IntegrateOptions {
  /// Save spacing; 0 saves every accepted step.
  double save_every = 0.0;
  double initial_step = 1e-3;
  /// > 0 switches off error control and takes steps of this size.
  double fixed_step = 0.0;
  std::size_t max_steps = 100'000'000;
};

struct Trajectory {
  std::vector<TruncatedState> states;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Classical RK4 with step doubling: a step is accepted when the
/// Richardson estimate |y_{h/2,h/2} - y_h| / 15 is below tol in every
/// component, the leak included. Throws StepUnderflow.
Trajectory integrate(const TruncatedState& initial, const ModelVariant& v,
                     const RateSequence& seq, double t_end, double tol,
                     const IntegrateOptions& opts = {});

struct FluxRow {
  double t;
  double mass;
  double leak;
  double dmass_dt_numeric;
  double identity_rhs;
  double residual;
};

/// Per saved state: total mass, leak, a finite-difference d(mass)/dt and
/// the exact truncated mass-balance identity for the variant.
std::vector<FluxRow> mass_flux_report(const Trajectory& traj,
                                      const ModelVariant& v,
                                      const RateSequence& seq);

/// Right-hand side of the truncated mass balance d/dt sum_{n<=N} P_n.
double mass_identity_rhs(const TruncatedState& state, const ModelVariant& v,
                         const RateSequence& seq);

/// max(200, first n with unnormalized Q_n < 1e-14 Q_0), capped at 10^5.
Index default_truncation(const RateSequence& seq);

}  // namespace rglab
