#pragma once

#include <string_view>
#include <vector>

#include "rglab/rates.hpp"

namespace rglab {

enum class S0Class { exactly_one, strictly_below_one, undetermined };
std::string_view to_string(S0Class c);

/// The convergence sum S0 = sum_n Z_n, evaluated at a finite N through the
/// closed form 1 - exp(-sum_{n<=N} log(1 + r_n)).
struct S0Result {
  double partial_value = 0.0;
  Index N = 0;
  double tail_log_sum = 0.0;
  S0Class classification = S0Class::undetermined;
  double lower = 0.0;  ///< == partial_value
  double upper = 1.0;
  /// Best available value of the infinite sum: 1 when exactly one, the
  /// tail-corrected partial value below one, the bracket midpoint otherwise.
  double estimate = 0.0;
  RTail tail = RTail::unknown;
};

enum class Normalizable { yes, no, undetermined };
std::string_view to_string(Normalizable n);

/// How the sum beyond the truncation index is accounted for.
enum class TailModel { none, geometric, power_law, truncated };
std::string_view to_string(TailModel m);

struct BoundaryLimit {
  double value = 0.0;
  double uncertainty = 0.0;
};

struct StationaryResult {
  double Q0 = 0.0;
  std::vector<double> values;  ///< Q_0..Q_N
  S0Result s0;
  BoundaryLimit boundary_limit;
  Normalizable normalizable = Normalizable::undetermined;
  double normalization_sum = 0.0;  ///< sum_{n<=N} Q_n after normalization
  double tail_estimate = 0.0;      ///< estimated sum_{n>N} Q_n
  TailModel tail_model = TailModel::none;
};

/// Q_0..Q_N from lambda_n Q_n = mu_{n-1} Q_{n-1}, accumulated in log space.
/// Throws ErrorCode::overflow when a value leaves the double range.
std::vector<double> q_iterate(const RateSequence& seq, double Q0, Index N);

/// Q_n = (Q0 lambda_0 / gamma_n) r_n prod_{k<=n} 1 / (1 + r_k).
double q_product_form(const RateSequence& seq, double Q0, Index n);

/// Z_n = r_n prod_{k<=n} 1 / (1 + r_k).
double z_at(const RateSequence& seq, Index n);

S0Result s0_compute(const RateSequence& seq, Index N_max,
                    double tail_threshold = 40.0);

/// lim mu_N Q_N = lambda_0 Q0 (1 - S0).
BoundaryLimit boundary_limit(const RateSequence& seq, double Q0,
                             const S0Result& s0);

/// Verdict from the families' asymptotics; tables give undetermined.
Normalizable normalizability(const RateSequence& seq, const S0Result& s0);

enum class TailPolicy {
  estimate,   ///< sum over 0..N plus the modelled tail equals one
  truncated,  ///< sum over 0..N equals one (stationary for the truncated system)
};

/// Fixes Q0 by normalization. Throws not_normalizable / undetermined.
StationaryResult normalize(const RateSequence& seq, Index N, const S0Result& s0,
                           TailPolicy policy = TailPolicy::estimate);

/// Sum over n > N of f_n for f_n ~ A (n + h)^{-q}, q > 1, fitted from two
/// consecutive terms f_N and f_{N+1}.
double power_tail_sum(double f_N, double f_N1, Index N, double q);

}  // namespace rglab
