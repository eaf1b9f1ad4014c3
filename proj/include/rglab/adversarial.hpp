#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rglab/rates.hpp"

namespace rglab {

// Initial distributions for which Delta_n = P_n - Q_n has n positive
// stationary points, the last one later than a prescribed time M.

enum class GrowthFamily { constant, linear };
std::string_view to_string(GrowthFamily f);

struct AdversarialSpec {
  Index n = 1;
  double M = 2.0;  ///< must exceed 1
  RateSequence seq;
  /// Optional root placement: x = mu t roots (constant growth) or
  /// y = e^{-sigma t} roots in (0, 1) (linear growth). Stretched when the
  /// latest stationary time would not exceed M.
  std::optional<std::vector<double>> roots;
};

struct Certificate {
  bool degenerate = false;
  bool probability_bounds = false;  ///< 0 <= P_k(0) <= 1
  bool sums_to_one = false;         ///< |sum P_k(0) - 1| <= 1e-12
  bool consistent = false;          ///< P_k(0) = Q_k + Delta_k(0), k <= n
  bool root_count = false;          ///< exactly n positive stationary points
  bool latest_beyond_M = false;
  bool sign_changes = false;  ///< finite-difference derivative agrees
  std::vector<double> points;

  bool pass() const {
    return !degenerate && probability_bounds && sums_to_one && consistent &&
           root_count && latest_beyond_M && sign_changes;
  }
  /// Comma-separated names of the failed checks; empty on pass.
  std::string failures() const;
};

struct AdversarialResult {
  GrowthFamily family = GrowthFamily::constant;
  Index n = 0;
  double M = 0.0;
  std::vector<double> initial_P;       ///< P_0(0)..P_{n+1}(0); zero beyond
  std::vector<double> initial_deltas;  ///< Delta_0(0)..Delta_n(0)
  std::vector<double> Q;               ///< stationary Q_0..Q_{n+1}
  std::vector<double> roots;           ///< placed roots of the target polynomial
  std::vector<double> predicted_points;
  double epsilon = 1.0;
  double Lambda = 1.0;
  Certificate certificate;
};

AdversarialResult construct_constant(const AdversarialSpec& spec);
AdversarialResult construct_linear(const AdversarialSpec& spec);

/// Re-derives the stationary points from the stored Delta(0) and checks
/// them together with the probability constraints.
Certificate verify(const AdversarialResult& result, const RateSequence& seq);

/// Throws ErrorCode::verification_failure naming the failed checks.
void require_pass(const Certificate& cert);

}  // namespace rglab
