#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "rglab/rates.hpp"

namespace rglab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Invariant suite for one rate configuration: rate identities, the S0
/// telescoping identity, agreement of the two Q_n forms, the reset-sum
/// identity, monotone partial S0, the truncated mass balance and, where the
/// rates allow it, transient and model-variant consistency. Runs on at most
/// `threads` workers.
std::vector<CheckResult> run_invariant_suite(const RateSequence& seq, Index N,
                                             unsigned threads = 1);

/// Validates a JSON report previously written by the CLI.
CheckResult check_report(const nlohmann::json& report, const std::string& label);

/// RGLAB_THREADS if set and positive, else the hardware concurrency.
unsigned thread_budget();

}  // namespace rglab
