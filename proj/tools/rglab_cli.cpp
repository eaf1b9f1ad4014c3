#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rglab/adversarial.hpp"
#include "rglab/checks.hpp"
#include "rglab/error.hpp"
#include "rglab/evolution.hpp"
#include "rglab/io.hpp"
#include "rglab/stationary.hpp"
#include "rglab/transient.hpp"

namespace fs = std::filesystem;
using namespace rglab;
using nlohmann::json;

namespace {

struct Options {
  std::string rates;
  std::string out = ".";
  std::string initial;
  std::string variant = "original";
  std::vector<std::string> reports;
  long long nmax = 0;  // 0: command default
  double tmax = 10.0;
  double tol = 1e-8;
  long long n = 5;
  double M = 10.0;
  double save_every = 0.0;
  long long samples = 200;
};

Error config_error(const std::string& what) { return Error(ErrorCode::config, what); }

std::ofstream open_csv(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw config_error("cannot write " + path.string());
  return os;
}

fs::path out_dir(const Options& o) {
  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw config_error("output directory unavailable: " + o.out);
  return dir;
}

Index truncation(const Options& o, const RateSequence& seq) {
  return o.nmax > 0 ? static_cast<Index>(o.nmax) : default_truncation(seq);
}

/// Initial distribution from --initial, or all mass in state 0.
std::vector<double> initial_distribution(const Options& o, Index size) {
  std::vector<double> P(size, 0.0);
  if (o.initial.empty()) {
    P[0] = 1.0;
    return P;
  }
  const auto read = io::read_initial_csv(o.initial);
  std::copy_n(read.begin(), std::min(read.size(), P.size()), P.begin());
  return P;
}

int cmd_stationary(const Options& o) {
  const auto seq = io::load_rates(o.rates);
  const Index N = truncation(o, seq);
  const auto st = normalize(seq, N, s0_compute(seq, N));
  const auto dir = out_dir(o);
  auto csv = open_csv(dir / "stationary.csv");
  io::write_q_csv(csv, st.values);
  io::write_json_file((dir / "stationary.json").string(), io::to_json(st));
  std::cout << "Q0 " << io::format_double(st.Q0) << "  S0 "
            << to_string(st.s0.classification) << "\n";
  return 0;
}

int cmd_s0(const Options& o) {
  const auto seq = io::load_rates(o.rates);
  const Index N = o.nmax > 0 ? static_cast<Index>(o.nmax) : 100000;
  const auto s0 = s0_compute(seq, N);
  io::write_json_file((out_dir(o) / "s0.json").string(), io::to_json(s0));
  std::cout << "partial " << io::format_double(s0.partial_value) << "  "
            << to_string(s0.classification) << "\n";
  return 0;
}

int cmd_transient(const Options& o) {
  const auto seq = io::load_rates(o.rates);
  const auto gamma = seq.constant_gamma();
  const bool constant_mu = seq.mu().get_if<family::Constant>() != nullptr;
  if (!gamma || !(constant_mu || is_binomial_family(seq)))
    throw config_error("transient needs constant gamma with constant or linear (b = 1) mu");
  if (o.n < 0) throw config_error("--n must be non-negative");
  const Index n = static_cast<Index>(o.n);

  const Index N = std::max<Index>(truncation(o, seq), n + 1);
  const auto st = normalize(seq, N, s0_compute(seq, N));
  const auto P = initial_distribution(o, n + 1);
  std::vector<double> d0(n + 1);
  for (Index k = 0; k <= n; ++k) d0[k] = P[k] - st.values[k];

  const auto samples = std::max<long long>(o.samples, 2);
  std::vector<double> times(samples);
  for (long long i = 0; i < samples; ++i)
    times[i] = o.tmax * static_cast<double>(i) / static_cast<double>(samples - 1);

  std::vector<std::vector<double>> deltas(n + 1, std::vector<double>(times.size()));
  json points = json::array();
  if (constant_mu) {
    const auto tr = ConstantGrowthTransient::from_rates(*gamma, seq.mu_at(0), d0);
    for (std::size_t i = 0; i < times.size(); ++i)
      for (Index k = 0; k <= n; ++k) deltas[k][i] = delta_constant(tr, k, times[i]);
    for (Index k = 0; k <= n; ++k)
      points.push_back(io::stationary_points_json(k, stationary_points_constant(tr, k)));
  } else {
    const double sigma = seq.mu().get_if<family::Linear>()->sigma;
    const auto tr = LinearGrowthTransient::from_initial(*gamma, sigma, d0);
    for (std::size_t i = 0; i < times.size(); ++i)
      for (Index k = 0; k <= n; ++k) deltas[k][i] = delta_linear(tr, k, times[i]);
    for (Index k = 0; k <= n; ++k)
      points.push_back(io::stationary_points_json(k, stationary_points_linear(tr, k)));
  }

  const auto dir = out_dir(o);
  auto csv = open_csv(dir / "transient.csv");
  io::write_delta_csv(csv, times, deltas);
  io::write_json_file((dir / "stationary_points.json").string(), points);
  return 0;
}

int cmd_adversarial(const Options& o) {
  const auto seq = io::load_rates(o.rates);
  if (o.n < 1) throw config_error("--n must be at least 1");
  if (!(o.M > 1.0)) throw config_error("--M must exceed 1");
  AdversarialSpec spec{static_cast<Index>(o.n), o.M, seq, std::nullopt};

  AdversarialResult res;
  if (seq.constant_gamma() && seq.mu().get_if<family::Constant>())
    res = construct_constant(spec);
  else if (is_binomial_family(seq))
    res = construct_linear(spec);
  else
    throw config_error("adversarial needs constant gamma with constant or linear (b = 1) mu");

  const auto dir = out_dir(o);
  auto csv = open_csv(dir / "adversarial.csv");
  io::write_initial_csv(csv, res.initial_P);
  io::write_json_file((dir / "certificate.json").string(), io::to_json(res.certificate, res));
  std::cout << "certificate " << (res.certificate.pass() ? "pass" : "fail") << ", "
            << res.certificate.points.size() << " points\n";
  require_pass(res.certificate);
  return 0;
}

ModelVariant make_variant(const Options& o, const RateSequence& seq, Index N) {
  if (o.variant == "original") return variant::Original{};
  // S0 and Q are taken on the same truncation so that Q is stationary for
  // the truncated modified system.
  const auto s0 = s0_compute(seq, N);
  if (o.variant == "modified") {
    const auto st = normalize(seq, N, s0, TailPolicy::truncated);
    return variant::Modified{st.Q0, s0.partial_value};
  }
  if (o.variant == "constant-reset") return variant::ConstantReset{s0.partial_value};
  throw config_error("unknown variant: " + o.variant);
}

int cmd_evolve(const Options& o) {
  const auto seq = io::load_rates(o.rates);
  const Index N = truncation(o, seq);
  const auto v = make_variant(o, seq, N);
  validate(v, seq);
  if (!(o.tmax > 0.0) || !(o.tol > 0.0)) throw config_error("--tmax and --tol must be positive");

  TruncatedState init;
  init.P = initial_distribution(o, N + 1);
  IntegrateOptions opts;
  opts.save_every = o.save_every > 0.0 ? o.save_every : o.tmax / 100.0;
  const auto traj = integrate(init, v, seq, o.tmax, o.tol, opts);

  const auto dir = out_dir(o);
  auto csv = open_csv(dir / "trajectory.csv");
  io::write_trajectory_csv(csv, traj);
  auto diag = open_csv(dir / "diagnostics.csv");
  io::write_diagnostics_csv(diag, mass_flux_report(traj, v, seq));
  std::cout << variant_name(v) << ": " << traj.accepted << " steps accepted, "
            << traj.rejected << " rejected\n";
  return 0;
}

int cmd_check(const Options& o) {
  std::vector<CheckResult> results;
  if (!o.rates.empty()) {
    const auto seq = io::load_rates(o.rates);
    const Index N = o.nmax > 0 ? static_cast<Index>(o.nmax) : 2000;
    results = run_invariant_suite(seq, N, thread_budget());
  }
  for (const auto& path : o.reports)
    results.push_back(check_report(io::read_json_file(path), fs::path(path).filename().string()));
  if (results.empty()) throw config_error("check needs --rates or --report");

  json checks = json::array();
  bool all = true;
  for (const auto& r : results) {
    checks.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    all = all && r.pass;
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
  }
  io::write_json_file((out_dir(o) / "check.json").string(),
                      {{"checks", checks}, {"pass", all}});
  if (!all) throw Error(ErrorCode::verification_failure, "invariant check failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reset-growth master equation toolkit"};
  app.require_subcommand(1);
  Options o;

  const auto rates = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("--rates", o.rates, "JSON rate config")->check(CLI::ExistingFile);
    if (required) opt->required();
    sub->add_option("--out", o.out, "output directory");
  };

  auto* stationary = app.add_subcommand("stationary", "normalized stationary candidate Q_n");
  rates(stationary);
  stationary->add_option("--nmax", o.nmax, "truncation index");

  auto* s0 = app.add_subcommand("s0", "convergence sum S0 and its classification");
  rates(s0);
  s0->add_option("--nmax", o.nmax, "partial-sum index (default 100000)");

  auto* transient = app.add_subcommand("transient", "closed-form Delta_n(t) and stationary points");
  rates(transient);
  transient->add_option("--n", o.n, "highest state index");
  transient->add_option("--nmax", o.nmax, "truncation for Q");
  transient->add_option("--tmax", o.tmax, "end of time grid");
  transient->add_option("--samples", o.samples, "time grid points");
  transient->add_option("--initial", o.initial, "CSV k,P0")->check(CLI::ExistingFile);

  auto* adversarial = app.add_subcommand("adversarial", "initial data with late stationary points");
  rates(adversarial);
  adversarial->add_option("--n", o.n, "state index")->required();
  adversarial->add_option("--M", o.M, "time the last stationary point must exceed")->required();

  auto* evolve = app.add_subcommand("evolve", "integrate the truncated system");
  rates(evolve);
  evolve->add_option("--nmax", o.nmax, "truncation index");
  evolve->add_option("--tmax", o.tmax, "end time");
  evolve->add_option("--tol", o.tol, "local error tolerance");
  evolve->add_option("--variant", o.variant, "reset variant")
      ->check(CLI::IsMember({"original", "modified", "constant-reset"}));
  evolve->add_option("--save-every", o.save_every, "save spacing (default tmax/100)");
  evolve->add_option("--initial", o.initial, "CSV k,P0")->check(CLI::ExistingFile);

  auto* check = app.add_subcommand("check", "invariant suite and report validation");
  rates(check, false);
  check->add_option("--nmax", o.nmax, "truncation index (default 2000)");
  check->add_option("--report", o.reports, "JSON report to re-parse")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*stationary) return cmd_stationary(o);
    if (*s0) return cmd_s0(o);
    if (*transient) return cmd_transient(o);
    if (*adversarial) return cmd_adversarial(o);
    if (*evolve) return cmd_evolve(o);
    if (*check) return cmd_check(o);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return e.code() == ErrorCode::config ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
