#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "rglab/adversarial.hpp"
#include "rglab/evolution.hpp"
#include "rglab/rates.hpp"
#include "rglab/stationary.hpp"
#include "rglab/transient.hpp"

namespace rglab::io {

using nlohmann::json;

/// {"gamma": {"kind": ..., ...}, "mu": {...}}. Throws ErrorCode::config.
RateSequence rates_from_json(const json& j);
RateSequence load_rates(const std::string& path);
json to_json(const RateFamily& f);
json to_json(const RateSequence& seq);

json to_json(const S0Result& s0);
json to_json(const StationaryResult& st);
json stationary_points_json(Index n, const StationaryPoints& sp);
json to_json(const Certificate& cert, const AdversarialResult& res);

/// Round-trip float formatting: 17 significant digits, '.' decimal point.
std::string format_double(double x);

void write_q_csv(std::ostream& os, const std::vector<double>& Q);
void write_initial_csv(std::ostream& os, const std::vector<double>& P);
/// Reads "k,P0" rows (header optional) into a dense vector.
std::vector<double> read_initial_csv(const std::string& path);
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_diagnostics_csv(std::ostream& os, const std::vector<FluxRow>& rows);
/// t,Delta_0,...,Delta_n on the given time grid; deltas[n][i] is Delta_n(times[i]).
void write_delta_csv(std::ostream& os, const std::vector<double>& times,
                     const std::vector<std::vector<double>>& deltas);

void write_json_file(const std::string& path, const json& j);
json read_json_file(const std::string& path);

}  // namespace rglab::io
