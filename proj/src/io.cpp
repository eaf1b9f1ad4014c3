#include "rglab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rglab/error.hpp"

namespace rglab::io {

namespace {

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw Error(ErrorCode::config,
                std::string("rate family needs numeric field '") + key + "'");
  return j.at(key).get<double>();
}

RateFamily family_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw Error(ErrorCode::config, "rate family needs a string 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "constant") return RateFamily::constant(number(j, "value"));
    if (kind == "linear") return RateFamily::linear(number(j, "sigma"), number(j, "b"));
    if (kind == "power") return RateFamily::power(number(j, "c"), number(j, "s"));
    if (kind == "exponential")
      return RateFamily::exponential(number(j, "c"), number(j, "a"));
    if (kind == "table") {
      if (!j.contains("values") || !j.at("values").is_array())
        throw Error(ErrorCode::config, "table family needs a 'values' array");
      auto ext = family::Extension::error;
      if (j.contains("extension")) {
        const auto e = j.at("extension").get<std::string>();
        if (e == "hold-last")
          ext = family::Extension::hold_last;
        else if (e != "error")
          throw Error(ErrorCode::config, "table extension must be error|hold-last");
      }
      return RateFamily::table(j.at("values").get<std::vector<double>>(), ext);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    throw Error(ErrorCode::config, e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::config, e.what());
  }
  throw Error(ErrorCode::config, "unknown rate family kind '" + kind + "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::config, "cannot write " + path);
  return os;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RateSequence rates_from_json(const json& j) {
  if (!j.is_object() || !j.contains("gamma") || !j.contains("mu"))
    throw Error(ErrorCode::config, "rate config needs 'gamma' and 'mu' objects");
  return RateSequence(family_from_json(j.at("gamma")), family_from_json(j.at("mu")));
}

RateSequence load_rates(const std::string& path) {
  return rates_from_json(read_json_file(path));
}

json to_json(const RateFamily& f) {
  json j;
  j["kind"] = std::string(f.kind_name());
  if (const auto* c = f.get_if<family::Constant>()) j["value"] = c->value;
  if (const auto* l = f.get_if<family::Linear>()) {
    j["sigma"] = l->sigma;
    j["b"] = l->b;
  }
  if (const auto* p = f.get_if<family::Power>()) {
    j["c"] = p->c;
    j["s"] = p->s;
  }
  if (const auto* e = f.get_if<family::Exponential>()) {
    j["c"] = e->c;
    j["a"] = e->a;
  }
  if (const auto* t = f.get_if<family::Table>()) {
    j["values"] = t->values;
    j["extension"] =
        t->extension == family::Extension::hold_last ? "hold-last" : "error";
  }
  return j;
}

json to_json(const RateSequence& seq) {
  return {{"gamma", to_json(seq.gamma())}, {"mu", to_json(seq.mu())}};
}

json to_json(const S0Result& s0) {
  return {
      {"partial", s0.partial_value},
      {"N", s0.N},
      {"tail_log_sum", s0.tail_log_sum},
      {"classification", std::string(to_string(s0.classification))},
      {"bracket", {s0.lower, s0.upper}},
      {"estimate", s0.estimate},
      {"r_tail", std::string(to_string(s0.tail))},
  };
}

json to_json(const StationaryResult& st) {
  return {
      {"Q0", st.Q0},
      {"S0", to_json(st.s0)},
      {"boundary_limit", st.boundary_limit.value},
      {"boundary_uncertainty", st.boundary_limit.uncertainty},
      {"normalizable", std::string(to_string(st.normalizable))},
      {"normalization_sum", st.normalization_sum},
      {"tail_estimate", st.tail_estimate},
      {"tail_model", std::string(to_string(st.tail_model))},
  };
}

json stationary_points_json(Index n, const StationaryPoints& sp) {
  json j = {{"n", n}, {"points", sp.times}, {"count", sp.times.size()}};
  if (sp.degenerate) j["degenerate"] = true;
  return j;
}

json to_json(const Certificate& cert, const AdversarialResult& res) {
  return {
      {"family", std::string(to_string(res.family))},
      {"n", res.n},
      {"M", res.M},
      {"points", cert.points},
      {"epsilon", res.epsilon},
      {"Lambda", res.Lambda},
      {"roots", res.roots},
      {"checks",
       {{"degenerate", cert.degenerate},
        {"probability_bounds", cert.probability_bounds},
        {"sums_to_one", cert.sums_to_one},
        {"consistent", cert.consistent},
        {"root_count", cert.root_count},
        {"latest_beyond_M", cert.latest_beyond_M},
        {"sign_changes", cert.sign_changes}}},
      {"pass", cert.pass()},
  };
}

void write_q_csv(std::ostream& os, const std::vector<double>& Q) {
  os << "n,Q\n";
  for (std::size_t n = 0; n < Q.size(); ++n) os << n << ',' << format_double(Q[n]) << '\n';
}

void write_initial_csv(std::ostream& os, const std::vector<double>& P) {
  os << "k,P0\n";
  for (std::size_t k = 0; k < P.size(); ++k) os << k << ',' << format_double(P[k]) << '\n';
}

std::vector<double> read_initial_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::config, "cannot read " + path);
  std::vector<double> P;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == 'k') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(ErrorCode::config, "malformed initial-distribution row: " + line);
    std::size_t k = 0;
    double v = 0.0;
    try {
      k = std::stoul(line.substr(0, comma));
      v = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::config, "malformed initial-distribution row: " + line);
    }
    if (k >= P.size()) P.resize(k + 1, 0.0);
    P[k] = v;
  }
  if (P.empty()) throw Error(ErrorCode::config, path + " has no rows");
  return P;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.states.empty()) return;
  const Index N = traj.states.front().N();
  os << 't';
  for (Index n = 0; n <= N; ++n) os << ",P" << n;
  os << ",mass,leak\n";
  for (const auto& s : traj.states) {
    os << format_double(s.t);
    for (double p : s.P) os << ',' << format_double(p);
    os << ',' << format_double(s.mass()) << ',' << format_double(s.leak) << '\n';
  }
}

void write_diagnostics_csv(std::ostream& os, const std::vector<FluxRow>& rows) {
  os << "t,mass,dmass_dt_numeric,identity_rhs,residual\n";
  for (const auto& r : rows)
    os << format_double(r.t) << ',' << format_double(r.mass) << ','
       << format_double(r.dmass_dt_numeric) << ',' << format_double(r.identity_rhs)
       << ',' << format_double(r.residual) << '\n';
}

void write_delta_csv(std::ostream& os, const std::vector<double>& times,
                     const std::vector<std::vector<double>>& deltas) {
  os << 't';
  for (std::size_t n = 0; n < deltas.size(); ++n) os << ",Delta_" << n;
  os << '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << format_double(times[i]);
    for (const auto& d : deltas) os << ',' << format_double(d[i]);
    os << '\n';
  }
}

void write_json_file(const std::string& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::config, "cannot read " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::config, path + ": " + e.what());
  }
}

}  // namespace rglab::io
