#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "rglab/adversarial.hpp"
#include "rglab/checks.hpp"
#include "rglab/error.hpp"
#include "rglab/evolution.hpp"
#include "rglab/io.hpp"
#include "rglab/stationary.hpp"
#include "rglab/transient.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace rglab;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reset-growth master equation toolkit";

  static py::exception<Error> rglab_error(m, "RglabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(rglab_error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<RateFamily>(m, "RateFamily")
      .def_static("constant", &RateFamily::constant, py::arg("value"))
      .def_static("linear", &RateFamily::linear, py::arg("sigma"), py::arg("b"))
      .def_static("power", &RateFamily::power, py::arg("c"), py::arg("s"))
      .def_static("exponential", &RateFamily::exponential, py::arg("c"), py::arg("a"))
      .def_static(
          "table",
          [](std::vector<double> values, bool hold_last) {
            return RateFamily::table(std::move(values), hold_last ? family::Extension::hold_last
                                                                  : family::Extension::error);
          },
          py::arg("values"), py::arg("hold_last") = false)
      .def("at", &RateFamily::at)
      .def("log_at", &RateFamily::log_at)
      .def_property_readonly("kind", [](const RateFamily& f) { return std::string(f.kind_name()); });

  py::class_<RateSequence>(m, "RateSequence")
      .def(py::init<RateFamily, RateFamily>(), py::arg("gamma"), py::arg("mu"))
      .def("gamma_at", &RateSequence::gamma_at)
      .def("mu_at", &RateSequence::mu_at)
      .def("lambda_at", &RateSequence::lambda_at)
      .def("r_at", &RateSequence::r_at);

  m.def("load_rates", &io::load_rates, py::arg("path"));
  m.def("classify_r_tail", [](const RateSequence& s) { return std::string(to_string(classify_r_tail(s))); });

  py::class_<S0Result>(m, "S0Result")
      .def_readonly("partial_value", &S0Result::partial_value)
      .def_readonly("N", &S0Result::N)
      .def_readonly("tail_log_sum", &S0Result::tail_log_sum)
      .def_readonly("lower", &S0Result::lower)
      .def_readonly("upper", &S0Result::upper)
      .def_readonly("estimate", &S0Result::estimate)
      .def_property_readonly("classification",
                             [](const S0Result& s) { return std::string(to_string(s.classification)); });

  py::class_<StationaryResult>(m, "StationaryResult")
      .def_readonly("Q0", &StationaryResult::Q0)
      .def_readonly("values", &StationaryResult::values)
      .def_readonly("s0", &StationaryResult::s0)
      .def_readonly("normalization_sum", &StationaryResult::normalization_sum)
      .def_readonly("tail_estimate", &StationaryResult::tail_estimate)
      .def_property_readonly("boundary_limit", [](const StationaryResult& s) { return s.boundary_limit.value; })
      .def_property_readonly("normalizable",
                             [](const StationaryResult& s) { return std::string(to_string(s.normalizable)); })
      .def_property_readonly("tail_model",
                             [](const StationaryResult& s) { return std::string(to_string(s.tail_model)); });

  m.def("s0_compute", &s0_compute, py::arg("seq"), py::arg("n_max"), py::arg("tail_threshold") = 40.0);
  m.def("q_iterate", &q_iterate, py::arg("seq"), py::arg("Q0"), py::arg("N"));
  m.def(
      "normalize",
      [](const RateSequence& seq, Index N, const S0Result& s0, bool truncated) {
        return normalize(seq, N, s0, truncated ? TailPolicy::truncated : TailPolicy::estimate);
      },
      py::arg("seq"), py::arg("N"), py::arg("s0"), py::arg("truncated") = false);

  py::class_<ConstantGrowthTransient>(m, "ConstantGrowthTransient")
      .def(py::init(&ConstantGrowthTransient::from_rates), py::arg("gamma"), py::arg("mu"),
           py::arg("initial_deltas"))
      .def("delta", [](const ConstantGrowthTransient& t, Index n, double time) { return delta_constant(t, n, time); })
      .def("stationary_points",
           [](const ConstantGrowthTransient& t, Index n) { return stationary_points_constant(t, n).times; });

  py::class_<LinearGrowthTransient>(m, "LinearGrowthTransient")
      .def(py::init([](double gamma, double sigma, std::vector<double> d0) {
             return LinearGrowthTransient::from_initial(gamma, sigma, d0);
           }),
           py::arg("gamma"), py::arg("sigma"), py::arg("initial_deltas"))
      .def_readonly("C", &LinearGrowthTransient::C)
      .def("delta", [](const LinearGrowthTransient& t, Index n, double time) { return delta_linear(t, n, time); })
      .def("stationary_points",
           [](const LinearGrowthTransient& t, Index n) { return stationary_points_linear(t, n).times; });

  py::class_<Certificate>(m, "Certificate")
      .def_readonly("points", &Certificate::points)
      .def_property_readonly("passed", &Certificate::pass)
      .def("failures", &Certificate::failures);

  py::class_<AdversarialResult>(m, "AdversarialResult")
      .def_readonly("n", &AdversarialResult::n)
      .def_readonly("M", &AdversarialResult::M)
      .def_readonly("initial_P", &AdversarialResult::initial_P)
      .def_readonly("initial_deltas", &AdversarialResult::initial_deltas)
      .def_readonly("roots", &AdversarialResult::roots)
      .def_readonly("epsilon", &AdversarialResult::epsilon)
      .def_readonly("Lambda", &AdversarialResult::Lambda)
      .def_readonly("certificate", &AdversarialResult::certificate)
      .def_property_readonly("family", [](const AdversarialResult& r) { return std::string(to_string(r.family)); });

  m.def(
      "construct_adversarial",
      [](const RateSequence& seq, Index n, double M, std::optional<std::vector<double>> roots) {
        AdversarialSpec spec{n, M, seq, std::move(roots)};
        if (is_binomial_family(seq)) return construct_linear(spec);
        return construct_constant(spec);
      },
      py::arg("seq"), py::arg("n"), py::arg("M"), py::arg("roots") = py::none(),
      "Linear-growth construction for mu_n = sigma (n + 1), constant-growth otherwise.");

  py::class_<variant::Original>(m, "Original").def(py::init<>());
  py::class_<variant::Modified>(m, "Modified")
      .def(py::init<double, double>(), py::arg("R"), py::arg("S0"))
      .def_readonly("R", &variant::Modified::R)
      .def_readonly("S0", &variant::Modified::S0);
  py::class_<variant::ConstantReset>(m, "ConstantReset")
      .def(py::init<double>(), py::arg("S0"))
      .def_readonly("S0", &variant::ConstantReset::S0);

  py::class_<TruncatedState>(m, "TruncatedState")
      .def_readonly("t", &TruncatedState::t)
      .def_readonly("P", &TruncatedState::P)
      .def_readonly("leak", &TruncatedState::leak)
      .def("mass", &TruncatedState::mass);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("states", &Trajectory::states)
      .def_readonly("accepted", &Trajectory::accepted)
      .def_readonly("rejected", &Trajectory::rejected);

  m.def(
      "integrate",
      [](std::vector<double> P0, const ModelVariant& v, const RateSequence& seq, double t_end, double tol,
         double save_every) {
        validate(v, seq);
        IntegrateOptions opts;
        opts.save_every = save_every;
        py::gil_scoped_release release;
        return integrate(TruncatedState{0.0, std::move(P0), 0.0}, v, seq, t_end, tol, opts);
      },
      py::arg("P0"), py::arg("variant"), py::arg("seq"), py::arg("t_end"), py::arg("tol") = 1e-8,
      py::arg("save_every") = 0.0);

  py::class_<FluxRow>(m, "FluxRow")
      .def_readonly("t", &FluxRow::t)
      .def_readonly("mass", &FluxRow::mass)
      .def_readonly("leak", &FluxRow::leak)
      .def_readonly("dmass_dt_numeric", &FluxRow::dmass_dt_numeric)
      .def_readonly("identity_rhs", &FluxRow::identity_rhs)
      .def_readonly("residual", &FluxRow::residual);
  m.def("mass_flux_report", &mass_flux_report, py::arg("trajectory"), py::arg("variant"), py::arg("seq"));

  m.def(
      "run_invariant_suite",
      [](const RateSequence& seq, Index N, unsigned threads) {
        py::list out;
        for (const auto& r : run_invariant_suite(seq, N, threads))
          out.append(py::dict(py::arg("name") = r.name, py::arg("pass") = r.pass, py::arg("detail") = r.detail));
        return out;
      },
      py::arg("seq"), py::arg("N") = 2000, py::arg("threads") = 1);

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
