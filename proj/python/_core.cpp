#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mmb/bounds.hpp"
#include "mmb/cli.hpp"
#include "mmb/distribution.hpp"
#include "mmb/lambert.hpp"
#include "mmb/montecarlo.hpp"
#include "mmb/negdep.hpp"
#include "mmb/optimizer.hpp"

namespace py = pybind11;
using namespace mmb;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Missing-mass concentration bounds";
  m.attr("__version__") = MMB_VERSION;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::enum_<TailDirection>(m, "TailDirection")
      .value("Upper", TailDirection::Upper)
      .value("Lower", TailDirection::Lower)
      .value("TwoSided", TailDirection::TwoSided);

  py::enum_<BoundMethod>(m, "BoundMethod")
      .value("LinearNew", BoundMethod::LinearNew)
      .value("QuadraticNew", BoundMethod::QuadraticNew)
      .value("Theorem1Generic", BoundMethod::Theorem1Generic)
      .value("Bernstein", BoundMethod::Bernstein)
      .value("McDiarmid", BoundMethod::McDiarmid)
      .value("BaselinePrior", BoundMethod::BaselinePrior);

  py::enum_<GenericRoute>(m, "GenericRoute")
      .value("Bernstein", GenericRoute::Bernstein)
      .value("McDiarmid", GenericRoute::McDiarmid);

  m.def("lambert_w_m1", &lambert_w_m1, py::arg("x"));

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("method", &BoundReport::method)
      .def_readonly("n", &BoundReport::n)
      .def_readonly("epsilon", &BoundReport::epsilon)
      .def_readonly("gamma", &BoundReport::gamma)
      .def_readonly("a", &BoundReport::a)
      .def_readonly("tau", &BoundReport::tau)
      .def_readonly("c_coeff", &BoundReport::c_coeff)
      .def_readonly("exponent", &BoundReport::exponent)
      .def_readonly("bound", &BoundReport::bound)
      .def_readonly("direction", &BoundReport::direction)
      .def_readonly("note", &BoundReport::note)
      .def("__repr__", [](const BoundReport& r) {
        std::ostringstream os;
        os << "BoundReport(" << to_string(r.method) << ", " << to_string(r.direction) << ", n=" << r.n
           << ", epsilon=" << r.epsilon << ", exponent=" << r.exponent << ", bound=" << r.bound << ")";
        return os.str();
      });

  const auto upper = TailDirection::Upper;
  m.def("gamma_eps", &gamma_eps, py::arg("epsilon"));
  m.def("c_eps", &c_eps, py::arg("epsilon"));
  m.def("linear_bound", &linear_bound, py::arg("n"), py::arg("epsilon"), py::arg("direction") = upper);
  m.def("quadratic_bound", &quadratic_bound, py::arg("n"), py::arg("epsilon"), py::arg("direction") = upper);
  m.def("baseline_prior_bound", &baseline_prior_bound, py::arg("n"), py::arg("epsilon"),
        py::arg("direction") = upper);
  m.def("theorem1_generic", &theorem1_generic, py::arg("n"), py::arg("epsilon"), py::arg("gamma"),
        py::arg("f_inverse"), py::arg("scale"), py::arg("route"), py::arg("direction") = upper);
  m.def("compensation_gap", &compensation_gap, py::arg("epsilon"));
  m.def("bernstein_bound", &bernstein_bound, py::arg("epsilon"), py::arg("variance"), py::arg("alpha"));
  m.def("mcdiarmid_bound", &mcdiarmid_bound, py::arg("epsilon"), py::arg("c_sum"));

  m.def("optimize_gamma_numeric", &optimize_gamma_numeric, py::arg("epsilon"), py::arg("n") = 0);
  m.def("c_prime", &c_prime, py::arg("gamma"), py::arg("epsilon"));
  m.def("gamma_n", &gamma_n, py::arg("n"));
  m.def("c_prime_n", &c_prime_n, py::arg("n"));
  m.def("epsilon_crossover", &epsilon_crossover);
  py::class_<CrossoverResult>(m, "CrossoverResult")
      .def_readonly("target_constant", &CrossoverResult::target_constant)
      .def_readonly("n_star", &CrossoverResult::n_star)
      .def_readonly("cprime_at_n_star", &CrossoverResult::cprime_at_n_star)
      .def_readonly("cprime_before", &CrossoverResult::cprime_before);
  m.def("find_n_crossover", &find_n_crossover, py::arg("target_constant"));
  m.def("std_epsilon_grid", &std_epsilon_grid, py::arg("n"), py::arg("points") = 25);

  py::class_<DiscreteDistribution>(m, "DiscreteDistribution")
      .def(py::init([](std::vector<double> w, bool renormalize) {
             return DiscreteDistribution(std::move(w), renormalize
                                                           ? DiscreteDistribution::Normalization::Renormalize
                                                           : DiscreteDistribution::Normalization::Reject);
           }),
           py::arg("weights"), py::arg("renormalize") = false)
      .def_static("uniform", &DiscreteDistribution::uniform, py::arg("n_outcomes"))
      .def_static("zipf", &DiscreteDistribution::zipf, py::arg("n_outcomes"), py::arg("s") = 1.0)
      .def_static("geometric", &DiscreteDistribution::geometric, py::arg("n_outcomes"), py::arg("p") = 0.5)
      .def_static("from_family", &DiscreteDistribution::from_family, py::arg("spec"))
      .def_static("load", &DiscreteDistribution::load, py::arg("path"), py::arg("renormalize") = false)
      .def_property_readonly("weights", [](const DiscreteDistribution& d) {
        return std::vector<double>(d.weights().begin(), d.weights().end());
      })
      .def("__len__", &DiscreteDistribution::size);

  py::class_<MissingMassStats>(m, "MissingMassStats")
      .def_readonly("n", &MissingMassStats::n)
      .def_readonly("mean", &MissingMassStats::mean)
      .def_readonly("variance", &MissingMassStats::variance)
      .def_readonly("weighted_variance", &MissingMassStats::weighted_variance);
  m.def("missing_mass_stats", &missing_mass_stats, py::arg("dist"), py::arg("n"));
  m.def("exact_missing_mass_variance", &exact_missing_mass_variance, py::arg("dist"), py::arg("n"));
  m.def("occupancy_prob", &occupancy_prob, py::arg("w"), py::arg("n"));

  m.def(
      "exact_missing_mass_distribution",
      [](const DiscreteDistribution& d, long long n) {
        std::vector<std::pair<double, double>> atoms;
        for (const auto& a : exact_missing_mass_distribution(d, n).atoms) atoms.emplace_back(a.value, a.probability);
        return atoms;
      },
      py::arg("dist"), py::arg("n"), "List of (value, probability) atoms of the missing mass.");

  py::class_<TailEstimate>(m, "TailEstimate")
      .def_readonly("epsilon", &TailEstimate::epsilon)
      .def_readonly("direction", &TailEstimate::direction)
      .def_readonly("estimate", &TailEstimate::estimate)
      .def_readonly("std_error", &TailEstimate::std_error)
      .def_readonly("trials", &TailEstimate::trials)
      .def_readonly("seed", &TailEstimate::seed);
  m.def("empirical_tail", &empirical_tail, py::arg("dist"), py::arg("n"), py::arg("epsilon"),
        py::arg("direction"), py::arg("trials"), py::arg("seed"), py::arg("threads") = 0u,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "sample_missing_mass",
      [](const DiscreteDistribution& d, long long n, std::uint64_t seed, std::uint64_t trial) {
        return sample_missing_mass(d, n, seed, trial).missing_mass;
      },
      py::arg("dist"), py::arg("n"), py::arg("seed"), py::arg("trial") = 0);

  py::class_<LemmaReport>(m, "LemmaReport")
      .def_readonly("lemma", &LemmaReport::lemma)
      .def_readonly("instances", &LemmaReport::instances)
      .def_readonly("violations", &LemmaReport::violations)
      .def_readonly("max_residual", &LemmaReport::max_residual);
  m.def(
      "run_lemma_suites",
      [](std::uint64_t seed) {
        LemmaSuiteConfig cfg;
        cfg.seed = seed;
        return run_lemma_suites(cfg);
      },
      py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"mmbound"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int rc = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(rc, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line front end; returns (exit_code, stdout, stderr).");
}
