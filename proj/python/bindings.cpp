#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hookfit/hookfit.hpp"
#include "hookfit/serialize.hpp"

namespace py = pybind11;
using namespace hookfit;

namespace {

// Reports go to Python as plain dicts, with the same keys as the CLI's JSON.
py::object to_python(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

DistributionSpec spec_from(const std::string& kind, const py::kwargs& params) {
  auto get = [&](const char* name) {
    if (!params.contains(name)) {
      throw UsageError(std::string("missing parameter '") + name + "'");
    }
    return params[name].cast<double>();
  };
  switch (parse_kind(kind)) {
    case Kind::power_law:
      return PowerLawParams{get("alpha")};
    case Kind::hooked:
      return HookedPowerLawParams{get("alpha"), get("B")};
    case Kind::lognormal:
      return LognormalParams{get("mu"), get("sigma")};
  }
  throw UsageError("unknown distribution kind");
}

TruncatedView view_of(const std::vector<Count>& counts, Count x_min) {
  return truncate(CountDataset(counts), x_min);
}

}  // namespace

PYBIND11_MODULE(_hookfit, m) {
  m.doc() = "Discrete truncated power law, hooked power law and lognormal models";

  auto base = py::register_exception<Error>(m, "HookfitError", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<SupportError>(m, "SupportError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<EmptyDataError>(m, "EmptyDataError", base.ptr());
  py::register_exception<DegenerateDataError>(m, "DegenerateDataError", base.ptr());
  py::register_exception<EmptyTailError>(m, "EmptyTailError", base.ptr());
  py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());

  m.attr("DEFAULT_SEED") = kDefaultSeed;

  m.def(
      "load_counts",
      [](const std::string& path, const std::string& format) {
        const auto d = load_counts(path, parse_input_format(format));
        return py::make_tuple(d.counts(), d.zeros_dropped());
      },
      py::arg("path"), py::arg("format") = "plain",
      "Read a count file; returns (counts, zeros_dropped).");

  py::class_<DiscreteDistribution>(m, "Distribution")
      .def(py::init([](const std::string& kind, Count x_min, const py::kwargs& params) {
             return DiscreteDistribution(spec_from(kind, params), x_min);
           }),
           py::arg("kind"), py::arg("x_min") = 1)
      .def_property_readonly("x_min", &DiscreteDistribution::x_min)
      .def_property_readonly("kind",
                             [](const DiscreteDistribution& d) {
                               return std::string(short_name(d.kind()));
                             })
      .def_property_readonly("params",
                             [](const DiscreteDistribution& d) {
                               return to_python(to_json(d.spec()));
                             })
      .def_property_readonly("normalization_constant",
                             [](const DiscreteDistribution& d) {
                               return d.normalizer().value();
                             })
      .def("pmf", &DiscreteDistribution::pmf, py::arg("x"))
      .def("log_pmf", &DiscreteDistribution::log_pmf, py::arg("x"))
      .def("ccdf", &DiscreteDistribution::ccdf, py::arg("x"))
      .def(
          "sample",
          [](const DiscreteDistribution& d, std::size_t n, std::uint64_t seed) {
            return sample(d, n, seed);
          },
          py::arg("n"), py::arg("seed") = kDefaultSeed);

  m.def(
      "fit",
      [](const std::vector<Count>& counts, const std::string& kind, Count x_min) {
        return to_python(to_json(fit(parse_kind(kind), view_of(counts, x_min))));
      },
      py::arg("counts"), py::arg("kind"), py::arg("x_min") = 1,
      "Maximum-likelihood fit of one family ('pl', 'ln' or 'hooked').");

  m.def(
      "scan_x_min",
      [](const std::vector<Count>& counts, const std::string& kind,
         std::optional<std::vector<Count>> candidates, unsigned threads) {
        const CountDataset data(counts);
        const auto c = candidates ? *candidates : default_x_min_candidates(data);
        return to_python(to_json(scan_x_min(data, parse_kind(kind), c, threads)));
      },
      py::arg("counts"), py::arg("kind"), py::arg("candidates") = py::none(),
      py::arg("threads") = 1);

  m.def(
      "compare",
      [](const std::vector<Count>& counts, const std::string& first,
         const std::string& second, Count x_min) {
        const auto view = view_of(counts, x_min);
        const Kind a = parse_kind(first);
        const Kind b = parse_kind(second);
        const FitResult fa = fit(a, view);
        const FitResult fb = fit(b, view);
        if (a == Kind::power_law && b == Kind::hooked) return to_python(to_json(lrt_test(fa, fb)));
        return to_python(to_json(vuong_test(fa, fb, view)));
      },
      py::arg("counts"), py::arg("first"), py::arg("second"), py::arg("x_min") = 1,
      "LRT for ('pl', 'hooked'), Vuong test otherwise.");

  m.def(
      "analyze",
      [](const std::vector<Count>& counts, const std::string& x_min,
         const std::string& scan_kind, const std::string& label) {
        const auto policy = XminPolicy::parse(x_min, parse_kind(scan_kind));
        return to_python(to_json(analyze(CountDataset(counts, label), policy)));
      },
      py::arg("counts"), py::arg("x_min") = "all", py::arg("scan_kind") = "pl",
      py::arg("label") = "");

  m.def(
      "ci_width_study",
      [](const std::string& kind, const std::vector<double>& alpha_grid,
         const std::vector<Count>& n_grid, int replicates, std::uint64_t seed, double B,
         unsigned threads) {
        return to_python(to_json(ci_width_study(parse_kind(kind), alpha_grid, n_grid,
                                                StudyOptions{replicates, seed, threads}, B)));
      },
      py::arg("kind"), py::arg("alpha_grid"), py::arg("n_grid"), py::arg("replicates") = 100,
      py::arg("seed") = kDefaultSeed, py::arg("B") = 10.0, py::arg("threads") = 1);

  m.def(
      "lognormal_ci_study",
      [](const std::vector<double>& mu_grid, const std::vector<double>& sigma_grid,
         const std::vector<Count>& n_grid, int replicates, std::uint64_t seed,
         unsigned threads) {
        return to_python(to_json(lognormal_ci_study(mu_grid, sigma_grid, n_grid,
                                                    StudyOptions{replicates, seed, threads})));
      },
      py::arg("mu_grid"), py::arg("sigma_grid"), py::arg("n_grid"), py::arg("replicates") = 100,
      py::arg("seed") = kDefaultSeed, py::arg("threads") = 1);

  m.def(
      "ll_contour",
      [](const std::vector<Count>& counts, const std::string& kind,
         const std::vector<double>& p1, const std::vector<double>& p2, Count x_min) {
        return to_python(to_json(ll_contour(view_of(counts, x_min), parse_kind(kind), p1, p2)));
      },
      py::arg("counts"), py::arg("kind"), py::arg("p1_axis"), py::arg("p2_axis"),
      py::arg("x_min") = 1);

  m.def(
      "ridge_demo",
      [](double alpha, double B, std::size_t n, std::uint64_t seed) {
        return to_python(to_json(ridge_demo(alpha, B, n, seed)));
      },
      py::arg("alpha") = 3.0, py::arg("B") = 10.0, py::arg("n") = 500,
      py::arg("seed") = kDefaultSeed);

  m.def(
      "attachment_to_hooked",
      [](double beta, double m) {
        const auto h = attachment_to_hooked({beta, m});
        return py::make_tuple(h.alpha, h.B);
      },
      py::arg("beta"), py::arg("m"), "Returns (alpha, B).");
  m.def(
      "hooked_to_attachment",
      [](double alpha, double B) {
        const auto a = hooked_to_attachment({alpha, B});
        return py::make_tuple(a.beta, a.m);
      },
      py::arg("alpha"), py::arg("B"), "Returns (beta, m).");
  m.def("slope_tolerance_threshold", &slope_tolerance_threshold, py::arg("T"), py::arg("B"));
}
