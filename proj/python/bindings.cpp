// Python bindings. Structured values cross the boundary as canonical JSON
// text in the same versioned formats the CLI reads and writes; the package
// __init__ turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fockseq/fockseq.hpp"

namespace py = pybind11;
using fockseq::io::Json;

namespace {

std::string dump(const Json& value) { return fockseq::io::canonical_dump(value); }

fockseq::FockCoefficients functional(const std::string& text) {
  return fockseq::io::functional_from_json(fockseq::io::parse(text));
}

fockseq::RandomFunctional random_functional(const std::string& text) {
  return fockseq::io::random_functional_from_json(fockseq::io::parse(text));
}

fockseq::FunctionalSequence sequence(const std::string& text) {
  return fockseq::io::sequence_from_json(fockseq::io::parse(text));
}

fockseq::FiniteSubset subset(const std::vector<unsigned>& elements) {
  return fockseq::io::subset_from_json(Json(elements));
}

Json fit_to_json(const fockseq::GrowthFit& fit) {
  Json curve = Json::array();
  for (const auto& point : fit.curve) {
    curve.push_back(Json{{"order", point.order},
                         {"scale", point.scale},
                         {"maximizer", fockseq::io::subset_to_json(point.maximizer)}});
  }
  return Json{{"curve", std::move(curve)},
              {"selected", fit.selected ? fockseq::io::certificate_to_json(*fit.selected) : Json(nullptr)}};
}

Json report_to_json(const fockseq::NormalMartingaleReport& report) {
  auto condition = [](const fockseq::ConditionReport& c) {
    return Json{{"name", c.name}, {"passed", c.passed}, {"max_deviation", c.max_deviation}};
  };
  return Json{{"mean", condition(report.mean)}, {"variance", condition(report.variance)}, {"passed", report.passed()}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fock-transform calculus for discrete-time normal martingales";

  py::register_exception<fockseq::Error>(m, "Error", PyExc_ValueError);

  m.def("weight", [](const std::vector<unsigned>& sigma) {
    return fockseq::weight_to_string(fockseq::weight(subset(sigma)));
  });
  m.def("weighted_series", [](double p, unsigned horizon) {
    const auto s = fockseq::weighted_series(p, fockseq::TruncatedDomain(horizon));
    return dump(Json{{"sum", s.sum}, {"product", s.product}, {"bound", s.bound ? Json(*s.bound) : Json(nullptr)}});
  });
  m.def("random_functional", [](unsigned horizon, std::uint64_t seed) {
    return dump(fockseq::io::random_functional_to_json(
        fockseq::random_functional(fockseq::SampleSpace(horizon), seed)));
  });
  m.def("chaos_expand", [](const std::string& f) {
    return dump(fockseq::io::functional_to_json(fockseq::chaos_expand(random_functional(f))));
  });
  m.def("synthesize", [](const std::string& c, unsigned horizon) {
    return dump(fockseq::io::random_functional_to_json(
        fockseq::synthesize(functional(c), fockseq::SampleSpace(horizon))));
  });
  m.def("conditional_expectation", [](const std::string& f, unsigned n) {
    return dump(fockseq::io::random_functional_to_json(fockseq::conditional_expectation(random_functional(f), n)));
  });
  m.def("verify_normal_martingale", [](unsigned horizon, double tol) {
    return dump(report_to_json(fockseq::verify_normal_martingale(fockseq::SampleSpace(horizon), tol)));
  });
  m.def("sobolev_norm", [](const std::string& phi, double p, unsigned horizon) {
    return fockseq::sobolev_norm(functional(phi), p, fockseq::TruncatedDomain(horizon)).value;
  });
  m.def("fit_growth", [](const std::string& phi, unsigned horizon, const std::vector<double>& grid) {
    return dump(fit_to_json(fockseq::fit_growth(functional(phi), fockseq::TruncatedDomain(horizon), grid)));
  });
  m.def("classical_to_sequence", [](const std::string& f) {
    return dump(fockseq::io::sequence_to_json(fockseq::classical_to_sequence(random_functional(f))));
  });
  m.def("is_generalized_martingale", [](const std::string& seq, unsigned horizon, double tol) {
    const fockseq::TruncatedDomain domain(horizon);
    return dump(fockseq::io::martingale_check_to_json(fockseq::is_generalized_martingale(sequence(seq), domain, tol),
                                                      domain, tol));
  });
  m.def("strong_convergence_test",
        [](const std::string& seq, unsigned horizon, double tol, const std::vector<double>& grid) {
          return dump(fockseq::io::verdict_to_json(
              fockseq::strong_convergence_test(sequence(seq), fockseq::TruncatedDomain(horizon), tol, grid)));
        });
  m.def("martingale_limit", [](const std::string& seq, unsigned horizon, double tol) {
    return dump(fockseq::io::functional_to_json(
        fockseq::martingale_limit(sequence(seq), fockseq::TruncatedDomain(horizon), tol)));
  });
  m.def("ones", [](unsigned horizon) {
    return dump(fockseq::io::functional_to_json(fockseq::ones(), fockseq::TruncatedDomain(horizon)));
  });
  m.def("psi0", [](unsigned n) { return dump(fockseq::io::functional_to_json(fockseq::psi0(n))); });
  m.def("psi0_sequence", [](unsigned last) { return dump(fockseq::io::sequence_to_json(fockseq::psi0_sequence(last))); });
  m.def("convolve", [](const std::string& a, const std::string& b) {
    return dump(fockseq::io::functional_to_json(fockseq::convolve(functional(a), functional(b))));
  });
  m.def("approximate", [](const std::string& phi, unsigned n) {
    return dump(fockseq::io::functional_to_json(fockseq::approximate(functional(phi), n)));
  });
  m.def("residual_curve", [](const std::string& phi, double q, unsigned horizon) {
    return fockseq::residual_curve(functional(phi), q, fockseq::TruncatedDomain(horizon), std::nullopt);
  });
}
