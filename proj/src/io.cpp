#include "fockseq/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fockseq/error.hpp"

namespace fockseq::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

void dump_into(const Json& value, std::string& out) {
  switch (value.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ',';
        out += Json(key).dump();
        out += ':';
        dump_into(item, out);
        first = false;
      }
      out += '}';
      return;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const Json& item : value) {
        if (!first) out += ',';
        dump_into(item, out);
        first = false;
      }
      out += ']';
      return;
    }
    case Json::value_t::number_float: out += format_double(value.get<double>()); return;
    default: out += value.dump(); return;
  }
}

const Json& member(const Json& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) parse_error(std::string("missing field \"") + key + "\"");
  return object.at(key);
}

void expect_format(const Json& object, const char* format) {
  const Json& tag = member(object, "format");
  if (!tag.is_string() || tag.get<std::string>() != format) {
    parse_error(std::string("expected format \"") + format + "\", got " + tag.dump());
  }
}

double number(const Json& value, const char* what) {
  if (!value.is_number()) parse_error(std::string(what) + " must be a number");
  return value.get<double>();
}

unsigned index_value(const Json& value, const char* what) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    parse_error(std::string(what) + " must be a nonnegative integer");
  }
  return value.get<unsigned>();
}

Json complex_to_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

Complex complex_from_json(const Json& value) {
  const double re = number(member(value, "re"), "re");
  const double im = value.contains("im") ? number(value.at("im"), "im") : 0.0;
  return {re, im};
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string canonical_dump(const Json& value) {
  std::string out;
  dump_into(value, out);
  return out;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_error(e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << content;
}

Json subset_to_json(FiniteSubset sigma) {
  Json out = Json::array();
  for (unsigned k : sigma.elements()) out.push_back(k);
  return out;
}

FiniteSubset subset_from_json(const Json& value) {
  if (!value.is_array()) parse_error("subset must be an array of indices");
  std::vector<unsigned> elements;
  for (const Json& item : value) {
    const unsigned k = index_value(item, "subset element");
    if (k > kMaxSubsetIndex) parse_error("subset element " + std::to_string(k) + " exceeds 63");
    if (!elements.empty() && elements.back() >= k) parse_error("subset elements must be strictly ascending");
    elements.push_back(k);
  }
  return FiniteSubset::from_elements(elements);
}

Json functional_to_json(const FockCoefficients& phi, const std::optional<TruncatedDomain>& restrict_to) {
  FockCoefficients table_form = phi;
  if (restrict_to) {
    table_form = phi.restricted(*restrict_to);
  } else if (phi.is_rule_backed()) {
    throw Error(ErrorCode::InvalidArgument, "rule-backed functional needs a domain for serialization");
  }
  Json coefficients = Json::array();
  for (const auto& [sigma, value] : table_form.table()) {
    Json entry = complex_to_json(value);
    entry["sigma"] = subset_to_json(sigma);
    coefficients.push_back(std::move(entry));
  }
  return Json{{"format", kFunctionalFormat},
              {"support_bound", *table_form.support_bound()},
              {"coefficients", std::move(coefficients)}};
}

FockCoefficients functional_from_json(const Json& value) {
  expect_format(value, kFunctionalFormat);
  const Json& bound = member(value, "support_bound");
  const Json& coefficients = member(value, "coefficients");
  if (!coefficients.is_array()) parse_error("coefficients must be an array");
  CoefficientTable table;
  for (const Json& entry : coefficients) {
    const FiniteSubset sigma = subset_from_json(member(entry, "sigma"));
    if (table.contains(sigma)) parse_error("duplicate sigma " + sigma.to_string());
    table.emplace(sigma, complex_from_json(entry));
  }
  if (bound.is_null()) return FockCoefficients(std::move(table));
  const unsigned n = index_value(bound, "support_bound");
  for (const auto& entry : table) {
    if (!indicator(entry.first, n)) {
      parse_error("coefficient at " + entry.first.to_string() + " exceeds support_bound " + std::to_string(n));
    }
  }
  return FockCoefficients(std::move(table), n);
}

Json random_functional_to_json(const RandomFunctional& f) {
  Json values = Json::array();
  for (Complex v : f.values()) values.push_back(complex_to_json(v));
  return Json{{"format", kRandomFunctionalFormat}, {"horizon", f.space().horizon()}, {"values", std::move(values)}};
}

RandomFunctional random_functional_from_json(const Json& value) {
  expect_format(value, kRandomFunctionalFormat);
  const unsigned horizon = index_value(member(value, "horizon"), "horizon");
  if (horizon > kDefaultEnumerationGuard) parse_error("horizon beyond enumeration guard");
  const Json& values = member(value, "values");
  if (!values.is_array()) parse_error("values must be an array");
  const SampleSpace space(horizon);
  if (values.size() != space.point_count()) {
    parse_error("horizon " + std::to_string(horizon) + " needs " + std::to_string(space.point_count()) + " values");
  }
  std::vector<Complex> points;
  points.reserve(values.size());
  for (const Json& v : values) points.push_back(complex_from_json(v));
  return RandomFunctional(space, std::move(points));
}

Json sequence_to_json(const FunctionalSequence& seq, const std::optional<TruncatedDomain>& restrict_to) {
  Json terms = Json::array();
  for (const FockCoefficients& term : seq.materialize()) terms.push_back(functional_to_json(term, restrict_to));
  return Json{{"format", kSequenceFormat}, {"terms", std::move(terms)}};
}

FunctionalSequence sequence_from_json(const Json& value) {
  std::vector<FockCoefficients> terms;
  if (value.is_array()) {
    if (value.empty()) parse_error("sequence array needs a format header");
    expect_format(value.front(), kSequenceFormat);
    for (std::size_t i = 1; i < value.size(); ++i) terms.push_back(functional_from_json(value[i]));
  } else {
    expect_format(value, kSequenceFormat);
    const Json& items = member(value, "terms");
    if (!items.is_array()) parse_error("terms must be an array");
    for (const Json& item : items) terms.push_back(functional_from_json(item));
  }
  if (terms.empty()) parse_error("sequence has no terms");
  return FunctionalSequence(std::move(terms));
}

Json certificate_to_json(const GrowthCertificate& cert) {
  return Json{{"scale", cert.scale}, {"order", cert.order}, {"domain_checked", cert.domain_checked.max_index()}};
}

Json martingale_check_to_json(const MartingaleCheck& check, const TruncatedDomain& domain, double tol) {
  Json witness = nullptr;
  if (check.witness) {
    witness = Json{{"n", check.witness->n},
                   {"sigma", subset_to_json(check.witness->sigma)},
                   {"deviation", check.witness->deviation}};
  }
  return Json{{"format", kMartingaleCheckFormat},
              {"holds", check.holds},
              {"tol", tol},
              {"domain_max_index", domain.max_index()},
              {"max_deviation", check.max_deviation},
              {"witness", std::move(witness)}};
}

Json verdict_to_json(const ConvergenceVerdict& verdict) {
  Json curve = Json::array();
  for (const GrowthPoint& point : verdict.sup_fit.curve) {
    curve.push_back(Json{{"order", point.order}, {"scale", point.scale}, {"maximizer", subset_to_json(point.maximizer)}});
  }
  Json witness = nullptr;
  if (verdict.witness) {
    witness = Json{{"sigma", subset_to_json(verdict.witness->sigma)}, {"explanation", verdict.witness->explanation}};
  }
  return Json{{"format", kVerdictFormat},
              {"status", to_string(verdict.status)},
              {"generalized_martingale", verdict.generalized_martingale},
              {"tail_start", verdict.tail_start},
              {"limit", verdict.limit ? functional_to_json(*verdict.limit) : Json(nullptr)},
              {"uniform_certificate",
               verdict.uniform_certificate ? certificate_to_json(*verdict.uniform_certificate) : Json(nullptr)},
              {"witness", std::move(witness)},
              {"growth_curve", std::move(curve)}};
}

std::string verdict_to_csv(const ConvergenceVerdict& verdict) {
  std::string out = "sigma,stabilization_index,sup_abs,certificate_margin\n";
  for (const SigmaDiagnostic& row : verdict.diagnostics) {
    out += '"' + row.sigma.to_string() + "\"," + std::to_string(row.stabilization_index) + ',' +
           format_double(row.sup_abs) + ',';
    if (row.certificate_margin) out += format_double(*row.certificate_margin);
    out += '\n';
  }
  return out;
}

std::string residual_curve_to_csv(std::span<const double> curve) {
  std::string out = "n,residual\n";
  for (std::size_t n = 0; n < curve.size(); ++n) out += std::to_string(n) + ',' + format_double(curve[n]) + '\n';
  return out;
}

}  // namespace fockseq::io
