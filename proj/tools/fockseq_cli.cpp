// fockseq: command-line front end for the generalized-functional toolkit.
//
// Exit codes:
//   0  success, check passed, or CONVERGED
//   1  check failed or DIVERGED
//   2  INCONCLUSIVE
//   3  usage error
//   4  invalid input (malformed file, bad argument value)
//   5  numeric or domain error (overflow, guard exceeded, order violation)

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fockseq/fockseq.hpp"

namespace {

using fockseq::io::Json;

enum ExitCode : int {
  kOk = 0,
  kFailed = 1,
  kInconclusive = 2,
  kUsage = 3,
  kBadInput = 4,
  kNumeric = 5,
};

struct Options {
  std::optional<unsigned> horizon;
  double tol = fockseq::kDefaultTolerance;
  std::string pgrid = "0,0.5,1,1.5,2,3,4";
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw fockseq::Error(fockseq::ErrorCode::InvalidArgument, "bad --pgrid entry '" + item + "'");
    }
  }
  if (grid.empty()) throw fockseq::Error(fockseq::ErrorCode::InvalidArgument, "--pgrid is empty");
  return grid;
}

void emit(const Options& opts, const std::string& content) {
  if (opts.out.empty()) {
    std::cout << content;
  } else {
    fockseq::io::write_file(opts.out, content);
  }
}

void emit_json(const Options& opts, const Json& value) { emit(opts, fockseq::io::canonical_dump(value) + "\n"); }

unsigned sequence_horizon(const fockseq::FunctionalSequence& seq, const Options& opts) {
  if (opts.horizon) return *opts.horizon;
  unsigned horizon = 0;
  for (const auto& term : seq.materialize()) {
    if (const auto bound = term.support_bound()) horizon = std::max(horizon, *bound);
  }
  return horizon;
}

fockseq::FunctionalSequence read_sequence(const std::string& path) {
  return fockseq::io::sequence_from_json(fockseq::io::parse(fockseq::io::read_file(path)));
}

fockseq::FockCoefficients read_functional(const std::string& path) {
  return fockseq::io::functional_from_json(fockseq::io::parse(fockseq::io::read_file(path)));
}

fockseq::RandomFunctional read_random_functional(const std::string& path) {
  return fockseq::io::random_functional_from_json(fockseq::io::parse(fockseq::io::read_file(path)));
}

int cmd_lambda(const std::string& sigma_text) {
  const fockseq::FiniteSubset sigma = fockseq::io::subset_from_json(fockseq::io::parse(sigma_text));
  std::cout << fockseq::weight_to_string(fockseq::weight(sigma)) << "\n";
  return kOk;
}

int cmd_series(double p, const Options& opts) {
  const unsigned horizon = opts.horizon.value_or(12);
  const fockseq::WeightedSeries series = fockseq::weighted_series(p, fockseq::TruncatedDomain(horizon));
  const bool product_match = std::abs(series.sum - series.product) <= 1e-12 * std::abs(series.product);
  const bool within_bound = series.bound && series.sum <= *series.bound;
  Json out{{"p", p},
           {"horizon", horizon},
           {"sum", series.sum},
           {"product", series.product},
           {"bound", series.bound ? Json(*series.bound) : Json(nullptr)},
           {"bound_applies", series.bound.has_value()},
           {"product_match", product_match},
           {"pass", product_match && (!series.bound || within_bound)}};
  emit_json(opts, out);
  return product_match && (!series.bound || within_bound) ? kOk : kFailed;
}

int cmd_expand(const std::string& input, const Options& opts) {
  emit_json(opts, fockseq::io::functional_to_json(fockseq::chaos_expand(read_random_functional(input))));
  return kOk;
}

int cmd_synthesize(const std::string& input, const Options& opts) {
  const fockseq::FockCoefficients c = read_functional(input);
  const unsigned horizon = opts.horizon.value_or(c.support_bound().value_or(0));
  emit_json(opts, fockseq::io::random_functional_to_json(fockseq::synthesize(c, fockseq::SampleSpace(horizon))));
  return kOk;
}

int cmd_martingale_check(const std::string& input, const Options& opts) {
  const fockseq::FunctionalSequence seq = read_sequence(input);
  const fockseq::TruncatedDomain domain(sequence_horizon(seq, opts));
  const fockseq::MartingaleCheck check = fockseq::is_generalized_martingale(seq, domain, opts.tol);
  emit_json(opts, fockseq::io::martingale_check_to_json(check, domain, opts.tol));
  return check.holds ? kOk : kFailed;
}

int cmd_converge(const std::string& input, const Options& opts) {
  const fockseq::FunctionalSequence seq = read_sequence(input);
  const fockseq::TruncatedDomain domain(sequence_horizon(seq, opts));
  const std::vector<double> grid = parse_grid(opts.pgrid);
  const fockseq::ConvergenceVerdict verdict = fockseq::strong_convergence_test(seq, domain, opts.tol, grid);
  if (opts.format == "csv") {
    emit(opts, fockseq::io::verdict_to_csv(verdict));
  } else {
    emit_json(opts, fockseq::io::verdict_to_json(verdict));
  }
  switch (verdict.status) {
    case fockseq::ConvergenceStatus::Converged: return kOk;
    case fockseq::ConvergenceStatus::Diverged: return kFailed;
    case fockseq::ConvergenceStatus::Inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

int cmd_approx(const std::string& input, unsigned n, std::optional<double> q, const Options& opts) {
  const fockseq::FockCoefficients phi = read_functional(input);
  const fockseq::TruncatedDomain domain(opts.horizon.value_or(std::max(n, phi.support_bound().value_or(n))));
  if (opts.format == "csv") {
    const std::vector<double> grid = parse_grid(opts.pgrid);
    const fockseq::GrowthFit fit = fockseq::fit_growth(phi, domain, grid);
    if (!q && !fit.selected) {
      throw fockseq::Error(fockseq::ErrorCode::InsufficientOrder,
                           "no certificate on the grid to derive q from; pass --q");
    }
    const double order = q.value_or(fit.selected->order + 1.0);
    emit(opts, fockseq::io::residual_curve_to_csv(fockseq::residual_curve(phi, order, domain, fit.selected)));
  } else {
    emit_json(opts, fockseq::io::functional_to_json(fockseq::approximate(phi, n)));
  }
  return kOk;
}

int cmd_generate(const std::string& kind, const std::string& input, const Options& opts) {
  const unsigned horizon = opts.horizon.value_or(4);
  if (kind == "psi-sequence") {
    emit_json(opts, fockseq::io::sequence_to_json(fockseq::psi0_sequence(horizon)));
  } else if (kind == "ones") {
    emit_json(opts, fockseq::io::functional_to_json(fockseq::ones(), fockseq::TruncatedDomain(horizon)));
  } else if (kind == "random-functional") {
    emit_json(opts, fockseq::io::random_functional_to_json(
                        fockseq::random_functional(fockseq::SampleSpace(horizon), opts.seed)));
  } else if (kind == "classical-sequence") {
    const fockseq::RandomFunctional f = input.empty()
                                            ? fockseq::random_functional(fockseq::SampleSpace(horizon), opts.seed)
                                            : read_random_functional(input);
    emit_json(opts, fockseq::io::sequence_to_json(fockseq::classical_to_sequence(f)));
  } else if (kind == "approximation-sequence") {
    if (input.empty()) throw fockseq::Error(fockseq::ErrorCode::InvalidArgument, "--input functional file required");
    emit_json(opts, fockseq::io::sequence_to_json(fockseq::approximation_sequence(read_functional(input), horizon)));
  } else {
    throw fockseq::Error(fockseq::ErrorCode::InvalidArgument, "unknown --kind " + kind);
  }
  return kOk;
}

void add_common(CLI::App* cmd, Options& opts, bool with_grid) {
  cmd->add_option("--horizon", opts.horizon, "Truncation index N (domain Gamma_N)");
  cmd->add_option("--tol", opts.tol, "Coefficient comparison tolerance")->check(CLI::NonNegativeNumber);
  if (with_grid) cmd->add_option("--pgrid", opts.pgrid, "Ascending growth orders, comma separated");
  cmd->add_option("--out", opts.out, "Output path (default stdout)");
  cmd->add_option("--format", opts.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

int exit_code_for(const fockseq::Error& e) {
  switch (e.code()) {
    case fockseq::ErrorCode::InvalidArgument:
    case fockseq::ErrorCode::ParseError:
    case fockseq::ErrorCode::SpaceMismatch:
    case fockseq::ErrorCode::InsufficientLength: return kBadInput;
    default: return kNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fock-transform calculus for discrete-time normal martingales"};
  app.require_subcommand(1);
  Options opts;

  std::string sigma_text, input, kind;
  double p = 2.0;
  unsigned n = 0;
  std::optional<double> q;

  auto* lambda = app.add_subcommand("lambda", "Print the weight of a subset given as a JSON array");
  lambda->add_option("sigma", sigma_text, "Subset, e.g. [0,1,3]")->required();

  auto* series = app.add_subcommand("series", "Truncated weighted series, product oracle and bound");
  series->add_option("--p", p, "Exponent p > 0")->required();
  add_common(series, opts, false);

  auto* expand = app.add_subcommand("expand", "Chaos expansion of a random-functional file");
  expand->add_option("input", input)->required();
  add_common(expand, opts, false);

  auto* synth = app.add_subcommand("synthesize", "Random functional from a fock-coefficients file");
  synth->add_option("input", input)->required();
  add_common(synth, opts, false);

  auto* mart = app.add_subcommand("martingale-check", "Generalized-martingale check of a sequence file");
  mart->add_option("input", input)->required();
  add_common(mart, opts, false);

  auto* converge = app.add_subcommand("converge", "Strong-convergence verdict for a sequence file");
  converge->add_option("input", input)->required();
  add_common(converge, opts, true);

  auto* approx = app.add_subcommand("approx", "Psi_n convolution approximant (json) or residual curve (csv)");
  approx->add_option("input", input)->required();
  approx->add_option("--n", n, "Approximation index")->required();
  approx->add_option("--q", q, "Residual dual order (default certificate order + 1)");
  add_common(approx, opts, true);

  auto* generate = app.add_subcommand("generate", "Write sample inputs");
  generate->add_option("--kind", kind,
                       "psi-sequence | ones | random-functional | classical-sequence | approximation-sequence")
      ->required();
  generate->add_option("--input", input, "Source file for classical-sequence or approximation-sequence");
  generate->add_option("--seed", opts.seed, "64-bit generator seed");
  add_common(generate, opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*lambda) return cmd_lambda(sigma_text);
    if (*series) return cmd_series(p, opts);
    if (*expand) return cmd_expand(input, opts);
    if (*synth) return cmd_synthesize(input, opts);
    if (*mart) return cmd_martingale_check(input, opts);
    if (*converge) return cmd_converge(input, opts);
    if (*approx) return cmd_approx(input, n, q, opts);
    if (*generate) return cmd_generate(kind, input, opts);
  } catch (const fockseq::Error& e) {
    std::cerr << "fockseq: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kUsage;
}
