#include "fockseq/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fockseq/error.hpp"

namespace fockseq {

FunctionalSequence::FunctionalSequence(std::vector<FockCoefficients> terms)
    : terms_(std::move(terms)), length_(terms_.size()) {
  if (terms_.empty()) throw Error(ErrorCode::InvalidArgument, "functional sequence needs at least one term");
}

FunctionalSequence FunctionalSequence::from_rule(Rule rule, std::size_t length) {
  if (!rule || length == 0) throw Error(ErrorCode::InvalidArgument, "rule sequence needs a rule and a length");
  FunctionalSequence seq;
  seq.rule_ = std::move(rule);
  seq.length_ = length;
  return seq;
}

FockCoefficients FunctionalSequence::term(std::size_t n) const {
  if (n >= length_) throw Error(ErrorCode::IndexOutOfRange, "sequence term " + std::to_string(n));
  return rule_ ? rule_(n) : terms_[n];
}

std::vector<FockCoefficients> FunctionalSequence::materialize() const {
  if (!rule_) return terms_;
  std::vector<FockCoefficients> out;
  out.reserve(length_);
  for (std::size_t n = 0; n < length_; ++n) out.push_back(rule_(n));
  return out;
}

const char* to_string(ConvergenceStatus status) noexcept {
  switch (status) {
    case ConvergenceStatus::Converged: return "CONVERGED";
    case ConvergenceStatus::Diverged: return "DIVERGED";
    case ConvergenceStatus::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace {

// Term values on every sigma of the domain that can be nonzero in some term.
struct ValueGrid {
  std::vector<FiniteSubset> sigmas;
  std::vector<std::vector<Complex>> values;  // values[i][n] = F_n(sigmas[i])

  std::size_t terms() const { return values.empty() ? 0 : values.front().size(); }
};

ValueGrid collect_values(std::span<const FockCoefficients> terms, const TruncatedDomain& domain) {
  ValueGrid grid;
  const bool any_rule =
      std::any_of(terms.begin(), terms.end(), [](const FockCoefficients& t) { return t.is_rule_backed(); });
  if (any_rule) {
    grid.sigmas = enumerate(domain);
  } else {
    std::set<FiniteSubset> keys;
    for (const FockCoefficients& t : terms) {
      for (const auto& entry : t.table()) {
        if (domain.contains(entry.first)) keys.insert(entry.first);
      }
    }
    grid.sigmas.assign(keys.begin(), keys.end());
  }
  grid.values.assign(grid.sigmas.size(), std::vector<Complex>(terms.size()));
  for (std::size_t n = 0; n < terms.size(); ++n) {
    for (std::size_t i = 0; i < grid.sigmas.size(); ++i) grid.values[i][n] = terms[n](grid.sigmas[i]);
  }
  return grid;
}

std::size_t tail_length(std::size_t terms) { return std::max<std::size_t>(1, terms / 3); }

FockCoefficients sup_table(const ValueGrid& grid, std::size_t end, unsigned support_bound) {
  CoefficientTable table;
  for (std::size_t i = 0; i < grid.sigmas.size(); ++i) {
    double sup = 0.0;
    for (std::size_t n = 0; n < end; ++n) sup = std::max(sup, std::abs(grid.values[i][n]));
    if (sup > 0.0) table.emplace(grid.sigmas[i], sup);
  }
  return FockCoefficients(std::move(table), support_bound);
}

MartingaleCheck check_martingale(const ValueGrid& grid, double tol) {
  MartingaleCheck check;
  const std::size_t terms = grid.terms();
  for (std::size_t n = 0; n + 1 < terms; ++n) {
    for (std::size_t i = 0; i < grid.sigmas.size(); ++i) {
      const Complex expected = static_cast<double>(indicator(grid.sigmas[i], static_cast<unsigned>(n))) *
                               grid.values[i][n + 1];
      const double deviation = std::abs(grid.values[i][n] - expected);
      check.max_deviation = std::max(check.max_deviation, deviation);
      if (deviation > tol && check.holds) {
        check.holds = false;
        check.witness = MartingaleViolation{n, grid.sigmas[i], deviation};
      }
    }
  }
  return check;
}

// A coefficient escaping every certificate fitted on the early prefix, strictly
// increasing with non-decreasing increments over the window.
std::optional<ConvergenceWitness> detect_growth(const ValueGrid& grid, const TruncatedDomain& domain,
                                                std::span<const double> p_grid) {
  const std::size_t terms = grid.terms();
  if (terms < 3) return std::nullopt;
  const std::size_t last = terms - 1;
  const std::size_t window_begin = last - tail_length(terms);
  const GrowthFit early = fit_growth(sup_table(grid, window_begin, domain.max_index()), domain, p_grid);

  constexpr double kDecelerationSlack = 1e-9;
  for (std::size_t i = 0; i < grid.sigmas.size(); ++i) {
    const FiniteSubset sigma = grid.sigmas[i];
    double envelope = 0.0;
    for (const GrowthPoint& point : early.curve) {
      envelope = std::max(envelope, point.scale * std::pow(weight_value(sigma), point.order));
    }
    bool escapes = true;
    double previous_step = 0.0;
    for (std::size_t n = window_begin; n <= last && escapes; ++n) {
      const double value = std::abs(grid.values[i][n]);
      if (!(value > envelope)) escapes = false;
      if (n > window_begin) {
        const double step = value - std::abs(grid.values[i][n - 1]);
        if (!(step > 0.0)) escapes = false;
        if (n > window_begin + 1 && step < previous_step * (1.0 - kDecelerationSlack)) escapes = false;
        previous_step = step;
      }
    }
    if (escapes) {
      return ConvergenceWitness{sigma, "|F_n(" + sigma.to_string() + ")| grows from " +
                                           std::to_string(std::abs(grid.values[i][window_begin])) + " to " +
                                           std::to_string(std::abs(grid.values[i][last])) +
                                           " over terms " + std::to_string(window_begin) + ".." +
                                           std::to_string(last) + ", beyond every early certificate " +
                                           std::to_string(envelope)};
    }
  }
  return std::nullopt;
}

}  // namespace

MartingaleCheck is_generalized_martingale(const FunctionalSequence& seq, const TruncatedDomain& domain, double tol) {
  if (seq.size() < 2) throw Error(ErrorCode::InsufficientLength, "martingale check needs at least two terms");
  const std::vector<FockCoefficients> terms = seq.materialize();
  return check_martingale(collect_values(terms, domain), tol);
}

FunctionalSequence classical_to_sequence(const RandomFunctional& f) {
  std::vector<FockCoefficients> terms;
  terms.reserve(f.space().horizon() + 1);
  for (unsigned n = 0; n <= f.space().horizon(); ++n) {
    terms.push_back(chaos_expand(conditional_expectation_direct(f, n)).restricted(TruncatedDomain(n)));
  }
  return FunctionalSequence(std::move(terms));
}

ConvergenceVerdict strong_convergence_test(const FunctionalSequence& seq, const TruncatedDomain& domain, double tol,
                                           std::span<const double> p_grid) {
  if (seq.size() < 3) throw Error(ErrorCode::InsufficientLength, "convergence test needs at least three terms");
  const std::vector<FockCoefficients> terms = seq.materialize();
  const ValueGrid grid = collect_values(terms, domain);
  const std::size_t count = terms.size();
  const std::size_t last = count - 1;

  ConvergenceVerdict verdict;
  verdict.tail_start = last - tail_length(count);
  verdict.generalized_martingale = check_martingale(grid, tol).holds;
  verdict.sup_fit = fit_growth(sup_table(grid, count, domain.max_index()), domain, p_grid);
  const std::optional<GrowthCertificate>& cert = verdict.sup_fit.selected;

  std::optional<FiniteSubset> unsettled;
  for (std::size_t i = 0; i < grid.sigmas.size(); ++i) {
    const FiniteSubset sigma = grid.sigmas[i];
    SigmaDiagnostic row;
    row.sigma = sigma;
    for (std::size_t n = 1; n < count; ++n) {
      if (std::abs(grid.values[i][n] - grid.values[i][n - 1]) > tol) row.stabilization_index = n;
    }
    row.stabilized = row.stabilization_index <= verdict.tail_start;
    const std::size_t level = filtration_level(sigma);
    if (verdict.generalized_martingale && level <= last) {
      row.stabilization_index = std::min(row.stabilization_index, level);
      row.stabilized = true;
    }
    for (Complex v : grid.values[i]) row.sup_abs = std::max(row.sup_abs, std::abs(v));
    if (cert) row.certificate_margin = cert->scale * std::pow(weight_value(sigma), cert->order) - row.sup_abs;
    if (!row.stabilized && !unsettled) unsettled = sigma;
    verdict.diagnostics.push_back(row);
  }

  if (!unsettled && cert) {
    verdict.status = ConvergenceStatus::Converged;
    CoefficientTable limit;
    for (std::size_t i = 0; i < grid.sigmas.size(); ++i) {
      if (grid.values[i][last] != Complex{}) limit.emplace(grid.sigmas[i], grid.values[i][last]);
    }
    verdict.limit = FockCoefficients(std::move(limit), domain.max_index());
    verdict.uniform_certificate = cert;
    return verdict;
  }
  if (auto growth = detect_growth(grid, domain, p_grid)) {
    verdict.status = ConvergenceStatus::Diverged;
    verdict.witness = std::move(growth);
    return verdict;
  }
  verdict.status = ConvergenceStatus::Inconclusive;
  if (unsettled) {
    verdict.witness = ConvergenceWitness{*unsettled, "coefficient at " + unsettled->to_string() +
                                                         " has not settled within tol by term " +
                                                         std::to_string(verdict.tail_start)};
  } else {
    verdict.witness = ConvergenceWitness{FiniteSubset{}, "no grid order gives a certificate with an interior maximizer"};
  }
  return verdict;
}

FockCoefficients martingale_limit(const FunctionalSequence& seq, const TruncatedDomain& domain, double tol) {
  const MartingaleCheck check = is_generalized_martingale(seq, domain, tol);
  if (!check.holds) {
    const MartingaleViolation& w = *check.witness;
    throw Error(ErrorCode::NotAMartingale, "term " + std::to_string(w.n) + " at " + w.sigma.to_string() +
                                               " deviates by " + std::to_string(w.deviation));
  }
  if (domain.max_index() >= seq.size()) {
    throw Error(ErrorCode::InvalidArgument, "domain Gamma_" + std::to_string(domain.max_index()) + " needs " +
                                                std::to_string(domain.max_index() + 1) + " terms, sequence has " +
                                                std::to_string(seq.size()));
  }
  const std::vector<FockCoefficients> terms = seq.materialize();
  const ValueGrid grid = collect_values(terms, domain);
  CoefficientTable limit;
  for (std::size_t i = 0; i < grid.sigmas.size(); ++i) {
    const Complex value = grid.values[i][filtration_level(grid.sigmas[i])];
    if (value != Complex{}) limit.emplace(grid.sigmas[i], value);
  }
  return FockCoefficients(std::move(limit), domain.max_index());
}

BoundednessResult uniform_boundedness(std::span<const FockCoefficients> family, const TruncatedDomain& domain,
                                      std::span<const double> p_grid, std::optional<double> q) {
  if (family.empty()) throw Error(ErrorCode::InvalidArgument, "uniform boundedness needs a nonempty family");
  const ValueGrid grid = collect_values(family, domain);
  BoundednessResult result;
  result.fit = fit_growth(sup_table(grid, family.size(), domain.max_index()), domain, p_grid);
  result.growth_detected = detect_growth(grid, domain, p_grid).has_value();
  if (result.fit.selected && !result.growth_detected) {
    result.certificate = result.fit.selected;
    result.dual_order = q.value_or(result.certificate->order + 1.0);
    result.dual_bound = dual_norm_bound(*result.certificate, result.dual_order);
  }
  return result;
}

}  // namespace fockseq
