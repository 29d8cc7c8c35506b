#include "fockseq/convolution.hpp"

#include <cmath>

#include "fockseq/error.hpp"

namespace fockseq {

namespace {

FockCoefficients multiply_onto(const FockCoefficients& finite, const FockCoefficients& other) {
  unsigned bound = *finite.support_bound();
  if (const auto other_bound = other.support_bound()) bound = std::min(bound, *other_bound);
  CoefficientTable out;
  for (const auto& [sigma, value] : finite.table()) {
    if (indicator(sigma, bound)) out.emplace_hint(out.end(), sigma, value * other(sigma));
  }
  return FockCoefficients(std::move(out), bound);
}

}  // namespace

FockCoefficients convolve(const FockCoefficients& a, const FockCoefficients& b) {
  if (a.is_rule_backed() && b.is_rule_backed()) {
    return FockCoefficients::from_rule([a, b](FiniteSubset sigma) { return a(sigma) * b(sigma); });
  }
  if (a.is_rule_backed()) return multiply_onto(b, a);
  if (b.is_rule_backed()) return multiply_onto(a, b);
  return a.table().size() <= b.table().size() ? multiply_onto(a, b) : multiply_onto(b, a);
}

FockCoefficients ones() {
  return FockCoefficients::from_rule([](FiniteSubset) { return Complex{1.0, 0.0}; });
}

FockCoefficients psi0(unsigned n) {
  const TruncatedDomain domain(n);
  require_enumerable(domain);
  CoefficientTable table;
  for (FiniteSubset sigma : domain) table.emplace_hint(table.end(), sigma, Complex{1.0, 0.0});
  return FockCoefficients(std::move(table), n);
}

FunctionalSequence psi0_sequence(unsigned last) {
  return FunctionalSequence::from_rule([](std::size_t n) { return psi0(static_cast<unsigned>(n)); }, last + 1);
}

FockCoefficients approximate(const FockCoefficients& phi, unsigned n) {
  if (phi.is_rule_backed()) return convolve(psi0(n), phi);
  // Same product, without materializing Psi_n for sparse tables.
  CoefficientTable table;
  for (const auto& [sigma, value] : phi.table()) {
    if (indicator(sigma, n)) table.emplace_hint(table.end(), sigma, value);
  }
  return FockCoefficients(std::move(table), std::min(n, *phi.support_bound()));
}

FunctionalSequence approximation_sequence(const FockCoefficients& phi, unsigned last) {
  return FunctionalSequence::from_rule([phi](std::size_t n) { return approximate(phi, static_cast<unsigned>(n)); },
                                       last + 1);
}

double approximation_residual(const FockCoefficients& phi, unsigned n, double q, const TruncatedDomain& domain,
                              const std::optional<GrowthCertificate>& cert) {
  if (!(q > 0.5)) throw Error(ErrorCode::InsufficientOrder, "residual norm order must exceed 1/2");
  if (cert && !(q > cert->order + 0.5)) {
    throw Error(ErrorCode::InsufficientOrder, "residual norm order must exceed certificate order + 1/2");
  }
  double sum = 0.0;
  phi.for_each_on(domain, [&](FiniteSubset sigma, Complex value) {
    if (!indicator(sigma, n)) sum += std::pow(weight_value(sigma), -2.0 * q) * std::norm(value);
  });
  return std::sqrt(sum);
}

std::vector<double> residual_curve(const FockCoefficients& phi, double q, const TruncatedDomain& domain,
                                   const std::optional<GrowthCertificate>& cert) {
  std::vector<double> curve;
  curve.reserve(domain.max_index() + 1);
  for (unsigned n = 0; n <= domain.max_index(); ++n) curve.push_back(approximation_residual(phi, n, q, domain, cert));
  return curve;
}

}  // namespace fockseq
