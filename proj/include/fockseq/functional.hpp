#pragma once

// Generalized functionals represented by their Fock transforms, the weighted
// norm chain, the canonical pairing and growth certificates.

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fockseq/gamma_index.hpp"

namespace fockseq {

using Complex = std::complex<double>;
using CoefficientRule = std::function<Complex(FiniteSubset)>;
using CoefficientTable = std::map<FiniteSubset, Complex>;

/// Fock transform sigma -> F(sigma) of a generalized functional.
///
/// Table-backed values have a finite support bound N: every stored key lies in
/// Gamma_{N]} and absent keys are exactly zero. Rule-backed values have
/// unbounded support and evaluate a deterministic rule, memoized behind a
/// mutex so copies can be shared across threads.
class FockCoefficients {
 public:
  /// The zero functional.
  FockCoefficients() = default;

  /// Support bound inferred as the largest filtration level among the keys.
  explicit FockCoefficients(CoefficientTable table);
  /// Throws InvalidArgument if a key lies outside Gamma_{support_bound]}.
  FockCoefficients(CoefficientTable table, unsigned support_bound);

  static FockCoefficients from_rule(CoefficientRule rule);
  /// Coefficient 1 at sigma, 0 elsewhere.
  static FockCoefficients basis(FiniteSubset sigma);

  Complex evaluate(FiniteSubset sigma) const;
  Complex operator()(FiniteSubset sigma) const { return evaluate(sigma); }

  bool is_rule_backed() const noexcept { return rule_ != nullptr; }
  /// nullopt marks unbounded (rule-backed) support.
  std::optional<unsigned> support_bound() const noexcept;
  /// Stored nonzero coefficients; empty for rule-backed values.
  const CoefficientTable& table() const noexcept { return table_; }

  /// Table-backed copy holding exactly the values on the domain.
  FockCoefficients restricted(const TruncatedDomain& domain) const;

  /// Calls fn(sigma, value) for every sigma in the domain that may carry a
  /// nonzero value: stored keys for tables, the whole domain for rules.
  void for_each_on(const TruncatedDomain& domain,
                   const std::function<void(FiniteSubset, Complex)>& fn) const;

 private:
  struct RuleState;

  CoefficientTable table_;
  unsigned support_bound_ = 0;
  std::shared_ptr<RuleState> rule_;
};

FockCoefficients operator+(const FockCoefficients& a, const FockCoefficients& b);
FockCoefficients operator-(const FockCoefficients& a, const FockCoefficients& b);
FockCoefficients operator*(Complex scale, const FockCoefficients& a);

/// Pointwise combination over the union of supports; op(0, 0) must be 0.
/// Rule-backed when either input is.
FockCoefficients combine(const FockCoefficients& a, const FockCoefficients& b,
                         const std::function<Complex(Complex, Complex)>& op);

/// max_{sigma in domain} |a(sigma) - b(sigma)|.
double max_difference(const FockCoefficients& a, const FockCoefficients& b, const TruncatedDomain& domain);

/// |F(sigma)| <= scale * lambda_sigma^order, verified on domain_checked.
struct GrowthCertificate {
  double scale = 0.0;
  double order = 0.0;
  TruncatedDomain domain_checked{0};
};

struct NormEstimate {
  double value = 0.0;
  /// Support not covered by the domain: the value only bounds the full norm from below.
  bool lower_bound = false;
  bool overflow = false;
};

/// sqrt(sum_{sigma in domain} lambda_sigma^{2p} |F(sigma)|^2). Negative p gives
/// the truncated dual-side norm.
NormEstimate sobolev_norm(const FockCoefficients& phi, double p, const TruncatedDomain& domain);

/// C * [sum_{sigma in Gamma} lambda_sigma^{-2(q-p)}]^{1/2}, an upper bound on
/// the -q norm of anything admitting the certificate. Requires q > p + 1/2.
double dual_norm_bound(const GrowthCertificate& cert, double q);

/// sum_{sigma in domain} F_phi(sigma) * c_xi(sigma), bilinear.
Complex pairing(const FockCoefficients& phi, const FockCoefficients& xi, const TruncatedDomain& domain);

/// Bound on what the pairing misses outside the domain,
/// sum_{sigma not in domain} C lambda^p |c_xi(sigma)|; nullopt for rule-backed xi.
std::optional<double> pairing_truncation_bound(const GrowthCertificate& cert, const FockCoefficients& xi,
                                               const TruncatedDomain& domain);

/// |value| * lambda_sigma^{-order}, the quantity certificates bound by their scale.
double growth_ratio(Complex value, FiniteSubset sigma, double order);

struct GrowthPoint {
  double order = 0.0;
  double scale = 0.0;
  FiniteSubset maximizer;
};

struct GrowthFit {
  std::vector<GrowthPoint> curve;
  std::optional<GrowthCertificate> selected;
};

/// Whether the maximizer sits away from the truncation edge: lambda_sigma = 1 or
/// lambda_sigma below half the domain's largest weight.
bool is_interior_maximizer(FiniteSubset sigma, const TruncatedDomain& domain);

/// C(p) = max_{sigma in domain} |F(sigma)| lambda_sigma^{-p} for each grid order.
/// The selected certificate is the smallest order whose maximizer is interior.
/// The grid must be nonempty, ascending and nonnegative.
GrowthFit fit_growth(const FockCoefficients& phi, const TruncatedDomain& domain, std::span<const double> p_grid);

struct CertificateCheck {
  bool holds = true;
  std::optional<FiniteSubset> witness;
};

CertificateCheck verify_certificate(const FockCoefficients& phi, const GrowthCertificate& cert,
                                    const TruncatedDomain& domain);

}  // namespace fockseq
