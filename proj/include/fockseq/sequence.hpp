#pragma once

// Functional sequences: the generalized-martingale predicate, strong
// convergence verdicts, martingale limits and uniform boundedness.
//
// Verdicts describe the observed prefix on a truncated domain only. By the
// equivalence of weak, strong and dual-norm convergence for these spaces, a
// single Fock-transform test stands for all three notions.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fockseq/chaos.hpp"
#include "fockseq/functional.hpp"

namespace fockseq {

inline constexpr double kDefaultTolerance = 1e-9;

class FunctionalSequence {
 public:
  using Rule = std::function<FockCoefficients(std::size_t)>;

  /// Throws InvalidArgument for an empty list.
  explicit FunctionalSequence(std::vector<FockCoefficients> terms);
  /// Terms produced on demand by rule(0), ..., rule(length - 1).
  static FunctionalSequence from_rule(Rule rule, std::size_t length);

  std::size_t size() const noexcept { return length_; }
  FockCoefficients term(std::size_t n) const;
  std::vector<FockCoefficients> materialize() const;

 private:
  FunctionalSequence() = default;

  std::vector<FockCoefficients> terms_;
  Rule rule_;
  std::size_t length_ = 0;
};

struct MartingaleViolation {
  std::size_t n = 0;
  FiniteSubset sigma;
  double deviation = 0.0;
};

struct MartingaleCheck {
  bool holds = true;
  std::optional<MartingaleViolation> witness;  // first violation, ascending (n, sigma)
  double max_deviation = 0.0;
};

/// |F_n(sigma) - I_{n]}(sigma) F_{n+1}(sigma)| <= tol for consecutive terms and
/// every sigma in the domain. Throws InsufficientLength below two terms.
MartingaleCheck is_generalized_martingale(const FunctionalSequence& seq, const TruncatedDomain& domain,
                                          double tol = kDefaultTolerance);

/// Terms chaos_expand(E[f | F_n]) for n = 0..N, the conditional expectations
/// taken by direct averaging; term n is supported in Gamma_{n]}.
FunctionalSequence classical_to_sequence(const RandomFunctional& f);

enum class ConvergenceStatus { Converged, Diverged, Inconclusive };
const char* to_string(ConvergenceStatus status) noexcept;

struct ConvergenceWitness {
  FiniteSubset sigma;
  std::string explanation;
};

/// Per-sigma row of the verdict (sigma with any nonzero term value).
struct SigmaDiagnostic {
  FiniteSubset sigma;
  /// Index from which successive values agree within tol.
  std::size_t stabilization_index = 0;
  bool stabilized = false;
  double sup_abs = 0.0;
  /// scale * lambda^order - sup_abs for the selected certificate.
  std::optional<double> certificate_margin;
};

struct ConvergenceVerdict {
  ConvergenceStatus status = ConvergenceStatus::Inconclusive;
  std::optional<FockCoefficients> limit;
  std::optional<GrowthCertificate> uniform_certificate;
  std::optional<ConvergenceWitness> witness;
  /// Generic stabilization must happen by this index.
  std::size_t tail_start = 0;
  bool generalized_martingale = false;
  GrowthFit sup_fit;
  std::vector<SigmaDiagnostic> diagnostics;
};

/// Pointwise stabilization plus a uniform growth certificate on the
/// pointwise supremum. For generalized martingales a coefficient at sigma is
/// final from index max(sigma) on; other sequences must settle within the
/// first two thirds of the prefix. DIVERGED needs a coefficient that escapes
/// every certificate fitted on the early prefix, strictly increasing without
/// decelerating over the last third. Needs at least three terms.
ConvergenceVerdict strong_convergence_test(const FunctionalSequence& seq, const TruncatedDomain& domain,
                                           double tol, std::span<const double> p_grid);

/// F(sigma) = F_{max sigma}(sigma) on the domain. Throws NotAMartingale with
/// the first violation, or InvalidArgument if the domain outruns the sequence.
FockCoefficients martingale_limit(const FunctionalSequence& seq, const TruncatedDomain& domain,
                                  double tol = kDefaultTolerance);

struct BoundednessResult {
  GrowthFit fit;
  std::optional<GrowthCertificate> certificate;
  /// sup over the family of the -q norm, bounded through the certificate.
  std::optional<double> dual_bound;
  double dual_order = 0.0;
  /// The ordered family keeps escaping its early certificates.
  bool growth_detected = false;
};

/// Certificate for sup over the family of |F(sigma)|. The family's order is
/// used only by the growth detector. q defaults to certificate order + 1.
BoundednessResult uniform_boundedness(std::span<const FockCoefficients> family, const TruncatedDomain& domain,
                                      std::span<const double> p_grid, std::optional<double> q = std::nullopt);

}  // namespace fockseq
