#pragma once

// Exact finite-horizon realization of a discrete-time normal martingale: the
// symmetric Rademacher walk on Omega = {-1,+1}^{N+1} with uniform measure.
//
// Sample point omega is indexed by a bitmask with bit k set iff omega_k = -1,
// so the Walsh function Z_sigma(omega) = (-1)^{popcount(sigma & omega)}.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fockseq/functional.hpp"
#include "fockseq/gamma_index.hpp"

namespace fockseq {

class SampleSpace {
 public:
  /// Throws DomainTooLarge beyond the enumeration guard.
  explicit SampleSpace(unsigned horizon);

  unsigned horizon() const noexcept { return horizon_; }
  std::size_t point_count() const noexcept { return std::size_t{1} << (horizon_ + 1); }
  /// Mass of each point, 2^{-(N+1)} (exact).
  double point_mass() const noexcept;
  TruncatedDomain domain() const { return TruncatedDomain(horizon_); }

  friend bool operator==(SampleSpace, SampleSpace) = default;

 private:
  unsigned horizon_;
};

/// Complex-valued function on the sample space, one value per point.
class RandomFunctional {
 public:
  explicit RandomFunctional(SampleSpace space);  // identically zero
  /// Throws InvalidArgument unless values.size() == space.point_count().
  RandomFunctional(SampleSpace space, std::vector<Complex> values);

  const SampleSpace& space() const noexcept { return space_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex operator[](std::size_t point) const { return values_[point]; }

  friend bool operator==(const RandomFunctional&, const RandomFunctional&) = default;

 private:
  SampleSpace space_;
  std::vector<Complex> values_;
};

/// Largest pointwise |f - g|; throws SpaceMismatch.
double max_abs_difference(const RandomFunctional& f, const RandomFunctional& g);

/// In-place unnormalized Walsh-Hadamard transform; size must be a power of two.
void walsh_hadamard_transform(std::span<Complex> data);

/// Z_n: omega -> omega_n. Throws IndexOutOfRange unless n <= N.
RandomFunctional noise(const SampleSpace& space, unsigned n);

/// Z_sigma = prod_{i in sigma} Z_i, Z_empty = 1. Throws OutOfHorizon.
RandomFunctional walsh(const SampleSpace& space, FiniteSubset sigma);

/// 2^{-(N+1)} sum_omega conj(f(omega)) g(omega).
Complex inner_product(const RandomFunctional& f, const RandomFunctional& g);
Complex expectation(const RandomFunctional& f);
double l2_norm(const RandomFunctional& f);

/// c(sigma) = <Z_sigma, f> for every sigma in Gamma_{N]} via the fast transform.
FockCoefficients chaos_expand(const RandomFunctional& f);

/// sum_sigma c(sigma) Z_sigma. Throws OutOfHorizon if c has support beyond N
/// (rule-backed input included).
RandomFunctional synthesize(const FockCoefficients& c, const SampleSpace& space);

/// E[f | F_n] computed spectrally: drop coefficients outside Gamma_{n]}.
RandomFunctional conditional_expectation(const RandomFunctional& f, unsigned n);

/// E[f | F_n] computed by averaging over coordinates n+1..N directly.
RandomFunctional conditional_expectation_direct(const RandomFunctional& f, unsigned n);

struct ConditionReport {
  std::string name;
  bool passed = false;
  double max_deviation = 0.0;
};

struct NormalMartingaleReport {
  ConditionReport mean;      // E[M_0|F_-1] = 0, E[M_n|F_{n-1}] = M_{n-1}
  ConditionReport variance;  // E[M_0^2|F_-1] = 1, E[M_n^2|F_{n-1}] = M_{n-1}^2 + 1
  bool passed() const noexcept { return mean.passed && variance.passed; }
};

/// Checks both defining conditions of M_n = sum_{k<=n} Z_k atom by atom.
NormalMartingaleReport verify_normal_martingale(const SampleSpace& space, double tol = 0.0);

/// Same check under independent coins with P(omega_k = +1) = plus_probability[k],
/// one entry per coordinate. Used for negative controls.
NormalMartingaleReport verify_normal_martingale(const SampleSpace& space, std::span<const double> plus_probability,
                                                double tol = 0.0);

/// Seeded functional with real and imaginary parts uniform in [-1, 1),
/// drawn from mt19937_64 with a platform-independent mapping.
RandomFunctional random_functional(const SampleSpace& space, std::uint64_t seed);

/// Monte-Carlo estimate of <Z_sigma, f> from `samples` uniform draws.
Complex estimate_coefficient(const RandomFunctional& f, FiniteSubset sigma, std::size_t samples,
                             std::uint64_t seed);

}  // namespace fockseq
