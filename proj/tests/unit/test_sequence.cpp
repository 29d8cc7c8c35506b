#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fockseq/chaos.hpp"
#include "fockseq/convolution.hpp"
#include "fockseq/error.hpp"
#include "fockseq/sequence.hpp"

using namespace fockseq;

namespace {

const std::vector<double> kGrid{0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0};

FockCoefficients constant_at_empty(double value) {
  return FockCoefficients(CoefficientTable{{FiniteSubset{}, value}}, 0);
}

FunctionalSequence linear_growth(std::size_t terms) {
  return FunctionalSequence::from_rule([](std::size_t n) { return constant_at_empty(static_cast<double>(n)); }, terms);
}

FockCoefficients random_bounded(std::mt19937_64& rng, unsigned n) {
  std::uniform_real_distribution<double> u(-0.999, 0.999);
  CoefficientTable t;
  for (FiniteSubset s : TruncatedDomain(n)) t.emplace(s, Complex{u(rng), u(rng)});
  return FockCoefficients(std::move(t), n);
}

}  // namespace

TEST_CASE("sequence construction") {
  CHECK_THROWS_AS(FunctionalSequence(std::vector<FockCoefficients>{}), Error);
  CHECK_THROWS_AS(FunctionalSequence::from_rule(nullptr, 3), Error);
  CHECK_THROWS_AS(FunctionalSequence::from_rule([](std::size_t) { return FockCoefficients(); }, 0), Error);
  const FunctionalSequence psi = psi0_sequence(4);
  CHECK(psi.size() == 5);
  CHECK(psi.term(2)(FiniteSubset{0, 2}) == Complex{1.0});
  CHECK_THROWS_AS(psi.term(5), Error);
  CHECK(psi.materialize().size() == 5);
}

TEST_CASE("generalized martingale examples") {
  for (unsigned k = 1; k <= 6; ++k) {
    const MartingaleCheck check = is_generalized_martingale(psi0_sequence(k), TruncatedDomain(k), 0.0);
    CHECK(check.holds);
    CHECK(check.max_deviation == 0.0);
  }
  const SampleSpace space(5);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(is_generalized_martingale(classical_to_sequence(random_functional(space, seed)), space.domain(), 1e-12)
              .holds);
  }
  const FunctionalSequence shifted = FunctionalSequence::from_rule(
      [](std::size_t n) { return FockCoefficients::basis(FiniteSubset::singleton(static_cast<unsigned>(n) + 1)); },
      4);
  const MartingaleCheck bad = is_generalized_martingale(shifted, TruncatedDomain(5), 1e-9);
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->n == 0);
  CHECK(bad.witness->sigma == FiniteSubset{1});
  CHECK(bad.witness->deviation == 1.0);
  try {
    is_generalized_martingale(FunctionalSequence({psi0(1)}), TruncatedDomain(1));
    FAIL("expected insufficient length");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientLength);
  }
}

TEST_CASE("martingale check tolerance") {
  std::vector<FockCoefficients> terms{psi0(0), psi0(1), psi0(2)};
  terms[1] = terms[1] + FockCoefficients(CoefficientTable{{FiniteSubset{0}, 1e-10}});
  CHECK(is_generalized_martingale(FunctionalSequence(terms), TruncatedDomain(2), 1e-9).holds);
  const MartingaleCheck strict = is_generalized_martingale(FunctionalSequence(terms), TruncatedDomain(2), 0.0);
  CHECK_FALSE(strict.holds);
  CHECK(strict.witness->sigma == FiniteSubset{0});
  CHECK(strict.max_deviation == doctest::Approx(1e-10).epsilon(1e-6));
}

TEST_CASE("classical sequence examples") {
  const SampleSpace space(3);
  const FunctionalSequence z = classical_to_sequence(walsh(space, FiniteSubset{0, 1}));
  REQUIRE(z.size() == 4);
  CHECK(z.term(0).table().empty());
  CHECK(z.term(1).table().size() == 1);
  CHECK(z.term(1)(FiniteSubset{0, 1}) == Complex{1.0});
  const FunctionalSequence one = classical_to_sequence(walsh(space, FiniteSubset{}));
  for (std::size_t n = 0; n < one.size(); ++n) {
    CHECK(one.term(n).table().size() == 1);
    CHECK(one.term(n)(FiniteSubset{}) == Complex{1.0});
  }
  const RandomFunctional f = random_functional(space, 4);
  CHECK(max_difference(classical_to_sequence(f).term(3), chaos_expand(f), space.domain()) <= 1e-15);
  for (std::size_t n = 0; n <= 3; ++n) CHECK(classical_to_sequence(f).term(n).support_bound() == n);
}

TEST_CASE("strong convergence: psi sequence converges to the all-ones limit") {
  for (unsigned k = 2; k <= 8; ++k) {
    const ConvergenceVerdict v = strong_convergence_test(psi0_sequence(k), TruncatedDomain(k), kDefaultTolerance, kGrid);
    CHECK(v.status == ConvergenceStatus::Converged);
    CHECK(v.generalized_martingale);
    REQUIRE(v.limit.has_value());
    CHECK(max_difference(*v.limit, ones(), TruncatedDomain(k)) == 0.0);
    REQUIRE(v.uniform_certificate.has_value());
    CHECK(v.uniform_certificate->scale == 1.0);
    CHECK(v.uniform_certificate->order == 0.0);
    CHECK_FALSE(v.witness.has_value());
    CHECK(v.diagnostics.size() == TruncatedDomain(k).size());
  }
}

TEST_CASE("strong convergence: linear growth at the empty set diverges") {
  for (std::size_t terms : {3u, 6u, 12u, 30u}) {
    const ConvergenceVerdict v = strong_convergence_test(linear_growth(terms), TruncatedDomain(3), 1e-9, kGrid);
    CHECK(v.status == ConvergenceStatus::Diverged);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->sigma == FiniteSubset{});
    CHECK_FALSE(v.limit.has_value());
  }
}

TEST_CASE("strong convergence: constant sequences converge to their value") {
  std::mt19937_64 rng(8);
  const FockCoefficients phi = random_bounded(rng, 4);
  const FunctionalSequence seq(std::vector<FockCoefficients>(5, phi));
  const ConvergenceVerdict v = strong_convergence_test(seq, TruncatedDomain(4), 1e-9, kGrid);
  CHECK(v.status == ConvergenceStatus::Converged);
  REQUIRE(v.limit.has_value());
  CHECK(max_difference(*v.limit, phi, TruncatedDomain(4)) == 0.0);
  CHECK_FALSE(v.generalized_martingale);
  REQUIRE(v.uniform_certificate.has_value());
  CHECK(verify_certificate(phi, *v.uniform_certificate, TruncatedDomain(4)).holds);
}

TEST_CASE("strong convergence: slowly settling sequences are inconclusive") {
  const FunctionalSequence slow = FunctionalSequence::from_rule(
      [](std::size_t n) { return constant_at_empty(1.0 - 1.0 / static_cast<double>(n + 1)); }, 12);
  const ConvergenceVerdict v = strong_convergence_test(slow, TruncatedDomain(3), 1e-9, kGrid);
  CHECK(v.status == ConvergenceStatus::Inconclusive);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->sigma == FiniteSubset{});

  // Bounded oscillation: never settles, never escapes.
  const FunctionalSequence noisy = FunctionalSequence::from_rule(
      [](std::size_t n) { return constant_at_empty(n % 2 == 0 ? 1.0 : -1.0); }, 10);
  CHECK(strong_convergence_test(noisy, TruncatedDomain(2), 1e-9, kGrid).status == ConvergenceStatus::Inconclusive);
}

TEST_CASE("strong convergence: sequences settling early in the prefix converge") {
  std::vector<FockCoefficients> terms;
  for (int n = 0; n < 9; ++n) terms.push_back(constant_at_empty(n < 4 ? n : 4));
  const ConvergenceVerdict v = strong_convergence_test(FunctionalSequence(terms), TruncatedDomain(2), 1e-9, kGrid);
  CHECK(v.status == ConvergenceStatus::Converged);
  CHECK(v.tail_start == 5);
  CHECK(v.limit->evaluate(FiniteSubset{}) == Complex{4.0});
  CHECK(v.diagnostics.front().stabilization_index == 4);
}

TEST_CASE("strong convergence needs three terms") {
  try {
    strong_convergence_test(psi0_sequence(1), TruncatedDomain(1), 1e-9, kGrid);
    FAIL("expected insufficient length");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientLength);
  }
}

TEST_CASE("verdict invariants hold across generated sequences") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const unsigned k = 2 + trial % 5;
    const FunctionalSequence seq = approximation_sequence(random_bounded(rng, k), k);
    const ConvergenceVerdict v = strong_convergence_test(seq, TruncatedDomain(k), 1e-9, kGrid);
    if (v.status == ConvergenceStatus::Converged) {
      CHECK(v.limit.has_value());
      CHECK(v.uniform_certificate.has_value());
    }
    if (v.status == ConvergenceStatus::Diverged) CHECK(v.witness.has_value());
  }
  const ConvergenceVerdict d = strong_convergence_test(linear_growth(9), TruncatedDomain(2), 1e-9, kGrid);
  CHECK(d.witness.has_value());
}

TEST_CASE("martingale limit examples") {
  const FockCoefficients psi_limit = martingale_limit(psi0_sequence(5), TruncatedDomain(5));
  CHECK(max_difference(psi_limit, ones(), TruncatedDomain(5)) == 0.0);
  const SampleSpace space(6);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RandomFunctional f = random_functional(space, 500 + seed);
    const FockCoefficients limit = martingale_limit(classical_to_sequence(f), space.domain(), 1e-12);
    CHECK(max_difference(limit, chaos_expand(f), space.domain()) <= 1e-15);
  }
  const FunctionalSequence zeros(std::vector<FockCoefficients>(4));
  CHECK(martingale_limit(zeros, TruncatedDomain(3)).table().empty());
}

TEST_CASE("martingale limit errors") {
  const FunctionalSequence bad = FunctionalSequence::from_rule(
      [](std::size_t n) { return FockCoefficients::basis(FiniteSubset::singleton(static_cast<unsigned>(n) + 1)); },
      4);
  try {
    martingale_limit(bad, TruncatedDomain(4));
    FAIL("expected not-a-martingale");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAMartingale);
  }
  try {
    martingale_limit(psi0_sequence(3), TruncatedDomain(4));
    FAIL("expected short sequence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("martingale limit agrees with every term on its own domain") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const unsigned k = 2 + trial % 6;
    const FunctionalSequence seq = approximation_sequence(random_bounded(rng, k), k);
    const FockCoefficients limit = martingale_limit(seq, TruncatedDomain(k));
    for (unsigned m = 0; m <= k; ++m) {
      CHECK(max_difference(limit, seq.term(m), TruncatedDomain(m)) <= kDefaultTolerance);
    }
  }
}

TEST_CASE("uniform boundedness examples") {
  std::vector<FockCoefficients> psis;
  for (unsigned n = 0; n <= 6; ++n) psis.push_back(psi0(n));
  const BoundednessResult r = uniform_boundedness(psis, TruncatedDomain(6), kGrid, 1.0);
  REQUIRE(r.certificate.has_value());
  CHECK(r.certificate->scale == 1.0);
  CHECK(r.certificate->order == 0.0);
  REQUIRE(r.dual_bound.has_value());
  CHECK(*r.dual_bound == doctest::Approx(1.91731007152598500).epsilon(1e-13));
  // Default q is the certificate order plus one.
  CHECK(uniform_boundedness(psis, TruncatedDomain(6), kGrid).dual_order == 1.0);

  const std::vector<FockCoefficients> zero{FockCoefficients()};
  const BoundednessResult z = uniform_boundedness(zero, TruncatedDomain(3), kGrid);
  REQUIRE(z.certificate.has_value());
  CHECK(z.certificate->scale == 0.0);
  CHECK(z.certificate->order == 0.0);
  CHECK(*z.dual_bound == 0.0);

  std::vector<FockCoefficients> growing;
  for (int n = 0; n < 9; ++n) growing.push_back(constant_at_empty(n));
  const BoundednessResult g = uniform_boundedness(growing, TruncatedDomain(3), kGrid);
  CHECK_FALSE(g.certificate.has_value());
  CHECK(g.growth_detected);
  CHECK_THROWS_AS(uniform_boundedness(std::vector<FockCoefficients>{}, TruncatedDomain(1), kGrid), Error);
}

TEST_CASE("certificate-level equivalence: converged iff uniformly bounded for martingales") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const unsigned k = 2 + trial % 6;
    const FunctionalSequence seq = approximation_sequence(random_bounded(rng, k), k);
    REQUIRE(is_generalized_martingale(seq, TruncatedDomain(k), 0.0).holds);
    const auto terms = seq.materialize();
    const bool converged =
        strong_convergence_test(seq, TruncatedDomain(k), 1e-9, kGrid).status == ConvergenceStatus::Converged;
    const bool bounded = uniform_boundedness(terms, TruncatedDomain(k), kGrid).certificate.has_value();
    CHECK(converged == bounded);
    CHECK(converged);
  }
  // Diverging family fails both.
  const FunctionalSequence growing = linear_growth(9);
  const auto terms = growing.materialize();
  CHECK(strong_convergence_test(growing, TruncatedDomain(2), 1e-9, kGrid).status != ConvergenceStatus::Converged);
  CHECK_FALSE(uniform_boundedness(terms, TruncatedDomain(2), kGrid).certificate.has_value());
}

TEST_CASE("enlarging the domain keeps converged martingales converged") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 8; ++trial) {
    const unsigned k = 6;
    const FunctionalSequence seq = approximation_sequence(random_bounded(rng, k), k);
    for (unsigned n = 2; n <= k; ++n) {
      const ConvergenceStatus small = strong_convergence_test(seq, TruncatedDomain(n), 1e-9, kGrid).status;
      for (unsigned m = n; m <= k; ++m) {
        const ConvergenceStatus big = strong_convergence_test(seq, TruncatedDomain(m), 1e-9, kGrid).status;
        if (small == ConvergenceStatus::Converged) CHECK(big != ConvergenceStatus::Diverged);
      }
    }
  }
}
