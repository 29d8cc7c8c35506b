#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "fockseq/error.hpp"
#include "fockseq/gamma_index.hpp"

using namespace fockseq;

namespace {

// Independent weight oracle: product of element values read off the mask bit by bit.
unsigned long long brute_weight(std::uint64_t mask) {
  unsigned long long w = 1;
  for (unsigned k = 0; k < 64; ++k) {
    if (mask & (std::uint64_t{1} << k)) w *= k + 1;
  }
  return w;
}

double brute_series(double p, unsigned n) {
  double sum = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n + 1)); ++mask) {
    sum += std::pow(static_cast<double>(brute_weight(mask)), -p);
  }
  return sum;
}

}  // namespace

TEST_CASE("subset construction and encoding") {
  const FiniteSubset s{0, 2, 5};
  CHECK(s.mask() == 0b100101);
  CHECK(s.size() == 3);
  CHECK(s.elements() == std::vector<unsigned>{0, 2, 5});
  CHECK(s.max_element() == 5u);
  CHECK(s.to_string() == "[0,2,5]");
  CHECK(FiniteSubset{}.to_string() == "[]");
  CHECK_FALSE(FiniteSubset{}.max_element().has_value());
  CHECK(FiniteSubset{} != FiniteSubset{0});
  CHECK(FiniteSubset::singleton(63).contains(63));
  CHECK_THROWS_AS(FiniteSubset({2, 1}), Error);
  CHECK_THROWS_AS(FiniteSubset({1, 1}), Error);
  CHECK_THROWS_AS(FiniteSubset({64}), Error);
}

TEST_CASE("weight examples") {
  CHECK(weight(FiniteSubset{}) == 1);
  CHECK(weight(FiniteSubset{2}) == 3);
  CHECK(weight(FiniteSubset{0, 1, 3}) == 8);
  CHECK(weight_to_string(weight(FiniteSubset{0, 1, 3})) == "8");
}

TEST_CASE("weight overflow is reported, log weight still available") {
  // 34! fits in 128 bits, 35! does not.
  std::vector<unsigned> upto33, upto34;
  for (unsigned k = 0; k <= 33; ++k) upto33.push_back(k);
  for (unsigned k = 0; k <= 34; ++k) upto34.push_back(k);
  CHECK_NOTHROW(weight(FiniteSubset::from_elements(upto33)));
  CHECK(weight_to_string(weight(FiniteSubset::from_elements(upto33))) ==
        "295232799039604140847618609643520000000");
  try {
    weight(FiniteSubset::from_elements(upto34));
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ArithmeticOverflow);
  }
  CHECK(log_weight(FiniteSubset::from_elements(upto34)) == doctest::Approx(std::lgamma(36.0)).epsilon(1e-12));
}

TEST_CASE("indicator examples") {
  CHECK(indicator(FiniteSubset{}, 0) == 1);
  CHECK(indicator(FiniteSubset{0, 1}, 0) == 0);
  CHECK(indicator(FiniteSubset{0, 1}, 1) == 1);
  CHECK(indicator(FiniteSubset{63}, 62) == 0);
  CHECK(indicator(FiniteSubset{63}, 63) == 1);
}

TEST_CASE("enumeration examples") {
  CHECK(enumerate(TruncatedDomain(0)) == std::vector<FiniteSubset>{FiniteSubset{}, FiniteSubset{0}});
  CHECK(enumerate(TruncatedDomain(1)) ==
        std::vector<FiniteSubset>{FiniteSubset{}, FiniteSubset{0}, FiniteSubset{1}, FiniteSubset{0, 1}});
  CHECK(TruncatedDomain(1).size() == 4);
  CHECK(TruncatedDomain(3).max_weight() == 24.0);
}

TEST_CASE("enumeration guard and domain limits") {
  CHECK_NOTHROW(require_enumerable(TruncatedDomain(30)));
  try {
    enumerate(TruncatedDomain(31));
    FAIL("expected guard");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainTooLarge);
  }
  CHECK_NOTHROW(require_enumerable(TruncatedDomain(12), 12));
  CHECK_THROWS_AS(require_enumerable(TruncatedDomain(13), 12), Error);
  CHECK_THROWS_AS(TruncatedDomain(63), Error);
}

TEST_CASE("enumeration is complete, ordered and within range") {
  for (unsigned n = 0; n <= 10; ++n) {
    const auto all = enumerate(TruncatedDomain(n));
    REQUIRE(all.size() == (std::size_t{1} << (n + 1)));
    std::set<FiniteSubset> seen(all.begin(), all.end());
    CHECK(seen.size() == all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
      CHECK(all[i].mask() == i);
      CHECK(indicator(all[i], n) == 1);
    }
  }
}

TEST_CASE("nested domains: restriction of Gamma_n to indicator m equals Gamma_m") {
  for (unsigned n = 0; n <= 8; ++n) {
    const auto big = enumerate(TruncatedDomain(n));
    for (unsigned m = 0; m <= n; ++m) {
      std::set<FiniteSubset> restricted;
      for (FiniteSubset s : big) {
        if (indicator(s, m)) restricted.insert(s);
      }
      const auto small = enumerate(TruncatedDomain(m));
      CHECK(restricted == std::set<FiniteSubset>(small.begin(), small.end()));
    }
  }
}

TEST_CASE("weight is multiplicative over disjoint unions on Gamma_5") {
  const auto all = enumerate(TruncatedDomain(5));
  for (FiniteSubset a : all) {
    for (FiniteSubset b : all) {
      if (!a.disjoint(b)) continue;
      CHECK(weight(a.unite(b)) == weight(a) * weight(b));
    }
  }
}

TEST_CASE("weight agrees with brute force and is at least one") {
  for (FiniteSubset s : TruncatedDomain(10)) {
    const Weight w = weight(s);
    CHECK(w == brute_weight(s.mask()));
    CHECK(w >= 1);
    CHECK((w == 1) == (s.empty() || s == FiniteSubset{0}));
    CHECK(weight_value(s) == static_cast<double>(brute_weight(s.mask())));
  }
}

TEST_CASE("indicator identity I_n * I_{n+1} = I_n") {
  for (FiniteSubset s : TruncatedDomain(9)) {
    for (unsigned n = 0; n < 12; ++n) CHECK(indicator(s, n) * indicator(s, n + 1) == indicator(s, n));
  }
}

TEST_CASE("filtration level") {
  CHECK(filtration_level(FiniteSubset{}) == 0);
  CHECK(filtration_level(FiniteSubset{0}) == 0);
  CHECK(filtration_level(FiniteSubset{1, 4}) == 4);
}

TEST_CASE("weighted series examples") {
  CHECK(weighted_series(2.0, TruncatedDomain(1)).sum == 2.5);
  const WeightedSeries s12 = weighted_series(2.0, TruncatedDomain(12));
  // Product oracle prod_{k=1}^{13} (1 + 1/k^2), evaluated in 30-digit arithmetic.
  CHECK(s12.sum == doctest::Approx(3.41396215166458560).epsilon(1e-14));
  CHECK(s12.product == doctest::Approx(3.41396215166458560).epsilon(1e-14));
  REQUIRE(s12.bound.has_value());
  CHECK(s12.sum <= *s12.bound);
  CHECK(*s12.bound <= 5.1810);
  const WeightedSeries s3 = weighted_series(3.0, TruncatedDomain(8));
  CHECK(s3.sum == doctest::Approx(2.41481431246784979).epsilon(1e-14));
}

TEST_CASE("weighted series exponent handling") {
  const WeightedSeries s = weighted_series(1.0, TruncatedDomain(4));
  CHECK_FALSE(s.bound.has_value());
  CHECK(s.sum == doctest::Approx(6.0).epsilon(1e-15));  // prod (1 + 1/k) telescopes to N + 2
  CHECK(weighted_series(0.5, TruncatedDomain(3)).sum > 0.0);
  try {
    weighted_series(0.0, TruncatedDomain(2));
    FAIL("expected invalid exponent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidExponent);
  }
  CHECK_THROWS_AS(weighted_series(-1.0, TruncatedDomain(2)), Error);
}

TEST_CASE("weighted series matches brute enumeration and product") {
  for (double p : {0.5, 1.0, 1.5, 2.0, 3.0, 4.5}) {
    for (unsigned n = 0; n <= 10; ++n) {
      const WeightedSeries s = weighted_series(p, TruncatedDomain(n));
      CHECK(s.sum == doctest::Approx(brute_series(p, n)).epsilon(1e-13));
      CHECK(std::abs(s.sum - s.product) <= 1e-12 * s.product);
    }
  }
}

TEST_CASE("weighted series strictly increasing in N and decreasing in p") {
  for (double p : {1.5, 2.0, 3.0}) {
    for (unsigned n = 0; n < 14; ++n) {
      CHECK(weighted_series(p, TruncatedDomain(n)).sum < weighted_series(p, TruncatedDomain(n + 1)).sum);
    }
  }
  // Gamma_0 = {empty, {0}} carries only weight 1, so the p-dependence starts at N = 1.
  CHECK(weighted_series(2.0, TruncatedDomain(0)).sum == weighted_series(3.0, TruncatedDomain(0)).sum);
  for (unsigned n = 1; n <= 12; ++n) {
    CHECK(weighted_series(2.0, TruncatedDomain(n)).sum > weighted_series(2.5, TruncatedDomain(n)).sum);
    CHECK(weighted_series(2.5, TruncatedDomain(n)).sum > weighted_series(3.0, TruncatedDomain(n)).sum);
  }
}

TEST_CASE("zeta tail sums carry valid error bounds") {
  // Reference zeta values to 20 digits.
  const double zeta2 = 1.64493406684822643647;
  const double zeta3 = 1.20205690315959428540;
  const double zeta4 = 1.08232323371113819152;
  for (auto [s, z] : {std::pair{2.0, zeta2}, std::pair{3.0, zeta3}, std::pair{4.0, zeta4}}) {
    const SeriesEstimate e = power_tail_sum(s, 1);
    CHECK(e.lower() <= z * (1 + 1e-15));
    CHECK(e.upper() >= z * (1 - 1e-15));
    CHECK(std::abs(e.value - z) <= 1e-14 * z);
  }
  // Tail from 100: zeta(2) - sum_{k<100} k^-2.
  double head = 0.0;
  for (int k = 99; k >= 1; --k) head += 1.0 / (double(k) * k);
  CHECK(power_tail_sum(2.0, 100).value == doctest::Approx(zeta2 - head).epsilon(1e-12));
}

TEST_CASE("series bounds dominate the exact constants") {
  const double exp_zeta2 = 5.18066831789711574842;
  CHECK(weighted_series_bound(2.0) >= exp_zeta2 * (1 - 1e-15));
  CHECK(weighted_series_bound(2.0) == doctest::Approx(exp_zeta2).epsilon(1e-13));
  CHECK(weighted_series_bound(3.0) == doctest::Approx(3.32695311000249979).epsilon(1e-13));
  const double sinh_pi_over_pi = 3.67607791037497772070;
  CHECK(full_weighted_series_upper(2.0) >= sinh_pi_over_pi);
  CHECK(full_weighted_series_upper(2.0) == doctest::Approx(sinh_pi_over_pi).epsilon(1e-13));
  CHECK(full_weighted_series_upper(4.0) == doctest::Approx(2.16736062588226195).epsilon(1e-13));
  CHECK_THROWS_AS(weighted_series_bound(1.0), Error);
  CHECK_THROWS_AS(full_weighted_series_upper(1.0), Error);
}
