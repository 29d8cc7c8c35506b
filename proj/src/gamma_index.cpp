#include "fockseq/gamma_index.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>

#include "fockseq/error.hpp"

namespace fockseq {

FiniteSubset::FiniteSubset(std::initializer_list<unsigned> elements)
    : FiniteSubset(from_elements(std::span<const unsigned>(elements.begin(), elements.size()))) {}

FiniteSubset FiniteSubset::from_elements(std::span<const unsigned> elements) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const unsigned k = elements[i];
    if (k > kMaxSubsetIndex) {
      throw Error(ErrorCode::InvalidArgument,
                  "subset element " + std::to_string(k) + " exceeds compact index limit 63");
    }
    if (i > 0 && elements[i - 1] >= k) {
      throw Error(ErrorCode::InvalidArgument, "subset elements must be strictly increasing");
    }
    mask |= std::uint64_t{1} << k;
  }
  return from_mask(mask);
}

FiniteSubset FiniteSubset::singleton(unsigned k) {
  if (k > kMaxSubsetIndex) {
    throw Error(ErrorCode::InvalidArgument, "subset element exceeds compact index limit 63");
  }
  return from_mask(std::uint64_t{1} << k);
}

unsigned FiniteSubset::size() const noexcept { return static_cast<unsigned>(std::popcount(mask_)); }

std::optional<unsigned> FiniteSubset::max_element() const noexcept {
  if (mask_ == 0) return std::nullopt;
  return 63U - static_cast<unsigned>(std::countl_zero(mask_));
}

std::vector<unsigned> FiniteSubset::elements() const {
  std::vector<unsigned> out;
  out.reserve(size());
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(static_cast<unsigned>(std::countr_zero(m)));
  }
  return out;
}

std::string FiniteSubset::to_string() const {
  std::string out = "[";
  bool first = true;
  for (unsigned k : elements()) {
    if (!first) out += ',';
    out += std::to_string(k);
    first = false;
  }
  out += ']';
  return out;
}

unsigned filtration_level(FiniteSubset sigma) noexcept { return sigma.max_element().value_or(0); }

TruncatedDomain::TruncatedDomain(unsigned max_index) : max_index_(max_index) {
  if (max_index > kMaxDomainIndex) {
    throw Error(ErrorCode::DomainTooLarge,
                "truncated domain index " + std::to_string(max_index) + " exceeds 62");
  }
}

double TruncatedDomain::max_weight() const noexcept {
  double w = 1.0;
  for (unsigned k = 0; k <= max_index_; ++k) w *= static_cast<double>(k + 1);
  return w;
}

void require_enumerable(const TruncatedDomain& domain, unsigned guard) {
  if (domain.max_index() > guard) {
    throw Error(ErrorCode::DomainTooLarge, "domain Gamma_" + std::to_string(domain.max_index()) +
                                               " exceeds enumeration guard " + std::to_string(guard));
  }
}

std::vector<FiniteSubset> enumerate(const TruncatedDomain& domain, unsigned guard) {
  require_enumerable(domain, guard);
  std::vector<FiniteSubset> out;
  out.reserve(static_cast<std::size_t>(domain.size()));
  for (FiniteSubset s : domain) out.push_back(s);
  return out;
}

Weight weight(FiniteSubset sigma) {
  Weight w = 1;
  for (std::uint64_t m = sigma.mask(); m != 0; m &= m - 1) {
    const Weight factor = static_cast<Weight>(std::countr_zero(m)) + 1;
    if (__builtin_mul_overflow(w, factor, &w)) {
      throw Error(ErrorCode::ArithmeticOverflow,
                  "weight of " + sigma.to_string() + " exceeds 128 bits; use log_weight");
    }
  }
  return w;
}

std::string weight_to_string(Weight w) {
  if (w == 0) return "0";
  std::string digits;
  while (w != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(w % 10)));
    w /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

double weight_value(FiniteSubset sigma) noexcept {
  double w = 1.0;
  for (std::uint64_t m = sigma.mask(); m != 0; m &= m - 1) {
    w *= static_cast<double>(std::countr_zero(m) + 1);
  }
  return w;
}

double log_weight(FiniteSubset sigma) noexcept {
  double lw = 0.0;
  for (std::uint64_t m = sigma.mask(); m != 0; m &= m - 1) {
    lw += std::log(static_cast<double>(std::countr_zero(m) + 1));
  }
  return lw;
}

int indicator(FiniteSubset sigma, unsigned n) noexcept {
  if (n >= kMaxSubsetIndex) return 1;
  return (sigma.mask() >> (n + 1)) == 0 ? 1 : 0;
}

namespace {

// B_{2j} / (2j)! for j = 1..9.
constexpr std::array<double, 9> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
};

constexpr std::uint64_t kEulerMaclaurinStart = 32;

}  // namespace

SeriesEstimate power_tail_sum(double s, std::uint64_t start) {
  if (!(s > 1.0)) {
    throw Error(ErrorCode::InvalidExponent, "power series sum_k k^{-s} diverges for s <= 1");
  }
  if (start == 0) throw Error(ErrorCode::InvalidArgument, "power series starts at k >= 1");

  const std::uint64_t a = std::max(start, kEulerMaclaurinStart);
  double direct = 0.0;
  for (std::uint64_t k = a; k-- > start;) direct += std::pow(static_cast<double>(k), -s);

  const double ad = static_cast<double>(a);
  double corrections = std::pow(ad, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(ad, -s);
  // (s)_{2j-1} a^{-s-2j+1}, updated by (s+2j-1)(s+2j) / a^2 per step.
  double derivative = s * std::pow(ad, -s - 1.0);
  double next_term = 0.0;
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    const double term = kBernoulliOverFactorial[j] * derivative;
    if (j + 1 == kBernoulliOverFactorial.size()) {
      next_term = term;
    } else {
      corrections += term;
    }
    const double r = 2.0 * static_cast<double>(j) + 1.0;
    derivative *= (s + r) * (s + r + 1.0) / (ad * ad);
  }
  SeriesEstimate est;
  est.value = direct + corrections;
  est.error_bound = std::abs(next_term) + 4.0 * std::numeric_limits<double>::epsilon() * est.value;
  return est;
}

double weighted_series_bound(double p) {
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidExponent, "weighted series bound requires p > 1");
  return std::exp(power_tail_sum(p, 1).upper());
}

double full_weighted_series_upper(double s) {
  if (!(s > 1.0)) {
    throw Error(ErrorCode::InvalidExponent, "weighted series over Gamma diverges for exponent <= 1");
  }
  // log prod (1 + k^{-s}) = sum_{k<=K} log1p(k^{-s}) + tail, with
  // log1p(x) <= x - x^2/2 + x^3/3 bounding the tail from above.
  constexpr std::uint64_t kHead = 4096;
  double head = 0.0;
  for (std::uint64_t k = kHead; k >= 1; --k) head += std::log1p(std::pow(static_cast<double>(k), -s));
  const double tail = power_tail_sum(s, kHead + 1).upper() - 0.5 * power_tail_sum(2.0 * s, kHead + 1).lower() +
                      power_tail_sum(3.0 * s, kHead + 1).upper() / 3.0;
  const double log_upper = head + tail;
  return std::exp(log_upper) * (1.0 + 8.0 * std::numeric_limits<double>::epsilon());
}

WeightedSeries weighted_series(double p, const TruncatedDomain& domain) {
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidExponent, "weighted series requires p > 0");
  require_enumerable(domain);

  WeightedSeries out;
  for (FiniteSubset sigma : domain) out.sum += std::pow(weight_value(sigma), -p);

  out.product = 1.0;
  for (unsigned k = 1; k <= domain.max_index() + 1; ++k) {
    out.product *= 1.0 + std::pow(static_cast<double>(k), -p);
  }
  if (p > 1.0) out.bound = weighted_series_bound(p);
  return out;
}

}  // namespace fockseq
