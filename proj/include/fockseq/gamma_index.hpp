#pragma once

// Finite subsets of the nonnegative integers, the weight lambda_sigma and
// truncated domains Gamma_{n]} = 2^{0..n}.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fockseq {

inline constexpr unsigned kMaxSubsetIndex = 63;
inline constexpr unsigned kMaxDomainIndex = 62;
inline constexpr unsigned kDefaultEnumerationGuard = 30;

/// A finite subset of {0, ..., 63} stored as a bitmask (bit k set iff k is
/// an element). Ordering is ascending bitmask value.
class FiniteSubset {
 public:
  constexpr FiniteSubset() noexcept = default;

  /// Elements must be strictly increasing and at most 63.
  FiniteSubset(std::initializer_list<unsigned> elements);

  static constexpr FiniteSubset from_mask(std::uint64_t mask) noexcept {
    FiniteSubset s;
    s.mask_ = mask;
    return s;
  }
  static FiniteSubset from_elements(std::span<const unsigned> elements);
  static FiniteSubset singleton(unsigned k);

  constexpr std::uint64_t mask() const noexcept { return mask_; }
  constexpr bool empty() const noexcept { return mask_ == 0; }
  unsigned size() const noexcept;
  bool contains(unsigned k) const noexcept { return k <= kMaxSubsetIndex && ((mask_ >> k) & 1U); }
  std::optional<unsigned> max_element() const noexcept;
  std::vector<unsigned> elements() const;

  constexpr bool is_subset_of(FiniteSubset other) const noexcept {
    return (mask_ & ~other.mask_) == 0;
  }
  constexpr bool disjoint(FiniteSubset other) const noexcept { return (mask_ & other.mask_) == 0; }
  constexpr FiniteSubset unite(FiniteSubset other) const noexcept { return from_mask(mask_ | other.mask_); }
  constexpr FiniteSubset intersect(FiniteSubset other) const noexcept {
    return from_mask(mask_ & other.mask_);
  }

  /// "[0,2,5]"; "[]" for the empty set.
  std::string to_string() const;

  friend constexpr bool operator==(FiniteSubset, FiniteSubset) noexcept = default;
  friend constexpr auto operator<=>(FiniteSubset a, FiniteSubset b) noexcept { return a.mask_ <=> b.mask_; }

 private:
  std::uint64_t mask_ = 0;
};

/// Smallest n with sigma in Gamma_{n]}: the maximum element, or 0 for the empty set.
unsigned filtration_level(FiniteSubset sigma) noexcept;

/// Gamma_{N]}: every subset of {0, ..., N}, iterated in ascending bitmask order.
class TruncatedDomain {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = FiniteSubset;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = FiniteSubset;

    iterator() = default;
    explicit iterator(std::uint64_t mask) : mask_(mask) {}
    FiniteSubset operator*() const { return FiniteSubset::from_mask(mask_); }
    iterator& operator++() {
      ++mask_;
      return *this;
    }
    iterator operator++(int) {
      iterator old = *this;
      ++mask_;
      return old;
    }
    friend bool operator==(iterator, iterator) = default;

   private:
    std::uint64_t mask_ = 0;
  };

  /// max_index must not exceed 62.
  explicit TruncatedDomain(unsigned max_index);

  unsigned max_index() const noexcept { return max_index_; }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << (max_index_ + 1); }
  bool contains(FiniteSubset sigma) const noexcept { return (sigma.mask() >> (max_index_ + 1)) == 0; }
  /// Largest weight attained on the domain, (N+1)!, as a double.
  double max_weight() const noexcept;

  iterator begin() const { return iterator(0); }
  iterator end() const { return iterator(size()); }

  friend bool operator==(TruncatedDomain, TruncatedDomain) = default;

 private:
  unsigned max_index_;
};

/// Throws DomainTooLarge when the domain is beyond the full-enumeration guard.
void require_enumerable(const TruncatedDomain& domain, unsigned guard = kDefaultEnumerationGuard);

/// All 2^(N+1) subsets, ascending bitmask order.
std::vector<FiniteSubset> enumerate(const TruncatedDomain& domain,
                                    unsigned guard = kDefaultEnumerationGuard);

__extension__ typedef unsigned __int128 Weight;

/// lambda_sigma = prod_{k in sigma} (k + 1), exact. Throws ArithmeticOverflow
/// beyond 128 bits; use log_weight for such subsets.
Weight weight(FiniteSubset sigma);
std::string weight_to_string(Weight w);

/// lambda_sigma rounded to double (exact while below 2^53).
double weight_value(FiniteSubset sigma) noexcept;
double log_weight(FiniteSubset sigma) noexcept;

/// I_{n]}(sigma): 1 iff sigma is a subset of {0, ..., n}.
int indicator(FiniteSubset sigma, unsigned n) noexcept;

/// Sum_{k >= start} k^{-s} for s > 1, via Euler-Maclaurin; `error_bound`
/// is the magnitude of the first omitted correction term.
struct SeriesEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  double upper() const noexcept { return value + error_bound; }
  double lower() const noexcept { return value - error_bound; }
};
SeriesEstimate power_tail_sum(double s, std::uint64_t start = 1);

/// exp(sum_{k>=1} k^{-p}), an upper bound on the full weighted series; p > 1.
double weighted_series_bound(double p);

/// Upper bound on sum over all of Gamma of lambda_sigma^{-s} = prod_{k>=1}(1 + k^{-s}); s > 1.
double full_weighted_series_upper(double s);

struct WeightedSeries {
  double sum = 0.0;      // direct enumeration over the domain
  double product = 0.0;  // prod_{k=1}^{N+1} (1 + k^{-p})
  std::optional<double> bound;  // present only when p > 1
};

/// sum_{sigma in Gamma_{N]}} lambda_sigma^{-p}. Throws InvalidExponent for p <= 0.
WeightedSeries weighted_series(double p, const TruncatedDomain& domain);

}  // namespace fockseq
