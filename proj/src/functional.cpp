#include "fockseq/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>

#include "fockseq/error.hpp"

namespace fockseq {

struct FockCoefficients::RuleState {
  // Memo growth stops here; evaluation stays correct, just uncached.
  static constexpr std::size_t kMemoCapacity = std::size_t{1} << 22;

  explicit RuleState(CoefficientRule r) : rule(std::move(r)) {}

  CoefficientRule rule;
  std::mutex mutex;
  std::unordered_map<std::uint64_t, Complex> memo;
};

FockCoefficients::FockCoefficients(CoefficientTable table) {
  for (auto it = table.begin(); it != table.end();) {
    if (it->second == Complex{}) {
      it = table.erase(it);
    } else {
      support_bound_ = std::max(support_bound_, filtration_level(it->first));
      ++it;
    }
  }
  table_ = std::move(table);
}

FockCoefficients::FockCoefficients(CoefficientTable table, unsigned support_bound)
    : FockCoefficients(std::move(table)) {
  if (!table_.empty() && support_bound_ > support_bound) {
    throw Error(ErrorCode::InvalidArgument, "coefficient key outside Gamma_" + std::to_string(support_bound));
  }
  support_bound_ = support_bound;
}

FockCoefficients FockCoefficients::from_rule(CoefficientRule rule) {
  if (!rule) throw Error(ErrorCode::InvalidArgument, "empty coefficient rule");
  FockCoefficients out;
  out.rule_ = std::make_shared<RuleState>(std::move(rule));
  return out;
}

FockCoefficients FockCoefficients::basis(FiniteSubset sigma) {
  return FockCoefficients(CoefficientTable{{sigma, Complex{1.0, 0.0}}});
}

Complex FockCoefficients::evaluate(FiniteSubset sigma) const {
  if (!rule_) {
    const auto it = table_.find(sigma);
    return it == table_.end() ? Complex{} : it->second;
  }
  {
    std::lock_guard lock(rule_->mutex);
    const auto it = rule_->memo.find(sigma.mask());
    if (it != rule_->memo.end()) return it->second;
  }
  const Complex value = rule_->rule(sigma);
  std::lock_guard lock(rule_->mutex);
  if (rule_->memo.size() < RuleState::kMemoCapacity) rule_->memo.emplace(sigma.mask(), value);
  return value;
}

std::optional<unsigned> FockCoefficients::support_bound() const noexcept {
  if (rule_) return std::nullopt;
  return support_bound_;
}

FockCoefficients FockCoefficients::restricted(const TruncatedDomain& domain) const {
  CoefficientTable out;
  for_each_on(domain, [&](FiniteSubset sigma, Complex value) {
    if (value != Complex{}) out.emplace(sigma, value);
  });
  return FockCoefficients(std::move(out), domain.max_index());
}

void FockCoefficients::for_each_on(const TruncatedDomain& domain,
                                   const std::function<void(FiniteSubset, Complex)>& fn) const {
  if (!rule_) {
    for (const auto& [sigma, value] : table_) {
      if (domain.contains(sigma)) fn(sigma, value);
    }
    return;
  }
  require_enumerable(domain);
  for (FiniteSubset sigma : domain) fn(sigma, evaluate(sigma));
}

FockCoefficients combine(const FockCoefficients& a, const FockCoefficients& b,
                         const std::function<Complex(Complex, Complex)>& op) {
  if (a.is_rule_backed() || b.is_rule_backed()) {
    return FockCoefficients::from_rule([a, b, op](FiniteSubset sigma) { return op(a(sigma), b(sigma)); });
  }
  CoefficientTable out;
  for (const auto& [sigma, value] : a.table()) out.emplace(sigma, op(value, b(sigma)));
  for (const auto& [sigma, value] : b.table()) {
    if (!a.table().contains(sigma)) out.emplace(sigma, op(Complex{}, value));
  }
  return FockCoefficients(std::move(out), std::max(*a.support_bound(), *b.support_bound()));
}

FockCoefficients operator+(const FockCoefficients& a, const FockCoefficients& b) {
  return combine(a, b, std::plus<Complex>());
}

FockCoefficients operator-(const FockCoefficients& a, const FockCoefficients& b) {
  return combine(a, b, std::minus<Complex>());
}

FockCoefficients operator*(Complex scale, const FockCoefficients& a) {
  return combine(a, FockCoefficients(), [scale](Complex x, Complex) { return scale * x; });
}

double max_difference(const FockCoefficients& a, const FockCoefficients& b, const TruncatedDomain& domain) {
  double worst = 0.0;
  if (!a.is_rule_backed() && !b.is_rule_backed()) {
    a.for_each_on(domain, [&](FiniteSubset s, Complex v) { worst = std::max(worst, std::abs(v - b(s))); });
    b.for_each_on(domain, [&](FiniteSubset s, Complex v) { worst = std::max(worst, std::abs(a(s) - v)); });
    return worst;
  }
  require_enumerable(domain);
  for (FiniteSubset s : domain) worst = std::max(worst, std::abs(a(s) - b(s)));
  return worst;
}

NormEstimate sobolev_norm(const FockCoefficients& phi, double p, const TruncatedDomain& domain) {
  NormEstimate out;
  double sum = 0.0;
  phi.for_each_on(domain, [&](FiniteSubset sigma, Complex value) {
    sum += std::pow(weight_value(sigma), 2.0 * p) * std::norm(value);
  });
  if (phi.is_rule_backed()) {
    out.lower_bound = true;
  } else {
    for (const auto& entry : phi.table()) {
      if (!domain.contains(entry.first)) {
        out.lower_bound = true;
        break;
      }
    }
  }
  if (!std::isfinite(sum)) {
    out.value = std::numeric_limits<double>::infinity();
    out.overflow = true;
    return out;
  }
  out.value = std::sqrt(sum);
  return out;
}

namespace {

void validate_certificate(const GrowthCertificate& cert) {
  if (!(cert.scale >= 0.0) || !(cert.order >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "growth certificate requires scale >= 0 and order >= 0");
  }
}

}  // namespace

double dual_norm_bound(const GrowthCertificate& cert, double q) {
  validate_certificate(cert);
  if (!(q > cert.order + 0.5)) {
    throw Error(ErrorCode::InsufficientOrder, "dual norm bound requires q > p + 1/2 (q = " + std::to_string(q) +
                                                  ", p = " + std::to_string(cert.order) + ")");
  }
  if (cert.scale == 0.0) return 0.0;
  return cert.scale * std::sqrt(full_weighted_series_upper(2.0 * (q - cert.order)));
}

Complex pairing(const FockCoefficients& phi, const FockCoefficients& xi, const TruncatedDomain& domain) {
  Complex sum{};
  if (!phi.is_rule_backed()) {
    phi.for_each_on(domain, [&](FiniteSubset s, Complex v) { sum += v * xi(s); });
  } else {
    xi.for_each_on(domain, [&](FiniteSubset s, Complex v) { sum += phi(s) * v; });
  }
  return sum;
}

std::optional<double> pairing_truncation_bound(const GrowthCertificate& cert, const FockCoefficients& xi,
                                               const TruncatedDomain& domain) {
  validate_certificate(cert);
  if (xi.is_rule_backed()) return std::nullopt;
  double bound = 0.0;
  for (const auto& [sigma, value] : xi.table()) {
    if (!domain.contains(sigma)) bound += cert.scale * std::pow(weight_value(sigma), cert.order) * std::abs(value);
  }
  return bound;
}

double growth_ratio(Complex value, FiniteSubset sigma, double order) {
  const double magnitude = std::abs(value);
  if (magnitude == 0.0) return 0.0;
  return magnitude * std::pow(weight_value(sigma), -order);
}

bool is_interior_maximizer(FiniteSubset sigma, const TruncatedDomain& domain) {
  const double w = weight_value(sigma);
  return w == 1.0 || 2.0 * w < domain.max_weight();
}

GrowthFit fit_growth(const FockCoefficients& phi, const TruncatedDomain& domain, std::span<const double> p_grid) {
  if (p_grid.empty()) throw Error(ErrorCode::InvalidArgument, "growth fit needs a nonempty order grid");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "growth orders must be nonnegative");
    if (i > 0 && !(p_grid[i] > p_grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "growth order grid must be strictly ascending");
    }
  }

  std::vector<std::pair<FiniteSubset, Complex>> values;
  phi.for_each_on(domain, [&](FiniteSubset s, Complex v) {
    if (v != Complex{}) values.emplace_back(s, v);
  });

  // Near-ties (rounding in lambda^{-p}) resolve to the lightest subset.
  constexpr double kTieSlack = 1e-12;
  GrowthFit fit;
  fit.curve.reserve(p_grid.size());
  for (double p : p_grid) {
    GrowthPoint point{p, 0.0, FiniteSubset{}};
    for (const auto& [s, v] : values) point.scale = std::max(point.scale, growth_ratio(v, s, p));
    if (point.scale > 0.0) {
      double best_weight = std::numeric_limits<double>::infinity();
      for (const auto& [s, v] : values) {
        if (growth_ratio(v, s, p) >= point.scale * (1.0 - kTieSlack)) {
          const double w = weight_value(s);
          if (w < best_weight) {
            best_weight = w;
            point.maximizer = s;
          }
        }
      }
    }
    fit.curve.push_back(point);
  }
  for (const GrowthPoint& point : fit.curve) {
    if (is_interior_maximizer(point.maximizer, domain)) {
      fit.selected = GrowthCertificate{point.scale, point.order, domain};
      break;
    }
  }
  return fit;
}

CertificateCheck verify_certificate(const FockCoefficients& phi, const GrowthCertificate& cert,
                                    const TruncatedDomain& domain) {
  validate_certificate(cert);
  CertificateCheck check;
  phi.for_each_on(domain, [&](FiniteSubset s, Complex v) {
    if (check.holds && growth_ratio(v, s, cert.order) > cert.scale) {
      check.holds = false;
      check.witness = s;
    }
  });
  return check;
}

}  // namespace fockseq
