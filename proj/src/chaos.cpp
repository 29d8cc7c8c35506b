#include "fockseq/chaos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "fockseq/error.hpp"

namespace fockseq {

namespace {

double sign_of_point(std::size_t point, unsigned k) { return ((point >> k) & 1U) ? -1.0 : 1.0; }

double walsh_value(std::uint64_t sigma_mask, std::size_t point) {
  return (std::popcount(sigma_mask & static_cast<std::uint64_t>(point)) & 1) ? -1.0 : 1.0;
}

void require_same_space(const RandomFunctional& f, const RandomFunctional& g) {
  if (!(f.space() == g.space())) {
    throw Error(ErrorCode::SpaceMismatch, "horizons " + std::to_string(f.space().horizon()) + " and " +
                                              std::to_string(g.space().horizon()) + " differ");
  }
}

void require_index(const SampleSpace& space, unsigned n) {
  if (n > space.horizon()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + std::to_string(n) + " beyond horizon " + std::to_string(space.horizon()));
  }
}

double unit_interval(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace

SampleSpace::SampleSpace(unsigned horizon) : horizon_(horizon) {
  require_enumerable(TruncatedDomain(horizon));
}

double SampleSpace::point_mass() const noexcept { return std::ldexp(1.0, -static_cast<int>(horizon_ + 1)); }

RandomFunctional::RandomFunctional(SampleSpace space) : space_(space), values_(space.point_count()) {}

RandomFunctional::RandomFunctional(SampleSpace space, std::vector<Complex> values)
    : space_(space), values_(std::move(values)) {
  if (values_.size() != space_.point_count()) {
    throw Error(ErrorCode::InvalidArgument, "random functional on horizon " + std::to_string(space_.horizon()) +
                                                " needs " + std::to_string(space_.point_count()) + " values, got " +
                                                std::to_string(values_.size()));
  }
}

double max_abs_difference(const RandomFunctional& f, const RandomFunctional& g) {
  require_same_space(f, g);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.values().size(); ++i) worst = std::max(worst, std::abs(f[i] - g[i]));
  return worst;
}

void walsh_hadamard_transform(std::span<Complex> data) {
  const std::size_t n = data.size();
  if (!std::has_single_bit(n)) throw Error(ErrorCode::InvalidArgument, "transform length must be a power of two");
  for (std::size_t half = 1; half < n; half <<= 1) {
    for (std::size_t block = 0; block < n; block += 2 * half) {
      for (std::size_t i = block; i < block + half; ++i) {
        const Complex a = data[i];
        const Complex b = data[i + half];
        data[i] = a + b;
        data[i + half] = a - b;
      }
    }
  }
}

RandomFunctional noise(const SampleSpace& space, unsigned n) {
  require_index(space, n);
  std::vector<Complex> values(space.point_count());
  for (std::size_t point = 0; point < values.size(); ++point) values[point] = sign_of_point(point, n);
  return RandomFunctional(space, std::move(values));
}

RandomFunctional walsh(const SampleSpace& space, FiniteSubset sigma) {
  if (!space.domain().contains(sigma)) {
    throw Error(ErrorCode::OutOfHorizon,
                sigma.to_string() + " is not within horizon " + std::to_string(space.horizon()));
  }
  std::vector<Complex> values(space.point_count());
  for (std::size_t point = 0; point < values.size(); ++point) values[point] = walsh_value(sigma.mask(), point);
  return RandomFunctional(space, std::move(values));
}

Complex inner_product(const RandomFunctional& f, const RandomFunctional& g) {
  require_same_space(f, g);
  Complex sum{};
  for (std::size_t i = 0; i < f.values().size(); ++i) sum += std::conj(f[i]) * g[i];
  return sum * f.space().point_mass();
}

Complex expectation(const RandomFunctional& f) {
  Complex sum{};
  for (Complex v : f.values()) sum += v;
  return sum * f.space().point_mass();
}

double l2_norm(const RandomFunctional& f) { return std::sqrt(inner_product(f, f).real()); }

FockCoefficients chaos_expand(const RandomFunctional& f) {
  std::vector<Complex> spectrum(f.values().begin(), f.values().end());
  walsh_hadamard_transform(spectrum);
  const double mass = f.space().point_mass();
  CoefficientTable table;
  for (std::size_t sigma = 0; sigma < spectrum.size(); ++sigma) {
    const Complex c = spectrum[sigma] * mass;
    if (c != Complex{}) table.emplace_hint(table.end(), FiniteSubset::from_mask(sigma), c);
  }
  return FockCoefficients(std::move(table), f.space().horizon());
}

RandomFunctional synthesize(const FockCoefficients& c, const SampleSpace& space) {
  if (c.is_rule_backed()) {
    throw Error(ErrorCode::OutOfHorizon, "rule-backed coefficients have unbounded support; restrict them first");
  }
  const TruncatedDomain domain = space.domain();
  std::vector<Complex> values(space.point_count());
  for (const auto& [sigma, value] : c.table()) {
    if (!domain.contains(sigma)) {
      throw Error(ErrorCode::OutOfHorizon, "coefficient at " + sigma.to_string() + " is beyond horizon " +
                                               std::to_string(space.horizon()));
    }
    values[static_cast<std::size_t>(sigma.mask())] = value;
  }
  walsh_hadamard_transform(values);
  return RandomFunctional(space, std::move(values));
}

RandomFunctional conditional_expectation(const RandomFunctional& f, unsigned n) {
  require_index(f.space(), n);
  std::vector<Complex> data(f.values().begin(), f.values().end());
  walsh_hadamard_transform(data);
  const double mass = f.space().point_mass();
  for (std::size_t sigma = 0; sigma < data.size(); ++sigma) {
    data[sigma] = indicator(FiniteSubset::from_mask(sigma), n) ? data[sigma] * mass : Complex{};
  }
  walsh_hadamard_transform(data);
  return RandomFunctional(f.space(), std::move(data));
}

RandomFunctional conditional_expectation_direct(const RandomFunctional& f, unsigned n) {
  require_index(f.space(), n);
  const std::size_t atoms = std::size_t{1} << (n + 1);
  const std::size_t low_mask = atoms - 1;
  std::vector<Complex> atom_sum(atoms);
  for (std::size_t point = 0; point < f.values().size(); ++point) atom_sum[point & low_mask] += f[point];
  const double atom_size = static_cast<double>(f.values().size() / atoms);
  std::vector<Complex> values(f.values().size());
  for (std::size_t point = 0; point < values.size(); ++point) values[point] = atom_sum[point & low_mask] / atom_size;
  return RandomFunctional(f.space(), std::move(values));
}

NormalMartingaleReport verify_normal_martingale(const SampleSpace& space, double tol) {
  const std::vector<double> fair(space.horizon() + 1, 0.5);
  return verify_normal_martingale(space, fair, tol);
}

NormalMartingaleReport verify_normal_martingale(const SampleSpace& space, std::span<const double> plus_probability,
                                                double tol) {
  if (plus_probability.size() != space.horizon() + 1) {
    throw Error(ErrorCode::InvalidArgument, "need one coin probability per coordinate");
  }
  const std::size_t points = space.point_count();
  std::vector<double> mass(points, 1.0);
  for (std::size_t point = 0; point < points; ++point) {
    for (unsigned k = 0; k <= space.horizon(); ++k) {
      mass[point] *= ((point >> k) & 1U) ? 1.0 - plus_probability[k] : plus_probability[k];
    }
  }

  NormalMartingaleReport report;
  report.mean.name = "conditional mean";
  report.variance.name = "conditional second moment";

  // previous[point] = M_{n-1}(point); M_{-1} = 0.
  std::vector<double> previous(points, 0.0);
  for (unsigned n = 0; n <= space.horizon(); ++n) {
    const std::size_t atoms = std::size_t{1} << n;  // atoms of F_{n-1}
    const std::size_t low_mask = atoms - 1;
    std::vector<double> total_mass(atoms, 0.0), first(atoms, 0.0), second(atoms, 0.0);
    std::vector<double> current(points);
    for (std::size_t point = 0; point < points; ++point) {
      current[point] = previous[point] + sign_of_point(point, n);
      const std::size_t atom = point & low_mask;
      total_mass[atom] += mass[point];
      first[atom] += mass[point] * current[point];
      second[atom] += mass[point] * current[point] * current[point];
    }
    for (std::size_t atom = 0; atom < atoms; ++atom) {
      if (total_mass[atom] == 0.0) continue;
      const double m_prev = previous[atom];  // constant on the atom; `atom` is one of its points
      report.mean.max_deviation = std::max(report.mean.max_deviation, std::abs(first[atom] / total_mass[atom] - m_prev));
      report.variance.max_deviation =
          std::max(report.variance.max_deviation, std::abs(second[atom] / total_mass[atom] - (m_prev * m_prev + 1.0)));
    }
    previous = std::move(current);
  }
  report.mean.passed = report.mean.max_deviation <= tol;
  report.variance.passed = report.variance.max_deviation <= tol;
  return report;
}

RandomFunctional random_functional(const SampleSpace& space, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<Complex> values(space.point_count());
  for (Complex& v : values) {
    const double re = 2.0 * unit_interval(engine) - 1.0;
    const double im = 2.0 * unit_interval(engine) - 1.0;
    v = Complex{re, im};
  }
  return RandomFunctional(space, std::move(values));
}

Complex estimate_coefficient(const RandomFunctional& f, FiniteSubset sigma, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  if (!f.space().domain().contains(sigma)) {
    throw Error(ErrorCode::OutOfHorizon, sigma.to_string() + " is beyond the horizon");
  }
  std::mt19937_64 engine(seed);
  const std::uint64_t point_mask = f.space().point_count() - 1;
  Complex sum{};
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t point = static_cast<std::size_t>(engine() & point_mask);
    sum += walsh_value(sigma.mask(), point) * f[point];
  }
  return sum / static_cast<double>(samples);
}

}  // namespace fockseq
