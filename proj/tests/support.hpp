#ifndef VILLE_TESTS_SUPPORT_HPP
#define VILLE_TESTS_SUPPORT_HPP

// Random instances shared by the unit tests and the acceptance run.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ville/ville.hpp"

namespace ville::fixtures {

// Rational in [0, 1] with denominator `den`.
inline Rational random_unit(Rng& rng, long den = 1000) {
  return from_ratio<Rational>(static_cast<long>(rng.uniform_int(0, static_cast<std::uint64_t>(den))), den);
}

template <Scalar S>
S as(const Rational& q) {
  if constexpr (std::same_as<S, double>) {
    return q.get_d();
  } else {
    return q;
  }
}

// Random positive integer weights, normalized; some sequences get weight 0.
template <Scalar S>
JointDistribution<S> random_distribution(Rng& rng, std::size_t n, double zero_fraction = 0.2) {
  std::vector<long> raw(std::size_t{1} << n);
  long total = 0;
  for (long& w : raw) {
    w = rng.uniform() < zero_fraction ? 0 : static_cast<long>(rng.uniform_int(1, 20));
    total += w;
  }
  if (total == 0) total = raw[0] = 1;
  std::vector<S> weights;
  weights.reserve(raw.size());
  for (long w : raw) weights.push_back(from_ratio<S>(w, total));
  return JointDistribution<S>(n, std::move(weights));
}

inline belief::Frame frame_of_size(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
  return belief::Frame(labels);
}

// Up to `max_focal` random non-empty focal sets with integer weights.
template <Scalar S>
belief::MassFunction<S> random_mass(Rng& rng, const belief::Frame& frame, std::size_t max_focal = 4) {
  const std::size_t k = rng.uniform_int(1, max_focal);
  std::map<belief::Subset, long> raw;
  long total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto set = static_cast<belief::Subset>(rng.uniform_int(1, frame.full()));
    const long w = static_cast<long>(rng.uniform_int(1, 12));
    raw[set] += w;
    total += w;
  }
  std::map<belief::Subset, S> masses;
  for (const auto& [set, w] : raw) masses[set] = from_ratio<S>(w, total);
  return belief::MassFunction<S>(frame, std::move(masses), std::same_as<S, double> ? 1e-9 : 0.0);
}

template <Scalar S>
belief::MassFunction<S> random_bayesian(Rng& rng, const belief::Frame& frame) {
  std::vector<long> raw(frame.size());
  long total = 0;
  for (long& w : raw) total += (w = static_cast<long>(rng.uniform_int(0, 9)));
  if (total == 0) total = raw[0] = 1;
  std::vector<S> p;
  for (long w : raw) p.push_back(from_ratio<S>(w, total));
  return belief::MassFunction<S>::bayesian(frame, p);
}

// Mapping with `size` source values and random images (possibly repeated,
// never empty unless allow_empty).
template <Scalar S>
belief::MultivaluedMapping<S> random_mapping(Rng& rng, const belief::Frame& frame, std::size_t size,
                                             bool allow_empty = false, std::string id = "X") {
  belief::MultivaluedMapping<S> map;
  map.id = std::move(id);
  map.frame = frame;
  std::vector<long> raw(size);
  long total = 0;
  for (long& w : raw) total += (w = static_cast<long>(rng.uniform_int(1, 9)));
  for (std::size_t i = 0; i < size; ++i) {
    map.source.weights.push_back(from_ratio<S>(raw[i], total));
    map.gamma.push_back(static_cast<belief::Subset>(rng.uniform_int(allow_empty ? 0 : 1, frame.full())));
  }
  return map;
}

// The safe built-in skeptics, by name, for property tests.
template <Scalar S>
std::vector<std::pair<std::string, SkepticStrategy<S>>> safe_skeptics() {
  return {
      {"zero", skeptic_zero<S>()},
      {"fractional(1/2)", skeptic_fractional<S>(from_ratio<S>(1, 2))},
      {"fractional(-1)", skeptic_fractional<S>(S(-1))},
      {"lln(1/4)", skeptic_lln<S>(from_ratio<S>(1, 4))},
      {"all_in(1)", skeptic_all_in<S>(1)},
      {"all_in(0)", skeptic_all_in<S>(0)},
  };
}

}  // namespace ville::fixtures

#endif  // VILLE_TESTS_SUPPORT_HPP
