#ifndef VILLE_STRATEGIES_HPP
#define VILLE_STRATEGIES_HPP

// Built-in players for both protocols.
//
// Every strategy is a pure function of (parameters, seed, history).  Some
// keep a memo of work already done on the current history so that a game of
// N rounds costs O(N) rather than O(N^2); the memo is validated against the
// history on every call and rebuilt when the history is not an extension of
// the one it was built from.  Strategies are copied into each game, so a
// single instance can be reused across games and threads.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ville/error.hpp"
#include "ville/game.hpp"
#include "ville/rng.hpp"
#include "ville/scalar.hpp"

namespace ville {

inline constexpr std::size_t kMaxSequenceLength = 20;

// Outcome sequences of length n are indexed by the n-bit integer whose most
// significant bit is y_1.
inline std::string sequence_bits(std::uint32_t index, std::size_t n) {
  std::string bits(n, '0');
  for (std::size_t i = 0; i < n; ++i)
    if (index >> (n - 1 - i) & 1U) bits[i] = '1';
  return bits;
}

// Probability weights on the 2^n binary sequences of length n.
template <Scalar S>
class JointDistribution {
 public:
  JointDistribution(std::size_t n, std::vector<S> weights) : n_(n), weights_(std::move(weights)) {
    if (n_ < 1 || n_ > kMaxSequenceLength)
      throw CapacityError("joint distributions support 1 to 20 outcomes");
    if (weights_.size() != (std::size_t{1} << n_))
      throw DomainError("expected 2^n weights for n = " + std::to_string(n_));
    S total = 0;
    for (const S& w : weights_) {
      if (!is_finite(w) || w < 0) throw DomainError("weights must be finite and nonnegative");
      total += w;
    }
    if (!nearly_equal(total, S(1), 1e-12)) throw DomainError("weights must sum to 1");
    build_marginals();
  }

  // Independent Bernoulli(theta) outcomes.
  static JointDistribution product(std::size_t n, const S& theta) {
    if (theta < 0 || theta > 1) throw DomainError("theta must lie in [0, 1]");
    if (n < 1 || n > kMaxSequenceLength) throw CapacityError("joint distributions support 1 to 20 outcomes");
    std::vector<S> w(std::size_t{1} << n);
    for (std::uint32_t idx = 0; idx < w.size(); ++idx) {
      S v = 1;
      for (std::size_t i = 0; i < n; ++i) v *= (idx >> i & 1U) ? theta : S(S(1) - theta);
      w[idx] = v;
    }
    return JointDistribution(n, std::move(w));
  }

  std::size_t length() const noexcept { return n_; }
  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<S>& weights() const noexcept { return weights_; }
  const S& probability(std::uint32_t index) const { return weights_.at(index); }

  // Probability of the length-k prefix whose bits are `prefix`.
  const S& prefix_probability(std::size_t k, std::uint32_t prefix) const { return marginals_.at(k).at(prefix); }

  // P(y_{k+1} = 1 | first k outcomes equal `prefix`).
  S conditional_one(std::size_t k, std::uint32_t prefix) const {
    if (k >= n_) throw DomainError("no outcome remains after the full sequence");
    const S& denom = marginals_[k].at(prefix);
    if (denom == 0) throw NullEventError("prefix " + sequence_bits(prefix, k) + " has probability zero");
    return S(marginals_[k + 1][(prefix << 1) | 1U] / denom);
  }

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

 private:
  void build_marginals() {
    marginals_.assign(n_ + 1, {});
    marginals_[n_] = weights_;
    for (std::size_t k = n_; k-- > 0;) {
      marginals_[k].resize(std::size_t{1} << k);
      for (std::uint32_t pre = 0; pre < marginals_[k].size(); ++pre)
        marginals_[k][pre] = marginals_[k + 1][pre << 1] + marginals_[k + 1][(pre << 1) | 1U];
    }
  }

  std::size_t n_;
  std::vector<S> weights_;
  std::vector<std::vector<S>> marginals_;  // marginals_[k][prefix]
};

// Bits of the outcomes observed so far (forecasting protocol).
template <Scalar S>
std::uint32_t observed_prefix(std::span<const Round<S>> past) {
  std::uint32_t prefix = 0;
  for (const auto& r : past) prefix = (prefix << 1) | (r.y == 1 ? 1U : 0U);
  return prefix;
}

// ---------------------------------------------------------------------------
// Forecasters

template <Scalar S>
ForecasterStrategy<S> forecaster_constant(S p) {
  if (!is_finite(p) || p < 0 || p > 1) throw DomainError("forecast must lie in [0, 1]");
  return [p](const History<S>&) { return p; };
}

// p_n = P(y_n = 1 | y_1 .. y_{n-1}).
template <Scalar S>
ForecasterStrategy<S> forecaster_from_distribution(JointDistribution<S> dist) {
  auto shared = std::make_shared<const JointDistribution<S>>(std::move(dist));
  return [shared](const History<S>& h) {
    const std::size_t k = h.past.size();
    if (k >= shared->length()) throw DomainError("game is longer than the forecaster's distribution");
    return shared->conditional_one(k, observed_prefix(h.past));
  };
}

// ---------------------------------------------------------------------------
// Skeptics

template <Scalar S>
SkepticStrategy<S> skeptic_zero() {
  return [](const PricedHistory<S>&) { return S(0); };
}

template <Scalar S>
SkepticStrategy<S> skeptic_constant(S stake) {
  if (!is_finite(stake)) throw DomainError("stake must be finite");
  return [stake](const PricedHistory<S>&) { return stake; };
}

// s_n = lambda K_{n-1}; safe whenever |lambda| <= 1.
template <Scalar S>
SkepticStrategy<S> skeptic_fractional(S lambda) {
  if (!is_finite(lambda) || abs_value(lambda) > 1) throw DomainError("fraction must satisfy |lambda| <= 1");
  return [lambda](const PricedHistory<S>& h) { return S(lambda * h.capital); };
}

// Stakes the whole capital at the matching endpoint of the safe interval:
// s = K/p when backing y = 1, s = -K/(1-p) when backing y = 0.  At a price
// where that endpoint is infinite, there is nothing to lose and the
// strategy stakes nothing.
template <Scalar S>
SkepticStrategy<S> skeptic_all_in(int side = 1) {
  if (side != 0 && side != 1) throw DomainError("all-in side must be 0 or 1");
  return [side](const PricedHistory<S>& h) {
    if (side == 1) return h.price > 0 ? S(h.capital / h.price) : S(0);
    return h.price < 1 ? S(-h.capital / (S(1) - h.price)) : S(0);
  };
}

// Two-account capital mixture of skeptic_fractional(+eps) and
// skeptic_fractional(-eps).  Starting from K_0/2 each, the accounts evolve as
//   A+ <- A+ (1 + eps (y - p)),  A- <- A- (1 - eps (y - p)),
// and the combined stake is eps (A+ - A-).  Since ln(1 + x) >= x - x^2 for
// |x| <= 1/2 and (y - p)^2 <= 1,
//   K_N >= (K_0 / 2) exp(eps |sum (y_n - p_n)| - eps^2 N).
template <Scalar S>
class LlnSkeptic {
 public:
  explicit LlnSkeptic(S epsilon) : epsilon_(std::move(epsilon)) {
    if (!is_finite(epsilon_) || !(epsilon_ > 0) || epsilon_ > S(1) / 2)
      throw DomainError("epsilon must lie in (0, 1/2]");
  }

  const S& epsilon() const noexcept { return epsilon_; }

  S operator()(const PricedHistory<S>& h) {
    sync(h);
    return S(epsilon_ * (plus_ - minus_));
  }

  // Account values (A+, A-) after the rounds in h.
  std::pair<S, S> accounts(const History<S>& h) {
    sync(h);
    return {plus_, minus_};
  }

 private:
  void sync(const History<S>& h) {
    const bool extends = processed_ <= h.past.size() && k0_ == h.k0 &&
                         (processed_ == 0 || h.past[processed_ - 1] == last_);
    if (!extends || !started_) {
      started_ = true;
      processed_ = 0;
      k0_ = h.k0;
      plus_ = S(h.k0 / 2);
      minus_ = plus_;
    }
    for (; processed_ < h.past.size(); ++processed_) {
      const Round<S>& r = h.past[processed_];
      const S step = epsilon_ * (r.y - r.p);
      plus_ *= S(S(1) + step);
      minus_ *= S(S(1) - step);
    }
    if (processed_ > 0) last_ = h.past[processed_ - 1];
  }

  S epsilon_;
  bool started_ = false;
  std::size_t processed_ = 0;
  S k0_{};
  S plus_{};
  S minus_{};
  Round<S> last_{};
};

template <Scalar S>
SkepticStrategy<S> skeptic_lln(S epsilon) {
  return LlnSkeptic<S>(std::move(epsilon));
}

// (K_0 / 2) exp(eps |sum (y_n - p_n)| - eps^2 N).
inline double lln_capital_lower_bound(double k0, double epsilon, double sum_deviation, std::size_t n_rounds) {
  return 0.5 * k0 * std::exp(epsilon * std::fabs(sum_deviation) - epsilon * epsilon * static_cast<double>(n_rounds));
}

// ---------------------------------------------------------------------------
// Realities

namespace detail {

// One draw per round from a seeded stream; the n-th round always sees the
// n-th draw, whatever history it is called with.
class RoundStream {
 public:
  explicit RoundStream(std::uint64_t seed) : seed_(seed), rng_(seed) {}

  Rng& at_round(std::size_t completed_rounds) {
    if (completed_rounds < drawn_) {
      rng_ = Rng(seed_);
      drawn_ = 0;
    }
    for (; drawn_ < completed_rounds; ++drawn_) rng_.next();
    ++drawn_;
    return rng_;
  }

 private:
  std::uint64_t seed_;
  Rng rng_;
  std::size_t drawn_ = 0;
};

}  // namespace detail

template <Scalar S>
RealityStrategy<S> reality_constant(int y) {
  if (y != 0 && y != 1) throw DomainError("outcome must be 0 or 1");
  return [y](const StakedHistory<S>&) { return S(y); };
}

// Replays a fixed outcome sequence.
template <Scalar S>
RealityStrategy<S> reality_sequence(std::vector<int> outcomes) {
  for (int y : outcomes)
    if (y != 0 && y != 1) throw DomainError("outcome must be 0 or 1");
  return [outcomes = std::move(outcomes)](const StakedHistory<S>& h) {
    const std::size_t k = h.past.size();
    if (k >= outcomes.size()) throw DomainError("outcome sequence exhausted");
    return S(outcomes[k]);
  };
}

// Outcome sequence given by the bits of a sequence index (y_1 first).
template <Scalar S>
RealityStrategy<S> reality_bits(std::uint32_t index, std::size_t n) {
  std::vector<int> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = static_cast<int>(index >> (n - 1 - i) & 1U);
  return reality_sequence<S>(std::move(ys));
}

// y_n i.i.d. Bernoulli(theta): y_n = 1 iff the n-th uniform draw is below theta.
template <Scalar S>
RealityStrategy<S> reality_iid(double theta, std::uint64_t seed) {
  if (!(theta >= 0 && theta <= 1)) throw DomainError("theta must lie in [0, 1]");
  return [theta, stream = detail::RoundStream(seed)](const StakedHistory<S>& h) mutable {
    return S(stream.at_round(h.past.size()).uniform() < theta ? 1 : 0);
  };
}

// Samples y_n from dist's conditional law given the outcomes so far.
template <Scalar S>
RealityStrategy<S> reality_from_distribution(std::shared_ptr<const JointDistribution<S>> dist, std::uint64_t seed) {
  return [dist = std::move(dist), stream = detail::RoundStream(seed)](const StakedHistory<S>& h) mutable {
    const std::size_t k = h.past.size();
    if (k >= dist->length()) throw DomainError("game is longer than reality's distribution");
    const double p_one = to_double(dist->conditional_one(k, observed_prefix(h.past)));
    return S(stream.at_round(k).uniform() < p_one ? 1 : 0);
  };
}

template <Scalar S>
RealityStrategy<S> reality_from_distribution(JointDistribution<S> dist, std::uint64_t seed) {
  return reality_from_distribution<S>(std::make_shared<const JointDistribution<S>>(std::move(dist)), seed);
}

// Keeps the Skeptic from making money: y = 0 against a long stake, y = 1
// against a short one.  A zero stake is answered with y = 1.
template <Scalar S>
RealityStrategy<S> reality_bankrupting() {
  return [](const StakedHistory<S>& h) { return S(h.stake > 0 ? 0 : 1); };
}

// ---------------------------------------------------------------------------
// Market players

template <Scalar S>
MarketOpenStrategy<S> market_open_constant(S price) {
  return [price](const History<S>&) { return price; };
}

// Opens at the previous close; `initial` on the first day.
template <Scalar S>
MarketOpenStrategy<S> market_open_previous_close(S initial) {
  return [initial](const History<S>& h) { return h.past.empty() ? initial : h.past.back().y; };
}

template <Scalar S>
MarketCloseStrategy<S> market_close_constant(S price) {
  return [price](const StakedHistory<S>&) { return price; };
}

// Closes at open + step.
template <Scalar S>
MarketCloseStrategy<S> market_close_drift(S step) {
  return [step](const StakedHistory<S>& h) { return S(h.price + step); };
}

// Closes at open * (1 + volatility * u), u uniform on [-1, 1).
template <Scalar S>
MarketCloseStrategy<S> market_close_random_walk(double volatility, std::uint64_t seed) {
  if (!(volatility >= 0 && volatility <= 1)) throw DomainError("volatility must lie in [0, 1]");
  return [volatility, stream = detail::RoundStream(seed)](const StakedHistory<S>& h) mutable {
    const double u = stream.at_round(h.past.size()).uniform(-1.0, 1.0);
    return S(h.price * from_double<S>(1.0 + volatility * u));
  };
}

template <Scalar S>
SpeculatorStrategy<S> speculator_constant(S position) {
  return [position](const PricedHistory<S>&) { return position; };
}

// Holds lambda K_{n-1} worth of the security: s = lambda K / p.
template <Scalar S>
SpeculatorStrategy<S> speculator_fractional(S lambda) {
  if (!is_finite(lambda) || abs_value(lambda) > 1) throw DomainError("fraction must satisfy |lambda| <= 1");
  return [lambda](const PricedHistory<S>& h) { return h.price > 0 ? S(lambda * h.capital / h.price) : S(0); };
}

}  // namespace ville

#endif  // VILLE_STRATEGIES_HPP
