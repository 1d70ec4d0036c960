#ifndef VILLE_GAME_HPP
#define VILLE_GAME_HPP

// Perfect-information betting protocols.
//
// Probability Forecasting Game, K_0 given:
//   for n = 1..N
//     Forecaster announces p_n in [0, 1]
//     Skeptic announces s_n (tickets bought if positive, sold if negative)
//     Reality announces y_n in {0, 1}
//     K_n := K_{n-1} + s_n (y_n - p_n)
//
// Market Game: identical move order, with Market announcing an opening
// price p_n >= 0, Speculator a position s_n, and Market a closing price
// y_n >= 0.
//
// Every player sees the complete history of earlier moves, plus whatever
// has been announced so far in the current round.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ville/error.hpp"
#include "ville/scalar.hpp"

namespace ville {

enum class Protocol { forecasting, market };

inline const char* protocol_name(Protocol p) {
  return p == Protocol::forecasting ? "forecasting" : "market";
}

// One round of either protocol. For the forecasting protocol y is 0 or 1;
// for the market protocol p and y are the opening and closing prices.
template <Scalar S>
struct Round {
  S p{};
  S s{};
  S y{};
  S capital_after{};
  // Set when safety enforcement replaced the Skeptic's stake; requested_s
  // then holds what the Skeptic originally announced.
  bool clamped = false;
  S requested_s{};

  friend bool operator==(const Round&, const Round&) = default;
};

template <Scalar S>
struct GameTranscript {
  Protocol protocol = Protocol::forecasting;
  S k0 = S(1);
  std::optional<std::uint64_t> rng_seed;
  // Forecasting protocol only: the rounds were played with stakes confined
  // to the safe interval.
  bool enforce_safety = false;
  std::vector<Round<S>> rounds;

  std::size_t size() const noexcept { return rounds.size(); }

  // K_{n-1} for 1-based round n.
  const S& capital_before(std::size_t n) const { return n <= 1 ? k0 : rounds[n - 2].capital_after; }

  const S& final_capital() const { return rounds.empty() ? k0 : rounds.back().capital_after; }

  bool went_negative() const {
    for (const auto& r : rounds)
      if (r.capital_after < 0) return true;
    return false;
  }

  std::vector<S> capital_path() const {
    std::vector<S> path;
    path.reserve(rounds.size() + 1);
    path.push_back(k0);
    for (const auto& r : rounds) path.push_back(r.capital_after);
    return path;
  }

  friend bool operator==(const GameTranscript&, const GameTranscript&) = default;
};

// Views handed to strategies. Each extends the previous one with the moves
// already made in the current round.
template <Scalar S>
struct History {
  std::span<const Round<S>> past;
  S k0;
  S capital;  // K_{n-1}

  std::size_t round() const noexcept { return past.size() + 1; }
};

template <Scalar S>
struct PricedHistory : History<S> {
  S price;
};

template <Scalar S>
struct StakedHistory : PricedHistory<S> {
  S stake;
};

template <Scalar S>
using ForecasterStrategy = std::function<S(const History<S>&)>;
template <Scalar S>
using SkepticStrategy = std::function<S(const PricedHistory<S>&)>;
// Returns the outcome y_n, which must be 0 or 1.
template <Scalar S>
using RealityStrategy = std::function<S(const StakedHistory<S>&)>;

template <Scalar S>
using MarketOpenStrategy = std::function<S(const History<S>&)>;
template <Scalar S>
using SpeculatorStrategy = std::function<S(const PricedHistory<S>&)>;
template <Scalar S>
using MarketCloseStrategy = std::function<S(const StakedHistory<S>&)>;

template <Scalar S>
S capital_update(const S& k_prev, const S& s, const S& p, const S& y) {
  if (!is_finite(k_prev) || !is_finite(s) || !is_finite(p) || !is_finite(y))
    throw DomainError("malformed round: non-finite capital, stake, price or outcome");
  return S(k_prev + s * (y - p));
}

// Closed interval of stakes; a missing endpoint is infinite.
template <Scalar S>
struct StakeInterval {
  std::optional<S> lo;
  std::optional<S> hi;

  bool contains(const S& s) const { return (!lo || *lo <= s) && (!hi || s <= *hi); }

  S clamp(const S& s) const {
    if (lo && s < *lo) return *lo;
    if (hi && s > *hi) return *hi;
    return s;
  }

  friend bool operator==(const StakeInterval&, const StakeInterval&) = default;
};

// Stakes s with k_prev + s (y - p) >= 0 for both y = 0 and y = 1, i.e.
// [-k/(1-p), k/p], unbounded above at p = 0 and below at p = 1.
template <Scalar S>
StakeInterval<S> safe_interval(const S& k_prev, const S& p) {
  if (!is_finite(p) || p < 0 || p > 1) throw DomainError("price must lie in [0, 1]");
  if (!is_finite(k_prev) || k_prev < 0) throw DomainError("capital must be finite and nonnegative");
  StakeInterval<S> out;
  if (p < 1) out.lo = S(-k_prev / (S(1) - p));
  if (p > 0) out.hi = S(k_prev / p);
  return out;
}

// Both counterfactual capitals are >= -tol (exactly >= 0 for rationals).
template <Scalar S>
bool stake_is_safe(const S& k_prev, const S& s, const S& p, double tol = 0.0) {
  const S down = k_prev - s * p;
  const S up = k_prev + s * (S(1) - p);
  if constexpr (std::same_as<S, double>) {
    return down >= -tol && up >= -tol;
  } else {
    (void)tol;
    return down >= 0 && up >= 0;
  }
}

// Relative tolerance used when replaying floating-point capital chains.
inline constexpr double kChainTolerance = 1e-12;

// Restriction on which side of the ticket market the Skeptic may trade.
enum class StakeSide { any, buy_only, sell_only };

struct GameOptions {
  bool enforce_safety = true;
  StakeSide side = StakeSide::any;
  std::optional<std::uint64_t> rng_seed;  // recorded on the transcript
};

template <Scalar S>
GameTranscript<S> play_forecasting_game(const ForecasterStrategy<S>& forecaster, const SkepticStrategy<S>& skeptic,
                                        const RealityStrategy<S>& reality, std::size_t n_rounds, S k0 = S(1),
                                        GameOptions options = {}) {
  if (n_rounds < 1) throw DomainError("a game needs at least one round");
  if (!is_finite(k0) || !(k0 > 0)) throw DomainError("initial capital must be positive");

  GameTranscript<S> t;
  t.protocol = Protocol::forecasting;
  t.k0 = k0;
  t.rng_seed = options.rng_seed;
  t.enforce_safety = options.enforce_safety;
  t.rounds.reserve(n_rounds);

  S capital = k0;
  for (std::size_t n = 1; n <= n_rounds; ++n) {
    StakedHistory<S> view;
    view.past = std::span<const Round<S>>(t.rounds);
    view.k0 = k0;
    view.capital = capital;

    const S p = forecaster(static_cast<const History<S>&>(view));
    if (!is_finite(p)) throw ProtocolError(Player::forecaster, n, "non-finite price");
    if (p < 0 || p > 1) throw ProtocolError(Player::forecaster, n, "price outside [0, 1]");
    view.price = p;

    const S requested = skeptic(static_cast<const PricedHistory<S>&>(view));
    if (!is_finite(requested)) throw ProtocolError(Player::skeptic, n, "non-finite stake");
    S s = requested;
    if (options.side == StakeSide::buy_only && s < 0) s = 0;
    if (options.side == StakeSide::sell_only && s > 0) s = 0;
    if (options.enforce_safety) s = safe_interval(capital, p).clamp(s);
    view.stake = s;

    const S y = reality(view);
    if (!is_finite(y) || (y != 0 && y != 1)) throw ProtocolError(Player::reality, n, "outcome must be 0 or 1");

    Round<S> r;
    r.p = p;
    r.s = s;
    r.y = y;
    r.capital_after = capital_update(capital, s, p, y);
    if constexpr (std::same_as<S, double>) {
      // A stake at an interval endpoint can leave a rounding residue below zero.
      if (options.enforce_safety && r.capital_after < 0 &&
          r.capital_after >= -kChainTolerance * std::max(1.0, capital))
        r.capital_after = 0;
    }
    r.clamped = s != requested;
    r.requested_s = requested;
    capital = r.capital_after;
    t.rounds.push_back(std::move(r));
  }
  return t;
}

// No safety interval exists here: y is unbounded above, so any short
// position can lose without limit. The transcript records what happened.
template <Scalar S>
GameTranscript<S> play_market_game(const MarketOpenStrategy<S>& market_open, const SpeculatorStrategy<S>& speculator,
                                   const MarketCloseStrategy<S>& market_close, std::size_t n_rounds, S k0 = S(1),
                                   std::optional<std::uint64_t> rng_seed = std::nullopt) {
  if (n_rounds < 1) throw DomainError("a game needs at least one round");
  if (!is_finite(k0) || !(k0 > 0)) throw DomainError("initial capital must be positive");

  GameTranscript<S> t;
  t.protocol = Protocol::market;
  t.k0 = k0;
  t.rng_seed = rng_seed;
  t.enforce_safety = false;
  t.rounds.reserve(n_rounds);

  S capital = k0;
  for (std::size_t n = 1; n <= n_rounds; ++n) {
    StakedHistory<S> view;
    view.past = std::span<const Round<S>>(t.rounds);
    view.k0 = k0;
    view.capital = capital;

    const S p = market_open(static_cast<const History<S>&>(view));
    if (!is_finite(p)) throw ProtocolError(Player::market_open, n, "non-finite opening price");
    if (p < 0) throw ProtocolError(Player::market_open, n, "negative opening price");
    view.price = p;

    const S s = speculator(static_cast<const PricedHistory<S>&>(view));
    if (!is_finite(s)) throw ProtocolError(Player::speculator, n, "non-finite position");
    view.stake = s;

    const S y = market_close(view);
    if (!is_finite(y)) throw ProtocolError(Player::market_close, n, "non-finite closing price");
    if (y < 0) throw ProtocolError(Player::market_close, n, "negative closing price");

    Round<S> r;
    r.p = p;
    r.s = s;
    r.y = y;
    r.capital_after = capital_update(capital, s, p, y);
    r.requested_s = s;
    capital = r.capital_after;
    t.rounds.push_back(std::move(r));
  }
  return t;
}

struct VerificationReport {
  enum class Status { consistent, malformed_round, capital_mismatch, unsafe_round };

  Status status = Status::consistent;
  std::optional<std::size_t> round;  // 1-based, first offending round
  std::string message = "consistent";

  bool ok() const noexcept { return status == Status::consistent; }
};

template <Scalar S>
VerificationReport replay_verify(const GameTranscript<S>& t) {
  auto fail = [](VerificationReport::Status st, std::size_t n, const std::string& what) {
    VerificationReport rep;
    rep.status = st;
    rep.round = n;
    rep.message = what + " round " + std::to_string(n);
    return rep;
  };

  if (!is_finite(t.k0) || !(t.k0 > 0)) {
    VerificationReport rep;
    rep.status = VerificationReport::Status::malformed_round;
    rep.message = "initial capital must be positive";
    return rep;
  }

  S prev = t.k0;
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    const std::size_t n = i + 1;
    const Round<S>& r = t.rounds[i];
    if (!is_finite(r.p) || !is_finite(r.s) || !is_finite(r.y) || !is_finite(r.capital_after) ||
        !is_finite(r.requested_s))
      return fail(VerificationReport::Status::malformed_round, n, "non-finite value in");
    if (t.protocol == Protocol::forecasting) {
      if (r.p < 0 || r.p > 1) return fail(VerificationReport::Status::malformed_round, n, "price outside [0, 1] in");
      if (r.y != 0 && r.y != 1) return fail(VerificationReport::Status::malformed_round, n, "outcome not binary in");
    } else if (r.p < 0 || r.y < 0) {
      return fail(VerificationReport::Status::malformed_round, n, "negative price in");
    }
    if (!r.clamped && r.requested_s != r.s)
      return fail(VerificationReport::Status::malformed_round, n, "unrecorded stake change in");

    const S expected = capital_update(prev, r.s, r.p, r.y);
    double tol = 0.0;
    if constexpr (std::same_as<S, double>) {
      tol = kChainTolerance * std::max({1.0, std::fabs(expected), std::fabs(prev)});
    }
    if (!nearly_equal(expected, r.capital_after, tol))
      return fail(VerificationReport::Status::capital_mismatch, n, "capital mismatch in");

    if (t.protocol == Protocol::forecasting && t.enforce_safety) {
      double safety_tol = 0.0;
      if constexpr (std::same_as<S, double>) safety_tol = kChainTolerance * std::max(1.0, std::fabs(prev));
      if (prev < -safety_tol || !stake_is_safe(prev, r.s, r.p, safety_tol))
        return fail(VerificationReport::Status::unsafe_round, n, "unsafe");
    }
    prev = r.capital_after;
  }
  return {};
}

// A transcript is safe when the bettor never exposed more than K_0: in the
// forecasting protocol every stake lay in the safe interval, in the market
// protocol (where no such interval exists) the capital never went negative.
template <Scalar S>
bool transcript_is_safe(const GameTranscript<S>& t) {
  if (t.protocol == Protocol::market) return !t.went_negative();
  for (std::size_t n = 1; n <= t.size(); ++n) {
    const S& prev = t.capital_before(n);
    double tol = 0.0;
    if constexpr (std::same_as<S, double>) tol = kChainTolerance * std::max(1.0, std::fabs(prev));
    if (prev < -tol || !stake_is_safe(prev, t.rounds[n - 1].s, t.rounds[n - 1].p, tol)) return false;
  }
  return true;
}

}  // namespace ville

#endif  // VILLE_GAME_HPP
