#ifndef VILLE_BELIEF_BRIDGE_HPP
#define VILLE_BELIEF_BRIDGE_HPP

// Betting on a belief function.
//
// A holder of the degree of belief Bel(A) offers to buy tickets on A (pay 1
// if the answer lies in A) at the price Bel(A), and offers nothing else.  An
// opponent can therefore only sell those tickets to the holder: in the
// forecasting protocol with price Bel(A), the opponent's stake is confined
// to s <= 0.
//
// Each round Reality draws a fresh source value x from P, then chooses an
// answer inside Gamma(x) by the given rule; the outcome is y = 1 when the
// answer is in A.  Whatever the rule, y >= [Gamma(x) in A], whose mean is
// Bel(A), so the opponent's capital is a supermartingale: repeated bets on
// the strength of similar evidence do not multiply the capital risked.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ville/belief.hpp"
#include "ville/game.hpp"
#include "ville/rng.hpp"
#include "ville/strategies.hpp"

namespace ville::belief {

enum class AnswerRule {
  least_favourable,  // answer in A only when Gamma(x) lies inside A
  most_favourable,   // answer in A whenever Gamma(x) meets A
  uniform,           // answer uniform over Gamma(x)
};

// Reality for the belief game: x ~ P drawn afresh each round.
template <Scalar S>
RealityStrategy<S> belief_reality(MultivaluedMapping<S> map, Subset event, AnswerRule rule, std::uint64_t seed) {
  map.validate();
  if (map.has_empty_image()) throw DomainError("belief game needs non-empty images");
  std::vector<double> cumulative;
  double acc = 0;
  for (const S& w : map.source.weights) cumulative.push_back(acc += to_double(w));
  return [map = std::move(map), event, rule, cumulative = std::move(cumulative),
          draws = ville::detail::RoundStream(seed),
          picks = ville::detail::RoundStream(substream_seed(seed, 1))](const StakedHistory<S>& h) mutable {
    const double u = draws.at_round(h.past.size()).uniform() * cumulative.back();
    std::size_t x = 0;
    while (x + 1 < cumulative.size() && !(u < cumulative[x])) ++x;
    const Subset image = map.gamma[x];
    Rng& pick = picks.at_round(h.past.size());
    switch (rule) {
      case AnswerRule::least_favourable: return S(is_subset(image, event) ? 1 : 0);
      case AnswerRule::most_favourable: return S((image & event) != 0 ? 1 : 0);
      case AnswerRule::uniform: {
        const auto k = pick.uniform_int(0, static_cast<std::uint64_t>(std::popcount(image)) - 1);
        Subset rest = image;
        for (std::uint64_t i = 0; i < k; ++i) rest &= rest - 1;
        const Subset answer = rest & (~rest + 1);
        return S((answer & event) != 0 ? 1 : 0);
      }
    }
    return S(0);
  };
}

// Price Bel(A) every round, opponent confined to selling, safety enforced.
template <Scalar S>
GameTranscript<S> play_belief_game(const MultivaluedMapping<S>& map, Subset event, SkepticStrategy<S> opponent,
                                   AnswerRule rule, std::size_t n_rounds, std::uint64_t seed, S k0 = S(1)) {
  const S price = belief_from_mapping(map).result(event);
  GameOptions options;
  options.enforce_safety = true;
  options.side = StakeSide::sell_only;
  options.rng_seed = seed;
  return play_forecasting_game<S>(forecaster_constant<S>(price), std::move(opponent),
                                  belief_reality<S>(map, event, rule, seed), n_rounds, k0, options);
}

}  // namespace ville::belief

#endif  // VILLE_BELIEF_BRIDGE_HPP
