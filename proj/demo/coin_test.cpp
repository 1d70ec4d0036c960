// A forecaster says 0.5 every round; the coin actually lands 1 with
// probability 0.6.  The LLN skeptic bets against the forecaster and the
// Ville test reports whether its capital got large enough to reject.

#include <cstdio>

#include "ville/ville.hpp"

using namespace ville;

int main() {
  const double alpha = 0.01;
  for (std::size_t n : {100, 1000, 5000}) {
    const auto t = play_forecasting_game<double>(forecaster_constant(0.5), skeptic_lln(0.1),
                                                 reality_iid<double>(0.6, 17), n, 1.0, {.rng_seed = 17});
    const auto r = ville_test(t, alpha);
    std::printf("N=%-5zu final capital %-12.6g level %-12.6g %s\n", n, r.final_capital, r.achieved_level,
                r.rejected ? "rejected" : "retained");
  }

  // Against a calibrated coin the same skeptic rarely gets anywhere.
  const auto fair = play_forecasting_game<double>(forecaster_constant(0.5), skeptic_lln(0.1),
                                                  reality_iid<double>(0.5, 17), 5000);
  std::printf("calibrated coin, N=5000: final capital %.6g\n", fair.final_capital());

  // Exact: the alternative distribution under which the skeptic's capital is
  // a likelihood ratio, for three fair-coin rounds and a unit stake.
  const auto d = JointDistribution<Rational>::product(3, from_ratio<Rational>(1, 2));
  const auto alt = implied_alternative<Rational>(skeptic_constant<Rational>(from_ratio<Rational>(1, 2)),
                                                 forecaster_constant<Rational>(from_ratio<Rational>(1, 2)), d, 3);
  std::printf("implied alternative for a constant stake of 1/2:\n%s", serialize_alternative(alt).c_str());
}
