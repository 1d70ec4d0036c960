// Buying B tickets after learning A is replaced by tickets bought up front.
// Both strategies pay the same in every outcome and the swap costs nothing.

#include <cstdio>

#include "ville/ville.hpp"

using namespace ville;
using namespace ville::conditioning;

int main() {
  const auto q = [](long n, long d) { return from_ratio<Rational>(n, d); };
  Scenario<Rational> sc;
  sc.prices = {q(2, 5), q(1, 5)};
  sc.strategy.initial_tickets.push_back({TicketKind::on_A, q(1, 1), q(2, 5)});
  sc.strategy.later_quantity = q(3, 1);

  const auto chk = verify_transform(sc);
  std::printf("P(A)=%s P(A&B)=%s P(B|A)=%s\n", to_string(sc.prices.pA).c_str(), to_string(sc.prices.pAB).c_str(),
              to_string(conditional_price(sc.prices)).c_str());
  std::printf("%-14s %10s %10s\n", "outcome", "S", "S'");
  for (std::size_t i = 0; i < kCells.size(); ++i)
    std::printf("%-14s %10s %10s\n", cell_name(kCells[i]), to_string(chk.original[i]).c_str(),
                to_string(chk.transformed[i]).c_str());
  std::printf("cost of added tickets: %s\n%s\n", to_string(chk.added_block_cost).c_str(),
              chk.pass() ? "payoffs agree" : "payoffs differ");

  const auto dm = demoivre_strategy(sc.prices);
  std::printf("paying 1 on A and B costs %s\n", to_string(initial_cost(dm.initial_tickets)).c_str());
}
