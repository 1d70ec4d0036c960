// Two witnesses, Dempster's rule, and a betting check on the result.

#include <cstdio>

#include "ville/ville.hpp"

using namespace ville;
using namespace ville::belief;

int main() {
  const auto q = [](long n, long d) { return from_ratio<Rational>(n, d); };
  const Frame ab({"a", "b"});
  const MassFunction<Rational> first(ab, {{ab.parse_subset("{a}"), q(3, 5)}, {ab.full(), q(2, 5)}});
  const MassFunction<Rational> second(ab, {{ab.parse_subset("{b}"), q(1, 2)}, {ab.full(), q(1, 2)}});

  const auto combined = dempster_combine_masses(first, second);
  std::printf("conflict %s\n", to_string(combined.conflict).c_str());
  for (Subset s = 1; s <= ab.full(); ++s)
    std::printf("%-6s mass %-5s Bel %-5s Pl %s\n", ab.format(s).c_str(), to_string(combined.result.mass(s)).c_str(),
                to_string(bel_value(combined.result, s)).c_str(), to_string(plausibility(combined.result, s)).c_str());
  for (const auto& j : combined.judgements) std::printf("judgement %s: %s\n", j.id.c_str(), j.statement.c_str());

  // Betting at Bel({a}) on draws from the combined evidence: a seller of
  // {a} tickets cannot expect to profit.
  const auto exact = canonical_mapping(combined.result, "E");
  MultivaluedMapping<double> map{exact.id, {exact.source.names, {}}, exact.frame, exact.gamma};
  for (const auto& w : exact.source.weights) map.source.weights.push_back(w.get_d());
  const auto t = play_belief_game<double>(map, ab.parse_subset("{a}"), skeptic_fractional(-0.5),
                                          AnswerRule::least_favourable, 2000, 3);
  std::printf("seller of {a} at Bel after 2000 rounds: capital %.6g\n", t.final_capital());
}
