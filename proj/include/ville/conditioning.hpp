#ifndef VILLE_CONDITIONING_HPP
#define VILLE_CONDITIONING_HPP

// Ticket algebra for updating by conditioning.
//
// All tickets are measurable with respect to the partition
//   {not A, A and not B, A and B},
// so a strategy's payoff is a function on three cells and equality of two
// strategies is a finite check.  Arithmetic defaults to exact rationals.
//
// Ticket semantics (quantity q, unit price u; negative q means sold):
//   on_A                   pays 1 on A.
//   on_AandB               pays 1 on A and B.
//   conditional_B_given_A  pays 1 on A and B, 0 on A and not B; on not A
//                          the transaction is cancelled and u refunded.
//   later_B_after_A        bought only once A is known, at the updated
//                          price; pays 1 on B.  Nothing happens on not A.
// Net payoff of a holding is q (payout - u), except that cancelled
// transactions net 0.

#include <array>
#include <string>
#include <vector>

#include "ville/error.hpp"
#include "ville/scalar.hpp"

namespace ville::conditioning {

enum class Cell { not_A, A_not_B, A_and_B };

inline constexpr std::array<Cell, 3> kCells{Cell::not_A, Cell::A_not_B, Cell::A_and_B};

inline const char* cell_name(Cell c) {
  switch (c) {
    case Cell::not_A: return "not A";
    case Cell::A_not_B: return "A and not B";
    case Cell::A_and_B: return "A and B";
  }
  return "?";
}

template <Scalar S = Rational>
struct PricePair {
  S pA;
  S pAB;

  void validate() const {
    if (!is_finite(pA) || !is_finite(pAB)) throw DomainError("prices must be finite");
    if (pA == 0) throw NullEventError("P(A) = 0");
    if (pA < 0 || pA > 1) throw DomainError("P(A) must lie in (0, 1]");
    if (pAB < 0 || pAB > pA) throw DomainError("P(A&B) must lie in [0, P(A)]");
  }
};

// P(B|A) := P(A&B) / P(A).
template <Scalar S>
S conditional_price(const PricePair<S>& prices) {
  prices.validate();
  return S(prices.pAB / prices.pA);
}

// P(A&B) = P(A) P(B|A).
template <Scalar S>
S compound_probability(const S& pA, const S& pB_given_A) {
  if (pA < 0 || pA > 1 || pB_given_A < 0 || pB_given_A > 1) throw DomainError("probabilities must lie in [0, 1]");
  return S(pA * pB_given_A);
}

enum class TicketKind { on_A, on_AandB, conditional_B_given_A, later_B_after_A };

inline const char* ticket_kind_name(TicketKind k) {
  switch (k) {
    case TicketKind::on_A: return "on_A";
    case TicketKind::on_AandB: return "on_AandB";
    case TicketKind::conditional_B_given_A: return "conditional_B_given_A";
    case TicketKind::later_B_after_A: return "later_B_after_A";
  }
  return "?";
}

inline TicketKind parse_ticket_kind(const std::string& s) {
  if (s == "on_A") return TicketKind::on_A;
  if (s == "on_AandB") return TicketKind::on_AandB;
  if (s == "conditional_B_given_A") return TicketKind::conditional_B_given_A;
  if (s == "later_B_after_A") return TicketKind::later_B_after_A;
  throw ParseError("unknown ticket kind '" + s + "'");
}

template <Scalar S = Rational>
struct Ticket {
  TicketKind kind;
  S quantity;
  S unit_price;

  friend bool operator==(const Ticket&, const Ticket&) = default;
};

// Gross payout of one unit of the ticket in `cell`.
inline int ticket_payout(TicketKind kind, Cell cell) {
  switch (kind) {
    case TicketKind::on_A: return cell == Cell::not_A ? 0 : 1;
    case TicketKind::on_AandB:
    case TicketKind::conditional_B_given_A:
    case TicketKind::later_B_after_A: return cell == Cell::A_and_B ? 1 : 0;
  }
  return 0;
}

// Net payoff of a single holding, with cancellation on not A for
// conditional and later-stage tickets.
template <Scalar S>
S ticket_net(const Ticket<S>& t, Cell cell) {
  const bool void_on_not_A =
      t.kind == TicketKind::conditional_B_given_A || t.kind == TicketKind::later_B_after_A;
  if (void_on_not_A && cell == Cell::not_A) return S(0);
  return S(t.quantity * (S(ticket_payout(t.kind, cell)) - t.unit_price));
}

// Money paid (or received, if negative) for the tickets in the initial
// situation; conditional tickets are paid up front and refunded on not A.
template <Scalar S>
S initial_cost(const std::vector<Ticket<S>>& tickets) {
  S total = 0;
  for (const auto& t : tickets) total += t.quantity * t.unit_price;
  return total;
}

// Tickets bought in the initial situation, plus M tickets on B bought at
// P(A&B)/P(A) after learning A and nothing more.
template <Scalar S = Rational>
struct TwoStageStrategy {
  std::vector<Ticket<S>> initial_tickets;
  S later_quantity = S(0);

  void validate() const {
    for (const auto& t : initial_tickets) {
      if (t.kind == TicketKind::later_B_after_A)
        throw DomainError("later_B_after_A tickets can only be bought after A is learned");
      if (!is_finite(t.quantity) || !is_finite(t.unit_price)) throw DomainError("ticket values must be finite");
    }
    if (!is_finite(later_quantity)) throw DomainError("later quantity must be finite");
  }

  friend bool operator==(const TwoStageStrategy&, const TwoStageStrategy&) = default;
};

template <Scalar S>
S evaluate_payoff(const TwoStageStrategy<S>& strategy, Cell outcome, const PricePair<S>& prices) {
  strategy.validate();
  S total = 0;
  for (const auto& t : strategy.initial_tickets) total += ticket_net(t, outcome);
  if (strategy.later_quantity != 0) {
    const Ticket<S> later{TicketKind::later_B_after_A, strategy.later_quantity, conditional_price(prices)};
    total += ticket_net(later, outcome);
  }
  return total;
}

template <Scalar S>
std::array<S, 3> payoff_table(const TwoStageStrategy<S>& strategy, const PricePair<S>& prices) {
  return {evaluate_payoff(strategy, Cell::not_A, prices), evaluate_payoff(strategy, Cell::A_not_B, prices),
          evaluate_payoff(strategy, Cell::A_and_B, prices)};
}

// Net payoff of a bare list of initial tickets.
template <Scalar S>
std::array<S, 3> payoff_table(const std::vector<Ticket<S>>& tickets) {
  std::array<S, 3> out{S(0), S(0), S(0)};
  for (std::size_t c = 0; c < 3; ++c)
    for (const auto& t : tickets) out[c] += ticket_net(t, kCells[c]);
  return out;
}

// The two tickets sold to a holder of the conditional price P(B|A):
//   P(B|A) tickets on A at P(A) each (cost P(A) P(B|A)), and
//   one conditional ticket on B given A at P(B|A).
// Combined net payoff: 1 - P(A)P(B|A) on A and B, -P(A)P(B|A) elsewhere.
template <Scalar S>
std::vector<Ticket<S>> definetti_portfolio(const PricePair<S>& prices) {
  const S cond = conditional_price(prices);
  return {Ticket<S>{TicketKind::on_A, cond, prices.pA},
          Ticket<S>{TicketKind::conditional_B_given_A, S(1), cond}};
}

// P(B|A) tickets on A now, and one B ticket at P(B|A) once A has happened.
// Costs P(A) P(B|A) and pays exactly 1 on A and B, 0 otherwise.
template <Scalar S>
TwoStageStrategy<S> demoivre_strategy(const PricePair<S>& prices) {
  TwoStageStrategy<S> s;
  s.initial_tickets.push_back(Ticket<S>{TicketKind::on_A, conditional_price(prices), prices.pA});
  s.later_quantity = S(1);
  return s;
}

// Gross payout: net payoff plus the initial outlay.
template <Scalar S>
S gross_payout(const TwoStageStrategy<S>& strategy, Cell outcome, const PricePair<S>& prices) {
  return S(evaluate_payoff(strategy, outcome, prices) + initial_cost(strategy.initial_tickets));
}

// Tickets that replace the later purchase of M B-tickets:
//   M tickets on A&B and -M P(A&B)/P(A) tickets on A.
template <Scalar S>
std::vector<Ticket<S>> replacement_block(const S& m, const PricePair<S>& prices) {
  const S cond = conditional_price(prices);
  return {Ticket<S>{TicketKind::on_AandB, m, prices.pAB}, Ticket<S>{TicketKind::on_A, S(-m * cond), prices.pA}};
}

// S -> S': delete the later purchase and add the replacement block to the
// initial tickets.  The result trades only at the initial prices, has the
// same payoff as S in every cell, and the added block costs nothing.
template <Scalar S>
TwoStageStrategy<S> transform_strategy(const TwoStageStrategy<S>& s, const PricePair<S>& prices) {
  s.validate();
  prices.validate();
  TwoStageStrategy<S> out;
  out.initial_tickets = s.initial_tickets;
  if (s.later_quantity != 0) {
    for (auto& t : replacement_block(s.later_quantity, prices)) out.initial_tickets.push_back(std::move(t));
  }
  out.later_quantity = S(0);
  return out;
}

// A scenario bundles prices and a strategy.  nothing_more_learned records
// the judgement that A is the only relevant information gained between the
// two situations; the payoff identity holds regardless, but the
// transformation justifies the updated price only under that judgement.
template <Scalar S = Rational>
struct Scenario {
  PricePair<S> prices;
  TwoStageStrategy<S> strategy;
  bool nothing_more_learned = true;
};

template <Scalar S>
struct TransformCheck {
  std::array<S, 3> original;
  std::array<S, 3> transformed;
  S added_block_cost;
  S original_cost;
  S transformed_cost;
  bool payoffs_equal = false;
  bool zero_cost = false;

  bool pass() const { return payoffs_equal && zero_cost; }
};

template <Scalar S>
TransformCheck<S> verify_transform(const Scenario<S>& sc, double tol = 1e-12) {
  const TwoStageStrategy<S> transformed = transform_strategy(sc.strategy, sc.prices);
  TransformCheck<S> c;
  c.original = payoff_table(sc.strategy, sc.prices);
  c.transformed = payoff_table(transformed, sc.prices);
  c.added_block_cost = initial_cost(replacement_block(sc.strategy.later_quantity, sc.prices));
  c.original_cost = initial_cost(sc.strategy.initial_tickets);
  c.transformed_cost = initial_cost(transformed.initial_tickets);
  c.payoffs_equal = true;
  for (std::size_t i = 0; i < 3; ++i) c.payoffs_equal = c.payoffs_equal && nearly_equal(c.original[i], c.transformed[i], tol);
  c.zero_cost = nearly_equal(c.added_block_cost, S(0), tol);
  return c;
}

}  // namespace ville::conditioning

#endif  // VILLE_CONDITIONING_HPP
