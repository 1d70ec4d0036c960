#ifndef VILLE_SCENARIO_IO_HPP
#define VILLE_SCENARIO_IO_HPP

// Conditioning scenario files:
//
//   pA 0.4
//   pAB 0.2
//   ticket on_A 1 0.4          (kind, quantity, unit price)
//   ticket on_AandB -2 1/5
//   later 1                    (M: B tickets bought once A is learned)
//   nothing_more_learned 1     (optional, default 1)
//
// Ticket and later lines are optional; numbers are decimal or fractional.

#include <string>
#include <string_view>

#include "ville/conditioning.hpp"
#include "ville/error.hpp"
#include "ville/io.hpp"
#include "ville/scalar.hpp"

namespace ville::conditioning {

template <Scalar S>
Scenario<S> parse_scenario(std::string_view text) {
  Scenario<S> sc;
  bool have_pA = false, have_pAB = false, have_later = false, have_flag = false;
  const auto ls = io::lines(text);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::string_view line = io::trim(ls[i]);
    if (line.empty() || line.front() == '#') continue;
    const auto tok = io::split_ws(line);
    const std::string where = "line " + std::to_string(i + 1) + ": ";
    auto num = [&](const std::string& s) {
      try {
        return parse_scalar<S>(s);
      } catch (const ParseError& e) {
        throw ParseError(where + e.what());
      }
    };
    auto once = [&](bool& seen) {
      if (seen) throw ParseError(where + "duplicate '" + tok[0] + "' line");
      if (tok.size() != 2) throw ParseError(where + "expected '" + tok[0] + " value'");
      seen = true;
    };
    if (tok[0] == "pA") {
      once(have_pA);
      sc.prices.pA = num(tok[1]);
    } else if (tok[0] == "pAB") {
      once(have_pAB);
      sc.prices.pAB = num(tok[1]);
    } else if (tok[0] == "later") {
      once(have_later);
      sc.strategy.later_quantity = num(tok[1]);
    } else if (tok[0] == "nothing_more_learned") {
      once(have_flag);
      if (tok[1] != "0" && tok[1] != "1") throw ParseError(where + "flag must be 0 or 1");
      sc.nothing_more_learned = tok[1] == "1";
    } else if (tok[0] == "ticket") {
      if (tok.size() != 4) throw ParseError(where + "expected 'ticket kind quantity price'");
      TicketKind kind;
      try {
        kind = parse_ticket_kind(tok[1]);
      } catch (const ParseError& e) {
        throw ParseError(where + e.what());
      }
      sc.strategy.initial_tickets.push_back(Ticket<S>{kind, num(tok[2]), num(tok[3])});
    } else {
      throw ParseError(where + "unknown record '" + tok[0] + "'");
    }
  }
  if (!have_pA || !have_pAB) throw ParseError("scenario needs both pA and pAB");
  return sc;
}

template <Scalar S>
std::string serialize_scenario(const Scenario<S>& sc) {
  std::string out = "pA " + to_string(sc.prices.pA) + "\npAB " + to_string(sc.prices.pAB) + '\n';
  for (const auto& t : sc.strategy.initial_tickets)
    out += std::string("ticket ") + ticket_kind_name(t.kind) + ' ' + to_string(t.quantity) + ' ' +
           to_string(t.unit_price) + '\n';
  out += "later " + to_string(sc.strategy.later_quantity) + '\n';
  out += std::string("nothing_more_learned ") + (sc.nothing_more_learned ? "1" : "0") + '\n';
  return out;
}

}  // namespace ville::conditioning

#endif  // VILLE_SCENARIO_IO_HPP
