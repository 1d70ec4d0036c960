#ifndef VILLE_REGISTRY_HPP
#define VILLE_REGISTRY_HPP

// Named strategies.  A descriptor is written "name" or
// "name:key=value,key=value"; the registry below is the stable list of
// names and parameters.
//
//   forecaster    constant:p           distribution:file
//   skeptic       zero  constant:stake  fractional:lambda  lln:eps  all_in:side
//   reality       iid:theta[,seed]  bankrupting  constant:y  sequence:bits
//                 distribution:file[,seed]
//   market-open   constant:price  previous_close:initial
//   speculator    zero  constant:position  fractional:lambda
//   market-close  constant:price  drift:step  random_walk:volatility[,seed]
//
// Stochastic strategies without an explicit seed take the seed supplied by
// the caller.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ville/error.hpp"
#include "ville/game.hpp"
#include "ville/io.hpp"
#include "ville/scalar.hpp"
#include "ville/strategies.hpp"

namespace ville {

class UnknownStrategy : public Error {
 public:
  UnknownStrategy(Player role, const std::string& name, const std::vector<std::string>& known)
      : Error(message(role, name, known)) {}

 private:
  static std::string message(Player role, const std::string& name, const std::vector<std::string>& known) {
    std::string m = "unknown " + std::string(player_name(role)) + " strategy '" + name + "'; registry: ";
    for (std::size_t i = 0; i < known.size(); ++i) m += (i ? ", " : "") + known[i];
    return m;
  }
};

struct StrategyDescriptor {
  Player role = Player::skeptic;
  std::string name;
  std::map<std::string, std::string> parameters;

  static StrategyDescriptor parse(Player role, std::string_view text) {
    StrategyDescriptor d;
    d.role = role;
    const auto colon = text.find(':');
    d.name = std::string(io::trim(text.substr(0, colon)));
    if (d.name.empty()) throw ParseError("empty strategy name");
    if (colon != std::string_view::npos) {
      for (const std::string& item : io::split(text.substr(colon + 1), ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
          throw ParseError("strategy parameter must be key=value, got '" + item + "'");
        if (!d.parameters.emplace(item.substr(0, eq), item.substr(eq + 1)).second)
          throw ParseError("duplicate strategy parameter '" + item.substr(0, eq) + "'");
      }
    }
    return d;
  }

  std::string to_string() const {
    std::string out = name;
    char sep = ':';
    for (const auto& [k, v] : parameters) {
      out += sep + k + "=" + v;
      sep = ',';
    }
    return out;
  }

  friend bool operator==(const StrategyDescriptor&, const StrategyDescriptor&) = default;
};

inline std::vector<std::string> registry_names(Player role) {
  switch (role) {
    case Player::forecaster: return {"constant", "distribution"};
    case Player::skeptic: return {"zero", "constant", "fractional", "lln", "all_in"};
    case Player::reality: return {"iid", "bankrupting", "constant", "sequence", "distribution"};
    case Player::market_open: return {"constant", "previous_close"};
    case Player::speculator: return {"zero", "constant", "fractional"};
    case Player::market_close: return {"constant", "drift", "random_walk"};
  }
  return {};
}

// Joint distribution files: one line "bits weight" per sequence with
// positive probability, e.g. "101 0.25"; missing sequences have weight 0.
template <Scalar S>
JointDistribution<S> parse_distribution(std::string_view text) {
  std::optional<std::size_t> n;
  std::map<std::uint32_t, S> entries;
  const auto ls = io::lines(text);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::string_view line = io::trim(ls[i]);
    if (line.empty() || line.front() == '#') continue;
    const auto tok = io::split_ws(line);
    const std::string where = "line " + std::to_string(i + 1) + ": ";
    if (tok.size() != 2) throw ParseError(where + "expected 'bits weight'");
    const std::string& bits = tok[0];
    if (bits.empty() || bits.size() > kMaxSequenceLength || bits.find_first_not_of("01") != std::string::npos)
      throw ParseError(where + "sequence must be 1 to 20 binary digits");
    if (n && *n != bits.size()) throw ParseError(where + "all sequences must have the same length");
    n = bits.size();
    std::uint32_t idx = 0;
    for (char c : bits) idx = (idx << 1) | (c == '1' ? 1U : 0U);
    S w;
    try {
      w = parse_scalar<S>(tok[1]);
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
    if (!entries.emplace(idx, w).second) throw ParseError(where + "sequence " + bits + " listed twice");
  }
  if (!n) throw ParseError("distribution file has no entries");
  std::vector<S> weights(std::size_t{1} << *n, S(0));
  for (auto& [idx, w] : entries) weights[idx] = w;
  return JointDistribution<S>(*n, std::move(weights));
}

template <Scalar S>
std::string serialize_distribution(const JointDistribution<S>& d) {
  std::string out;
  for (std::uint32_t i = 0; i < d.size(); ++i)
    if (d.probability(i) != 0) out += sequence_bits(i, d.length()) + ' ' + to_string(d.probability(i)) + '\n';
  return out;
}

namespace detail {

// Typed access to descriptor parameters; rejects unknown keys.
class Params {
 public:
  explicit Params(const StrategyDescriptor& d) : d_(d) {}

  template <Scalar S>
  S scalar(const std::string& key, std::optional<S> fallback = std::nullopt) {
    used_.insert(key);
    auto it = d_.parameters.find(key);
    if (it == d_.parameters.end()) {
      if (fallback) return *fallback;
      throw DomainError(prefix() + "missing parameter '" + key + "'");
    }
    try {
      return parse_scalar<S>(it->second);
    } catch (const ParseError& e) {
      throw DomainError(prefix() + "parameter '" + key + "': " + e.what());
    }
  }

  std::string text(const std::string& key) {
    used_.insert(key);
    auto it = d_.parameters.find(key);
    if (it == d_.parameters.end()) throw DomainError(prefix() + "missing parameter '" + key + "'");
    return it->second;
  }

  std::uint64_t seed(std::uint64_t fallback) {
    used_.insert("seed");
    auto it = d_.parameters.find("seed");
    if (it == d_.parameters.end()) return fallback;
    try {
      return std::stoull(it->second);
    } catch (const std::exception&) {
      throw DomainError(prefix() + "seed must be a nonnegative integer");
    }
  }

  int integer(const std::string& key, int fallback) {
    used_.insert(key);
    auto it = d_.parameters.find(key);
    if (it == d_.parameters.end()) return fallback;
    try {
      std::size_t pos = 0;
      const int v = std::stoi(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw DomainError(prefix() + "parameter '" + key + "' must be an integer");
    }
  }

  void finish() const {
    for (const auto& [k, v] : d_.parameters)
      if (!used_.count(k)) throw DomainError(prefix() + "unknown parameter '" + k + "'");
  }

 private:
  std::string prefix() const { return std::string(player_name(d_.role)) + " '" + d_.name + "': "; }

  const StrategyDescriptor& d_;
  std::set<std::string> used_;
};

inline void require_role(const StrategyDescriptor& d, Player role) {
  if (d.role != role) throw DomainError("descriptor is for " + std::string(player_name(d.role)));
}

template <class T>
T finished(detail::Params& p, T value) {
  p.finish();
  return value;
}

template <Scalar S>
JointDistribution<S> load_distribution(Params& p) {
  return parse_distribution<S>(io::read_file(std::filesystem::path(p.text("file"))));
}

}  // namespace detail

template <Scalar S>
ForecasterStrategy<S> make_forecaster(const StrategyDescriptor& d) {
  detail::require_role(d, Player::forecaster);
  detail::Params p(d);
  if (d.name == "constant") return detail::finished(p, forecaster_constant<S>(p.scalar<S>("p")));
  if (d.name == "distribution") return detail::finished(p, forecaster_from_distribution<S>(detail::load_distribution<S>(p)));
  throw UnknownStrategy(d.role, d.name, registry_names(d.role));
}

template <Scalar S>
SkepticStrategy<S> make_skeptic(const StrategyDescriptor& d) {
  detail::require_role(d, Player::skeptic);
  detail::Params p(d);
  if (d.name == "zero") return detail::finished(p, skeptic_zero<S>());
  if (d.name == "constant") return detail::finished(p, skeptic_constant<S>(p.scalar<S>("stake")));
  if (d.name == "fractional") return detail::finished(p, skeptic_fractional<S>(p.scalar<S>("lambda")));
  if (d.name == "lln") return detail::finished(p, skeptic_lln<S>(p.scalar<S>("eps")));
  if (d.name == "all_in") return detail::finished(p, skeptic_all_in<S>(p.integer("side", 1)));
  throw UnknownStrategy(d.role, d.name, registry_names(d.role));
}

template <Scalar S>
RealityStrategy<S> make_reality(const StrategyDescriptor& d, std::uint64_t default_seed) {
  detail::require_role(d, Player::reality);
  detail::Params p(d);
  if (d.name == "iid") {
    const double theta = to_double(p.scalar<S>("theta"));
    return detail::finished(p, reality_iid<S>(theta, p.seed(default_seed)));
  }
  if (d.name == "bankrupting") return detail::finished(p, reality_bankrupting<S>());
  if (d.name == "constant") return detail::finished(p, reality_constant<S>(p.integer("y", 1)));
  if (d.name == "sequence") {
    const std::string bits = p.text("bits");
    std::vector<int> ys;
    for (char c : bits) {
      if (c != '0' && c != '1') throw DomainError("reality 'sequence': bits must be binary digits");
      ys.push_back(c - '0');
    }
    return detail::finished(p, reality_sequence<S>(std::move(ys)));
  }
  if (d.name == "distribution") {
    auto dist = detail::load_distribution<S>(p);
    return detail::finished(p, reality_from_distribution<S>(std::move(dist), p.seed(default_seed)));
  }
  throw UnknownStrategy(d.role, d.name, registry_names(d.role));
}

template <Scalar S>
MarketOpenStrategy<S> make_market_open(const StrategyDescriptor& d) {
  detail::require_role(d, Player::market_open);
  detail::Params p(d);
  if (d.name == "constant") return detail::finished(p, market_open_constant<S>(p.scalar<S>("price")));
  if (d.name == "previous_close") return detail::finished(p, market_open_previous_close<S>(p.scalar<S>("initial")));
  throw UnknownStrategy(d.role, d.name, registry_names(d.role));
}

template <Scalar S>
SpeculatorStrategy<S> make_speculator(const StrategyDescriptor& d) {
  detail::require_role(d, Player::speculator);
  detail::Params p(d);
  if (d.name == "zero") return detail::finished(p, speculator_constant<S>(S(0)));
  if (d.name == "constant") return detail::finished(p, speculator_constant<S>(p.scalar<S>("position")));
  if (d.name == "fractional") return detail::finished(p, speculator_fractional<S>(p.scalar<S>("lambda")));
  throw UnknownStrategy(d.role, d.name, registry_names(d.role));
}

template <Scalar S>
MarketCloseStrategy<S> make_market_close(const StrategyDescriptor& d, std::uint64_t default_seed) {
  detail::require_role(d, Player::market_close);
  detail::Params p(d);
  if (d.name == "constant") return detail::finished(p, market_close_constant<S>(p.scalar<S>("price")));
  if (d.name == "drift") return detail::finished(p, market_close_drift<S>(p.scalar<S>("step")));
  if (d.name == "random_walk") {
    const double vol = to_double(p.scalar<S>("volatility"));
    return detail::finished(p, market_close_random_walk<S>(vol, p.seed(default_seed)));
  }
  throw UnknownStrategy(d.role, d.name, registry_names(d.role));
}

}  // namespace ville

#endif  // VILLE_REGISTRY_HPP
