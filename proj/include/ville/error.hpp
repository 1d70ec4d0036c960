#ifndef VILLE_ERROR_HPP
#define VILLE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ville {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside its mathematical domain (p outside [0,1], |lambda| > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Conditioning on an event of probability zero.
class NullEventError : public DomainError {
 public:
  NullEventError() : DomainError("conditioning on null event") {}
  explicit NullEventError(const std::string& detail)
      : DomainError("conditioning on null event: " + detail) {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Size limits of the dense enumeration structures.
class CapacityError : public Error {
 public:
  using Error::Error;
};

enum class Player { forecaster, skeptic, reality, market_open, speculator, market_close };

inline const char* player_name(Player p) {
  switch (p) {
    case Player::forecaster: return "forecaster";
    case Player::skeptic: return "skeptic";
    case Player::reality: return "reality";
    case Player::market_open: return "market-open";
    case Player::speculator: return "speculator";
    case Player::market_close: return "market-close";
  }
  return "unknown";
}

// A player produced an illegal move. Rounds are numbered from 1.
class ProtocolError : public Error {
 public:
  ProtocolError(Player player, std::size_t round, const std::string& what)
      : Error(std::string(player_name(player)) + " made an illegal move in round " +
              std::to_string(round) + ": " + what),
        player_(player),
        round_(round) {}

  Player player() const noexcept { return player_; }
  std::size_t round() const noexcept { return round_; }

 private:
  Player player_;
  std::size_t round_;
};

}  // namespace ville

#endif  // VILLE_ERROR_HPP
