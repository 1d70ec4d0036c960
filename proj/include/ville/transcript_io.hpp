#ifndef VILLE_TRANSCRIPT_IO_HPP
#define VILLE_TRANSCRIPT_IO_HPP

// Line-delimited transcript files.
//
//   ville-transcript protocol=forecasting k0=1 seed=42 safety=1 rounds=3
//   round=1 p=0.5 s=2 y=1 capital=2 clamped=0 requested=2
//   round=2 ...
//
// Numbers are written in shortest round-trip decimal form (doubles) or as
// exact fractions (rationals), so parse(serialize(t)) == t and
// serialize(parse(text)) == text for any text this module produced.  The
// header's round count lets truncated files be rejected.

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "ville/error.hpp"
#include "ville/game.hpp"
#include "ville/io.hpp"
#include "ville/scalar.hpp"

namespace ville {

inline constexpr std::string_view kTranscriptMagic = "ville-transcript";

template <Scalar S>
std::string serialize_transcript(const GameTranscript<S>& t) {
  std::string out;
  out += kTranscriptMagic;
  out += " protocol=";
  out += protocol_name(t.protocol);
  out += " k0=" + to_string(t.k0);
  out += " seed=" + (t.rng_seed ? std::to_string(*t.rng_seed) : std::string("none"));
  out += " safety=";
  out += t.enforce_safety ? "1" : "0";
  out += " rounds=" + std::to_string(t.rounds.size());
  out += '\n';
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    const Round<S>& r = t.rounds[i];
    out += "round=" + std::to_string(i + 1);
    out += " p=" + to_string(r.p);
    out += " s=" + to_string(r.s);
    out += " y=" + to_string(r.y);
    out += " capital=" + to_string(r.capital_after);
    out += " clamped=";
    out += r.clamped ? "1" : "0";
    out += " requested=" + to_string(r.requested_s);
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ParseError("line " + std::to_string(line_no) + ": expected a nonnegative integer, got '" + s + "'");
  return v;
}

inline bool parse_flag(const std::string& s, std::size_t line_no) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw ParseError("line " + std::to_string(line_no) + ": expected 0 or 1, got '" + s + "'");
}

template <Scalar S>
S parse_field(const std::map<std::string, std::string>& kv, const std::string& key, std::size_t line_no) {
  try {
    return parse_scalar<S>(io::require(kv, key, line_no));
  } catch (const ParseError& e) {
    throw ParseError("line " + std::to_string(line_no) + ": field '" + key + "': " + e.what());
  }
}

}  // namespace detail

template <Scalar S>
GameTranscript<S> parse_transcript(std::string_view text) {
  const auto ls = io::lines(text);
  if (ls.empty()) throw ParseError("empty transcript");
  if (!text.empty() && text.back() != '\n') throw ParseError("transcript is truncated (no final newline)");

  const auto header_tokens = io::split_ws(ls[0]);
  if (header_tokens.empty() || header_tokens[0] != kTranscriptMagic)
    throw ParseError("line 1: not a transcript (missing '" + std::string(kTranscriptMagic) + "' header)");
  const auto header = io::key_values(std::string_view(ls[0]).substr(kTranscriptMagic.size()), 1);

  GameTranscript<S> t;
  const std::string& protocol = io::require(header, "protocol", 1);
  if (protocol == "forecasting") {
    t.protocol = Protocol::forecasting;
  } else if (protocol == "market") {
    t.protocol = Protocol::market;
  } else {
    throw ParseError("line 1: unknown protocol '" + protocol + "'");
  }
  t.k0 = detail::parse_field<S>(header, "k0", 1);
  const std::string& seed = io::require(header, "seed", 1);
  if (seed != "none") t.rng_seed = detail::parse_u64(seed, 1);
  t.enforce_safety = detail::parse_flag(io::require(header, "safety", 1), 1);
  const std::uint64_t n_rounds = detail::parse_u64(io::require(header, "rounds", 1), 1);
  if (n_rounds != ls.size() - 1)
    throw ParseError("transcript declares " + std::to_string(n_rounds) + " rounds but contains " +
                     std::to_string(ls.size() - 1));

  t.rounds.reserve(n_rounds);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto kv = io::key_values(ls[i], line_no);
    if (kv.size() != 7) throw ParseError("line " + std::to_string(line_no) + ": expected 7 fields");
    if (detail::parse_u64(io::require(kv, "round", line_no), line_no) != i)
      throw ParseError("line " + std::to_string(line_no) + ": rounds out of order");
    Round<S> r;
    r.p = detail::parse_field<S>(kv, "p", line_no);
    r.s = detail::parse_field<S>(kv, "s", line_no);
    r.y = detail::parse_field<S>(kv, "y", line_no);
    r.capital_after = detail::parse_field<S>(kv, "capital", line_no);
    r.clamped = detail::parse_flag(io::require(kv, "clamped", line_no), line_no);
    r.requested_s = detail::parse_field<S>(kv, "requested", line_no);
    t.rounds.push_back(std::move(r));
  }
  return t;
}

}  // namespace ville

#endif  // VILLE_TRANSCRIPT_IO_HPP
