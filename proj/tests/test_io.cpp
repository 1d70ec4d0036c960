#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"

using namespace ville;

namespace {

Rational q(long n, long d = 1) { return from_ratio<Rational>(n, d); }

}  // namespace

TEST(Scalar, ParseAndFormat) {
  EXPECT_EQ(parse_scalar<Rational>("0.6"), q(3, 5));
  EXPECT_EQ(parse_scalar<Rational>("-3/9"), q(-1, 3));
  EXPECT_EQ(parse_scalar<Rational>("1e-3"), q(1, 1000));
  EXPECT_EQ(parse_scalar<Rational>("+2"), q(2));
  EXPECT_EQ(parse_scalar<double>("0.1"), 0.1);
  EXPECT_EQ(parse_scalar<double>("1/4"), 0.25);
  EXPECT_THROW(parse_scalar<Rational>("1/0"), ParseError);
  EXPECT_THROW(parse_scalar<Rational>("abc"), ParseError);
  EXPECT_THROW(parse_scalar<double>("0.5x"), ParseError);
  EXPECT_EQ(to_string(q(6, 4)), "3/2");
  EXPECT_EQ(to_string(q(4)), "4");
  EXPECT_EQ(to_string(0.1), "0.1");
  EXPECT_EQ(to_string(1.0 / 3), "0.3333333333333333");
  EXPECT_EQ(from_double<Rational>(0.5), q(1, 2));
}

TEST(Scalar, DoubleFormattingRoundTrips) {
  Rng rng(12);
  for (int i = 0; i < 10000; ++i) {
    const double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-30, 30));
    EXPECT_EQ(parse_scalar<double>(to_string(x)), x);
  }
}

TEST(Rng, SubstreamsAreDistinctAndStable) {
  EXPECT_NE(substream_seed(1, 0), substream_seed(1, 1));
  EXPECT_NE(substream_seed(1, 0), substream_seed(2, 0));
  EXPECT_EQ(substream_seed(7, 3), substream_seed(7, 3));
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.uniform_int(3, 7);
    EXPECT_GE(v, 3u);
    EXPECT_LE(v, 7u);
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Transcript, ByteExactRoundTrip) {
  Rng rng(100);
  for (int i = 0; i < 100; ++i) {
    const auto t = play_forecasting_game<double>(forecaster_constant(rng.uniform()), skeptic_lln(0.2),
                                                 reality_iid<double>(0.5, rng.next()), 25);
    const std::string text = serialize_transcript(t);
    const auto back = parse_transcript<double>(text);
    EXPECT_EQ(back, t);
    EXPECT_EQ(serialize_transcript(back), text);
  }
  const auto exact = play_forecasting_game<Rational>(forecaster_constant<Rational>(q(2, 7)),
                                                     skeptic_constant<Rational>(q(9)), reality_sequence<Rational>({0, 1, 1}),
                                                     3);
  EXPECT_EQ(parse_transcript<Rational>(serialize_transcript(exact)), exact);
  const auto market = play_market_game<double>(market_open_previous_close(50.0), speculator_fractional(0.3),
                                               market_close_random_walk<double>(0.02, 4), 30, 1.0, 4);
  EXPECT_EQ(parse_transcript<double>(serialize_transcript(market)), market);
}

TEST(Transcript, RejectsDamage) {
  const auto t = play_forecasting_game<double>(forecaster_constant(0.5), skeptic_all_in<double>(1),
                                               reality_constant<double>(1), 5);
  const std::string text = serialize_transcript(t);
  EXPECT_THROW(parse_transcript<double>(text.substr(0, text.size() - 1)), ParseError);
  const auto cut = text.substr(0, text.rfind("round=5"));
  EXPECT_THROW(parse_transcript<double>(cut), ParseError);
  std::string swapped = text;
  swapped.replace(swapped.find("round=2"), 7, "round=3");
  EXPECT_THROW(parse_transcript<double>(swapped), ParseError);
  EXPECT_THROW(parse_transcript<double>("hello\n"), ParseError);
  std::string extra = text;
  extra.insert(extra.find("clamped=0"), "x=1 ");
  try {
    parse_transcript<double>(extra);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(DistributionFile, RoundTrip) {
  const auto d = parse_distribution<Rational>("# two rounds\n00 0.1\n01 0.3\n10 0.2\n11 0.4\n");
  EXPECT_EQ(d.conditional_one(0, 0), q(3, 5));
  EXPECT_EQ(parse_distribution<Rational>(serialize_distribution(d)), d);
  EXPECT_THROW(parse_distribution<Rational>("0 0.5\n11 0.5\n"), ParseError);
  EXPECT_THROW(parse_distribution<Rational>("0 0.5\n0 0.5\n"), ParseError);
  EXPECT_THROW(parse_distribution<Rational>("2 1\n"), ParseError);
  EXPECT_THROW(parse_distribution<Rational>("0 0.5\n1 0.4\n"), DomainError);
}

TEST(Registry, DescriptorsAndFactories) {
  const auto d = StrategyDescriptor::parse(Player::skeptic, "lln:eps=0.25");
  EXPECT_EQ(d.name, "lln");
  EXPECT_EQ(d.parameters.at("eps"), "0.25");
  EXPECT_EQ(StrategyDescriptor::parse(Player::skeptic, d.to_string()), d);
  try {
    make_skeptic<double>(StrategyDescriptor::parse(Player::skeptic, "martingale"));
    FAIL();
  } catch (const UnknownStrategy& e) {
    EXPECT_NE(std::string(e.what()).find("registry: zero, constant, fractional, lln, all_in"), std::string::npos);
  }
  EXPECT_THROW(make_skeptic<double>(StrategyDescriptor::parse(Player::skeptic, "lln:eps=0.25,foo=1")), DomainError);
  EXPECT_THROW(make_skeptic<double>(StrategyDescriptor::parse(Player::skeptic, "lln")), DomainError);
  EXPECT_THROW(make_skeptic<double>(StrategyDescriptor::parse(Player::skeptic, "lln:eps=2")), DomainError);
  EXPECT_THROW(StrategyDescriptor::parse(Player::skeptic, "lln:eps"), ParseError);
  for (Player role : {Player::forecaster, Player::skeptic, Player::reality, Player::market_open, Player::speculator,
                      Player::market_close})
    EXPECT_FALSE(registry_names(role).empty());

  const auto f = make_forecaster<Rational>(StrategyDescriptor::parse(Player::forecaster, "constant:p=1/3"));
  const auto r = make_reality<Rational>(StrategyDescriptor::parse(Player::reality, "sequence:bits=101"), 0);
  const auto sk = make_skeptic<Rational>(StrategyDescriptor::parse(Player::skeptic, "fractional:lambda=1"));
  const auto t = play_forecasting_game<Rational>(f, sk, r, 3);
  EXPECT_EQ(t.rounds[0].p, q(1, 3));
  EXPECT_EQ(t.rounds[1].y, q(0));
}

TEST(Io, AtomicWriteLeavesNoPartialFile) {
  const auto dir = std::filesystem::temp_directory_path() / "ville_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  io::write_file_atomic(path, "hello\n");
  EXPECT_EQ(io::read_file(path), "hello\n");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.txt.partial"));
  EXPECT_THROW(io::write_file_atomic(dir / "missing" / "x.txt", "x"), Error);
  EXPECT_THROW(io::read_file(dir / "nope.txt"), Error);
  std::filesystem::remove_all(dir);
}
