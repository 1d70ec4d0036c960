#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "ville_cli.hpp"

using namespace ville;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(VILLE_DEMO_DATA) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ville_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SimulateIsDeterministic) {
  const std::vector<std::string> base{"simulate", "--forecaster", "constant:p=0.5", "--skeptic", "lln:eps=0.25",
                                      "--reality", "iid:theta=0.5", "--rounds", "1000", "--seed", "42"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", path("a.txt")});
  b.insert(b.end(), {"--out", path("b.txt")});
  const auto ra = run(a);
  const auto rb = run(b);
  ASSERT_EQ(ra.code, 0) << ra.err;
  EXPECT_EQ(ra.out, rb.out);
  EXPECT_EQ(io::read_file(path("a.txt")), io::read_file(path("b.txt")));
  const auto t = parse_transcript<double>(io::read_file(path("a.txt")));
  EXPECT_EQ(t.size(), 1000u);
  EXPECT_EQ(t.rng_seed, 42u);
  EXPECT_NE(ra.out.find("final_capital=" + to_string(t.final_capital())), std::string::npos);
  EXPECT_NE(ra.out.find("safe=1"), std::string::npos);
  EXPECT_EQ(std::count(ra.out.begin(), ra.out.end(), '\n'), 1);
}

TEST_F(CliTest, UnknownStrategyNamesTheRegistry) {
  const auto r = run({"simulate", "--skeptic", "doubling", "--rounds", "3", "--out", path("t.txt")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("registry"), std::string::npos);
  EXPECT_NE(r.err.find("lln"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("t.txt")));
}

TEST_F(CliTest, MarketNegativePriceReportsRound) {
  const auto r = run({"simulate", "--protocol", "market", "--market-open", "constant:price=-5", "--rounds", "4", "--out",
                      path("t.txt")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("round 1"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("t.txt")));
  const auto ok = run({"simulate", "--protocol", "market", "--forecaster", "previous_close:initial=100", "--skeptic",
                       "fractional:lambda=0.5", "--reality", "random_walk:volatility=0.01", "--rounds", "20", "--seed",
                       "3", "--out", path("m.txt")});
  ASSERT_EQ(ok.code, 0) << ok.err;
  EXPECT_EQ(parse_transcript<double>(io::read_file(path("m.txt"))).protocol, Protocol::market);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"simulate"}).code, 2);  // --rounds is required
  EXPECT_EQ(run({"simulate", "--rounds", "x"}).code, 2);
  EXPECT_EQ(run({"simulate", "--rounds", "3", "--mode", "complex"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, TestSubcommandExitCodes) {
  ASSERT_EQ(run({"simulate", "--skeptic", "all_in", "--reality", "constant:y=1", "--rounds", "5", "--out", path("h.txt")})
                .code,
            0);
  const auto rej = run({"test", path("h.txt"), "--alpha", "0.05", "--out", path("rec.txt")});
  EXPECT_EQ(rej.code, 1);
  EXPECT_NE(rej.out.find("achieved_level=0.03125"), std::string::npos);
  EXPECT_NE(rej.out.find("decision=rejected"), std::string::npos);
  EXPECT_TRUE(parse_test_result<double>(io::read_file(path("rec.txt"))).rejected);

  const auto exact = run({"test", path("h.txt"), "--alpha", "0.05", "--mode", "rational"});
  EXPECT_NE(exact.out.find("achieved_level=1/32"), std::string::npos);

  ASSERT_EQ(run({"simulate", "--rounds", "4", "--out", path("flat.txt")}).code, 0);
  EXPECT_EQ(run({"test", path("flat.txt")}).code, 0);

  const std::string text = io::read_file(path("h.txt"));
  write("cut.txt", text.substr(0, text.size() - 20));
  const auto cut = run({"test", path("cut.txt")});
  EXPECT_EQ(cut.code, 2);
  EXPECT_EQ(run({"test", path("missing.txt")}).code, 2);
}

TEST_F(CliTest, TestRefusesUnsafeTranscript) {
  ASSERT_EQ(run({"simulate", "--skeptic", "constant:stake=10", "--reality", "constant:y=1", "--rounds", "3",
                 "--no-safety", "--out", path("u.txt")})
                .code,
            0);
  const auto r = run({"test", path("u.txt")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("capital was risked beyond K0; test invalid"), std::string::npos);
}

TEST_F(CliTest, CombineWorkedExample) {
  const auto r = run({"combine", data("a_or_all.mass"), data("b_or_all.mass"), "--out", path("c.mass")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "conflict=3/10 focal_sets=3\n");
  const auto file = belief::parse_evidence<Rational>(io::read_file(path("c.mass")));
  const auto m = file.mass();
  EXPECT_EQ(m.mass(0b01), from_ratio<Rational>(3, 7));
  EXPECT_EQ(m.mass(0b10), from_ratio<Rational>(2, 7));
  EXPECT_EQ(m.mass(0b11), from_ratio<Rational>(2, 7));
  EXPECT_EQ(file.conflict, from_ratio<Rational>(3, 10));
  EXPECT_FALSE(file.judgements.empty());

  const auto f = run({"combine", data("a_or_all.mass"), data("b_or_all.mass"), "--mode", "float"});
  EXPECT_NE(f.out.find("conflict 0.3\n"), std::string::npos);
}

TEST_F(CliTest, CombineVacuousAndConflict) {
  const auto v = run({"combine", data("a_or_all.mass"), data("vacuous.mass")});
  ASSERT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("mass {a} 3/5\nmass {a,b} 2/5\nconflict 0\n"), std::string::npos);

  const auto c = run({"combine", data("point_a.mass"), data("point_b.mass"), "--out", path("x.mass")});
  EXPECT_EQ(c.code, 3);
  EXPECT_NE(c.out.find("conflict=1"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("x.mass")));

  write("abc.mass", "frame a b c\nmass {a} 1\n");
  EXPECT_EQ(run({"combine", data("a_or_all.mass"), path("abc.mass")}).code, 2);
}

TEST_F(CliTest, CombineOtherRules) {
  const auto ind = run({"combine", data("a_or_all.mass"), data("b_or_all.mass"), "--rule", "independent"});
  ASSERT_EQ(ind.code, 0) << ind.err;
  const auto prod = belief::parse_evidence<Rational>(ind.out);
  EXPECT_EQ(prod.frame().size(), 4u);
  EXPECT_EQ(prod.mass().mass(prod.frame().parse_subset("{a*b}")), from_ratio<Rational>(3, 10));

  const auto cond = run({"combine", data("a_or_all.mass"), data("point_b.mass"), "--rule", "condition"});
  ASSERT_EQ(cond.code, 0) << cond.err;
  const auto c = belief::parse_evidence<Rational>(cond.out);
  EXPECT_EQ(c.mass().mass(0b10), from_ratio<Rational>(1, 1));
  EXPECT_EQ(c.conflict, from_ratio<Rational>(3, 5));
  EXPECT_EQ(run({"combine", data("point_a.mass"), data("point_b.mass"), "--rule", "condition"}).code, 3);
}

TEST_F(CliTest, ConditionSubcommand) {
  const auto r = run({"condition", data("coin.map")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto file = belief::parse_evidence<Rational>(r.out);
  EXPECT_EQ(file.mass().mass(0b001), from_ratio<Rational>(1, 1));
  EXPECT_EQ(file.conflict, from_ratio<Rational>(1, 2));
  EXPECT_EQ(run({"condition", data("coin.map"), "--event", "{b,c}"}).code, 3);
}

TEST_F(CliTest, TransformExamples) {
  const auto r = run({"transform", data("conditioning.scenario"), "--table", path("tab.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("cell=not_A original=0 transformed=0\n"), std::string::npos);
  EXPECT_NE(r.out.find("cell=A_and_not_B original=-1/2 transformed=-1/2\n"), std::string::npos);
  EXPECT_NE(r.out.find("cell=A_and_B original=1/2 transformed=1/2\n"), std::string::npos);
  EXPECT_NE(r.out.find("added_block_cost=0"), std::string::npos);
  EXPECT_NE(r.out.find("verdict=PASS"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("tab.txt")));

  write("zero.scenario", "pA 0.4\npAB 0.2\nticket on_A 1 0.4\nlater 0\n");
  EXPECT_EQ(run({"transform", path("zero.scenario")}).code, 0);

  const auto null = run({"transform", data("null.scenario"), "--out", path("n.txt")});
  EXPECT_EQ(null.code, 2);
  EXPECT_NE(null.err.find("null event"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("n.txt")));
}

TEST_F(CliTest, AlternativeOutputIsADistribution) {
  const auto r = run({"alternative", "--rounds", "1", "--forecaster", "constant:p=0.5", "--skeptic", "constant:stake=1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0 1/4\n1 3/4\n");
  const auto d = run({"alternative", "--dist", data("two_rounds.dist"), "--skeptic", "lln:eps=0.5", "--out",
                      path("q.dist")});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_NE(d.out.find("total=1"), std::string::npos);
  EXPECT_NO_THROW(parse_distribution<Rational>(io::read_file(path("q.dist"))));
  EXPECT_EQ(run({"alternative", "--rounds", "3", "--skeptic", "constant:stake=5"}).code, 2);  // unsafe
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  write("run.toml", "[simulate]\nrounds = 7\nskeptic = \"fractional:lambda=0.5\"\nseed = 9\n");
  const auto from_file = run({"--config", path("run.toml"), "simulate", "--out", path("c1.txt")});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(parse_transcript<double>(io::read_file(path("c1.txt"))).size(), 7u);
  const auto overridden = run({"--config", path("run.toml"), "simulate", "--rounds", "3", "--out", path("c2.txt")});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  const auto t = parse_transcript<double>(io::read_file(path("c2.txt")));
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.rng_seed, 9u);
}

TEST_F(CliTest, ReplicationsAreOrderedAndThreadIndependent) {
  const std::vector<std::string> base{"simulate", "--skeptic", "lln:eps=0.1", "--reality", "iid:theta=0.6",
                                      "--rounds", "200", "--seed", "5", "--replications", "64"};
  auto a = base, b = base;
  a.insert(a.end(), {"--threads", "1", "--out", path("r1.txt")});
  b.insert(b.end(), {"--threads", "4", "--out", path("r4.txt")});
  const auto ra = run(a), rb = run(b);
  ASSERT_EQ(ra.code, 0) << ra.err;
  EXPECT_EQ(ra.out, rb.out);
  const std::string text = io::read_file(path("r1.txt"));
  EXPECT_EQ(text, io::read_file(path("r4.txt")));
  const auto lines = io::lines(text);
  ASSERT_EQ(lines.size(), 64u);
  for (std::size_t i = 0; i < lines.size(); ++i)
    EXPECT_EQ(io::key_values(lines[i], i + 1).at("replication"), std::to_string(i));
}
