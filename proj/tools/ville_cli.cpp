#include "ville_cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ville/ville.hpp"

namespace ville::cli {
namespace {

namespace fs = std::filesystem;
using belief::EvidenceFile;
using belief::MassFunction;
using belief::MultivaluedMapping;

// Everything a subcommand can read; unset optionals fall back to the
// per-subcommand defaults.
struct Config {
  std::string mode;

  std::string protocol = "forecasting";
  std::optional<std::string> forecaster, skeptic, reality;
  std::optional<std::string> market_open, speculator, market_close;
  std::size_t rounds = 0;
  std::string k0 = "1";
  std::uint64_t seed = 0;
  std::size_t replications = 1;
  unsigned threads = 0;
  bool no_safety = false;

  std::string alpha = "0.05";
  std::string input;   // transcript, scenario, evidence file
  std::string input2;  // second evidence file
  std::string dist;
  std::string rule = "dempster";
  std::optional<std::string> event;

  std::optional<std::string> out;
  std::optional<std::string> table;
};

// Outputs are collected first and written only once the subcommand has
// succeeded.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;

  void add(const std::optional<std::string>& path, std::string content) {
    if (path) files.emplace_back(*path, std::move(content));
  }

  void commit() const {
    for (const auto& [path, content] : files) io::write_file_atomic(fs::path(path), content);
  }
};

template <Scalar S>
S scalar_arg(const std::string& name, const std::string& text) {
  try {
    return parse_scalar<S>(text);
  } catch (const ParseError& e) {
    throw DomainError("--" + name + ": " + e.what());
  }
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + ' ' : s + std::string(width - s.size(), ' ');
}

// ---- simulate ----

template <Scalar S>
struct RunSummary {
  S final_capital;
  S min_capital;
  S max_capital;
  std::size_t clamped = 0;
  bool safe = true;
};

template <Scalar S>
RunSummary<S> summarize(const GameTranscript<S>& t) {
  RunSummary<S> r;
  const std::vector<S> path = t.capital_path();
  r.final_capital = t.final_capital();
  r.min_capital = *std::min_element(path.begin(), path.end());
  r.max_capital = *std::max_element(path.begin(), path.end());
  for (const auto& round : t.rounds) r.clamped += round.clamped ? 1 : 0;
  r.safe = transcript_is_safe(t);
  return r;
}

template <Scalar S>
std::string round_table(const GameTranscript<S>& t) {
  std::ostringstream os;
  os << pad("round", 8) << pad(t.protocol == Protocol::market ? "open" : "price", 24) << pad("stake", 24)
     << pad(t.protocol == Protocol::market ? "close" : "outcome", 24) << pad("capital", 24) << "clamped\n";
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    const auto& r = t.rounds[i];
    os << pad(std::to_string(i + 1), 8) << pad(to_string(r.p), 24) << pad(to_string(r.s), 24)
       << pad(to_string(r.y), 24) << pad(to_string(r.capital_after), 24) << (r.clamped ? "yes" : "no") << '\n';
  }
  return os.str();
}

template <Scalar S>
class Simulation {
 public:
  explicit Simulation(const Config& c) : c_(c) {
    if (c.rounds < 1) throw DomainError("--rounds must be at least 1");
    if (c.replications < 1) throw DomainError("--replications must be at least 1");
    k0_ = scalar_arg<S>("k0", c.k0);
    if (!(k0_ > 0)) throw DomainError("--k0 must be positive");
    if (c.protocol == "forecasting") {
      market_ = false;
      f_ = StrategyDescriptor::parse(Player::forecaster, c.forecaster.value_or("constant:p=0.5"));
      s_ = StrategyDescriptor::parse(Player::skeptic, c.skeptic.value_or("zero"));
      r_ = StrategyDescriptor::parse(Player::reality, c.reality.value_or("iid:theta=0.5"));
      if (c.market_open || c.speculator || c.market_close)
        throw DomainError("market strategies given with --protocol forecasting");
    } else if (c.protocol == "market") {
      market_ = true;
      // --forecaster/--skeptic/--reality double as the market roles.
      auto pick = [](const std::optional<std::string>& a, const std::optional<std::string>& b, const char* dflt) {
        if (a && b) throw DomainError("a market role was given twice");
        return a ? *a : b ? *b : std::string(dflt);
      };
      f_ = StrategyDescriptor::parse(Player::market_open, pick(c.market_open, c.forecaster, "constant:price=1"));
      s_ = StrategyDescriptor::parse(Player::speculator, pick(c.speculator, c.skeptic, "zero"));
      r_ = StrategyDescriptor::parse(Player::market_close, pick(c.market_close, c.reality, "constant:price=1"));
    } else {
      throw DomainError("--protocol must be forecasting or market");
    }
    build(0);  // surface configuration errors before any game is played
  }

  // Replication i uses substream_seed(seed, i); a single run uses the seed
  // itself.
  std::uint64_t seed_of(std::size_t i) const {
    return c_.replications == 1 ? c_.seed : substream_seed(c_.seed, i);
  }

  GameTranscript<S> play(std::size_t i) const { return build(i)(); }

 private:
  std::function<GameTranscript<S>()> build(std::size_t i) const {
    const std::uint64_t seed = seed_of(i);
    if (market_)
      return [open = make_market_open<S>(f_), speculator = make_speculator<S>(s_), close = make_market_close<S>(r_, seed),
              this, seed] { return play_market_game<S>(open, speculator, close, c_.rounds, k0_, seed); };
    GameOptions options;
    options.enforce_safety = !c_.no_safety;
    options.rng_seed = seed;
    return [f = make_forecaster<S>(f_), sk = make_skeptic<S>(s_), r = make_reality<S>(r_, seed), this, options] {
      return play_forecasting_game<S>(f, sk, r, c_.rounds, k0_, options);
    };
  }

 public:

  int run(std::ostream& out) const {
    const char* protocol = market_ ? "market" : "forecasting";
    Outputs files;
    if (c_.replications == 1) {
      const GameTranscript<S> t = play(0);
      const RunSummary<S> r = summarize(t);
      files.add(c_.out, serialize_transcript(t));
      files.add(c_.table, round_table(t));
      files.commit();
      out << "protocol=" << protocol << " rounds=" << c_.rounds << " k0=" << to_string(k0_) << " seed=" << c_.seed
          << " final_capital=" << to_string(r.final_capital) << " min_capital=" << to_string(r.min_capital)
          << " max_capital=" << to_string(r.max_capital) << " clamped_rounds=" << r.clamped
          << " safe=" << (r.safe ? 1 : 0) << '\n';
      return kOk;
    }

    std::vector<std::optional<RunSummary<S>>> results(c_.replications);
    unsigned threads = c_.threads ? c_.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, c_.replications));
    std::vector<std::exception_ptr> failures(threads);
    auto work = [&](unsigned w) {
      try {
        for (std::size_t i = w; i < c_.replications; i += threads) results[i] = summarize(play(i));
      } catch (...) {
        failures[w] = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& th : pool) th.join();
    for (auto& f : failures)
      if (f) std::rethrow_exception(f);

    std::string lines;
    std::ostringstream table;
    table << pad("replication", 13) << pad("seed", 22) << pad("final_capital", 24) << pad("min_capital", 24) << "safe\n";
    S total = 0;
    S lo = results[0]->final_capital, hi = results[0]->final_capital;
    std::size_t safe = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const RunSummary<S>& r = *results[i];
      lines += "replication=" + std::to_string(i) + " seed=" + std::to_string(seed_of(i)) +
               " final_capital=" + to_string(r.final_capital) + " min_capital=" + to_string(r.min_capital) +
               " clamped_rounds=" + std::to_string(r.clamped) + " safe=" + (r.safe ? "1" : "0") + '\n';
      table << pad(std::to_string(i), 13) << pad(std::to_string(seed_of(i)), 22) << pad(to_string(r.final_capital), 24)
            << pad(to_string(r.min_capital), 24) << (r.safe ? "yes" : "no") << '\n';
      total += r.final_capital;
      lo = std::min(lo, r.final_capital);
      hi = std::max(hi, r.final_capital);
      safe += r.safe ? 1 : 0;
    }
    files.add(c_.out, lines);
    files.add(c_.table, table.str());
    files.commit();
    const S mean = S(total / S(static_cast<long>(c_.replications)));
    out << "protocol=" << protocol << " rounds=" << c_.rounds << " k0=" << to_string(k0_) << " seed=" << c_.seed
        << " replications=" << c_.replications << " mean_final_capital=" << to_string(mean)
        << " min_final_capital=" << to_string(lo) << " max_final_capital=" << to_string(hi)
        << " safe=" << (safe == c_.replications ? 1 : 0) << '\n';
    return kOk;
  }

 private:
  const Config& c_;
  bool market_ = false;
  S k0_ = S(1);
  StrategyDescriptor f_, s_, r_;
};

// ---- test ----

template <Scalar S>
int cmd_test(const Config& c, std::ostream& out) {
  const GameTranscript<S> t = parse_transcript<S>(io::read_file(c.input));
  const VilleTestResult<S> r = ville_test(t, scalar_arg<S>("alpha", c.alpha));
  const std::string record = serialize_test_result(r);
  Outputs files;
  files.add(c.out, record);
  files.commit();
  out << record << "decision=" << (r.rejected ? "rejected" : "retained") << '\n';
  return r.rejected ? kReject : kOk;
}

// ---- alternative ----

template <Scalar S>
int cmd_alternative(const Config& c, std::ostream& out) {
  std::optional<JointDistribution<S>> dist;
  ForecasterStrategy<S> forecaster;
  if (!c.dist.empty()) {
    if (c.forecaster) throw DomainError("--forecaster is implied by --dist");
    dist = parse_distribution<S>(io::read_file(c.dist));
    forecaster = forecaster_from_distribution<S>(*dist);
  } else {
    if (c.rounds < 1) throw DomainError("give --dist FILE, or --rounds with a constant --forecaster");
    const auto d = StrategyDescriptor::parse(Player::forecaster, c.forecaster.value_or("constant:p=0.5"));
    if (d.name != "constant") throw DomainError("without --dist the forecaster must be 'constant'");
    auto p = detail::Params(d);
    const S theta = p.scalar<S>("p");
    p.finish();
    dist = JointDistribution<S>::product(c.rounds, theta);
    forecaster = forecaster_constant<S>(theta);
  }
  const SkepticStrategy<S> skeptic =
      make_skeptic<S>(StrategyDescriptor::parse(Player::skeptic, c.skeptic.value_or("zero")));
  const ImpliedAlternative<S> alt = implied_alternative<S>(skeptic, forecaster, *dist, dist->length());
  const std::string body = serialize_alternative(alt);
  if (!c.out) {
    out << body;
    return kOk;
  }
  Outputs files;
  files.add(c.out, body);
  files.commit();
  out << "rounds=" << alt.n << " sequences=" << alt.q.size() << " total=" << to_string(alt.total()) << '\n';
  return kOk;
}

// ---- transform ----

int cmd_transform(const Config& c, std::ostream& out, std::ostream& err) {
  using namespace conditioning;
  const Scenario<Rational> sc = parse_scenario<Rational>(io::read_file(c.input));
  sc.prices.validate();
  const TransformCheck<Rational> chk = verify_transform(sc);
  std::ostringstream kv, table;
  table << pad("cell", 14) << pad("S", 16) << "S'\n";
  for (std::size_t i = 0; i < kCells.size(); ++i) {
    const char* name = cell_name(kCells[i]);
    std::string key = name;
    std::replace(key.begin(), key.end(), ' ', '_');
    kv << "cell=" << key << " original=" << to_string(chk.original[i]) << " transformed=" << to_string(chk.transformed[i])
       << '\n';
    table << pad(name, 14) << pad(to_string(chk.original[i]), 16) << to_string(chk.transformed[i]) << '\n';
  }
  kv << "added_block_cost=" << to_string(chk.added_block_cost) << " original_cost=" << to_string(chk.original_cost)
     << " transformed_cost=" << to_string(chk.transformed_cost)
     << " nothing_more_learned=" << (sc.nothing_more_learned ? 1 : 0) << '\n';
  kv << "verdict=" << (chk.pass() ? "PASS" : "FAIL") << '\n';
  Outputs files;
  files.add(c.out, kv.str());
  files.add(c.table, table.str());
  files.commit();
  out << kv.str();
  if (!sc.nothing_more_learned)
    err << "note: the scenario says more than A may be learned; the tickets bought later are then not fixed in "
           "advance\n";
  return chk.pass() ? kOk : kReject;
}

// ---- combine / condition ----

template <Scalar S>
EvidenceFile<S> load_evidence(const std::string& path) {
  try {
    return belief::parse_evidence<S>(io::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

template <Scalar S>
int emit_mass(const Config& c, std::ostream& out, const MassFunction<S>& m, const S& conflict,
              const std::vector<belief::Judgement>& judgements) {
  const std::string body = belief::serialize_mass(m, std::optional<S>(conflict), judgements);
  if (!c.out) {
    out << body;
    return kOk;
  }
  Outputs files;
  files.add(c.out, body);
  files.commit();
  out << "conflict=" << to_string(conflict) << " focal_sets=" << m.focal().size() << '\n';
  return kOk;
}

int total_conflict(std::ostream& out, std::ostream& err, const std::string& what) {
  out << "conflict=1\n";
  err << "error: " << what << '\n';
  return kTotalConflict;
}

template <Scalar S>
int cmd_combine(const Config& c, std::ostream& out, std::ostream& err) {
  const EvidenceFile<S> a = load_evidence<S>(c.input);
  const EvidenceFile<S> b = load_evidence<S>(c.input2);
  MultivaluedMapping<S> m1 = a.mapping, m2 = b.mapping;
  if (m1.id == m2.id) {
    m1.id += "1";
    m2.id += "2";
  }
  if (c.rule == "dempster") {
    if (m1.has_empty_image() || m2.has_empty_image())
      throw DomainError("dempster rule needs normalized inputs; condition them first");
    if (!(m1.frame == m2.frame)) throw belief::FrameMismatch();
    try {
      const auto via_mappings = belief::dempster_combine_mappings(m1, m2);
      const auto r = belief::dempster_combine_masses(mass_of_mapping(m1), mass_of_mapping(m2));
      return emit_mass(c, out, r.result, r.conflict, via_mappings.judgements);
    } catch (const belief::TotalConflict& e) {
      return total_conflict(out, err, e.what());
    }
  }
  if (c.rule == "independent") {
    const auto r = belief::independent_combination(m1, m2);
    return emit_mass(c, out, mass_of_mapping(belief::product_mapping(m1, m2)), S(0), r.judgements);
  }
  if (c.rule == "condition") {
    if (!(m1.frame == m2.frame)) throw belief::FrameMismatch();
    const MassFunction<S> cat = mass_of_mapping(m2);
    if (cat.focal().size() != 1)
      throw DomainError("condition rule needs a categorical second file (one focal set)");
    const auto restricted = belief::restrict_mapping(m1, cat.focal().begin()->first);
    try {
      const auto r = belief::condition_mapping(restricted);
      return emit_mass(c, out, belief::conditioned_mass(restricted), r.conflict, r.judgements);
    } catch (const NullEventError& e) {
      return total_conflict(out, err, e.what());
    }
  }
  throw DomainError("--rule must be dempster, independent or condition");
}

template <Scalar S>
int cmd_condition(const Config& c, std::ostream& out, std::ostream& err) {
  const EvidenceFile<S> a = load_evidence<S>(c.input);
  MultivaluedMapping<S> map = a.mapping;
  if (c.event) map = belief::restrict_mapping(map, map.frame.parse_subset(*c.event));
  try {
    const auto r = belief::condition_mapping(map);
    return emit_mass(c, out, belief::conditioned_mass(map), r.conflict, r.judgements);
  } catch (const NullEventError& e) {
    return total_conflict(out, err, e.what());
  }
}

// ---- wiring ----

template <class F>
int with_mode(const Config& c, const char* default_mode, F&& f) {
  const std::string mode = c.mode.empty() ? default_mode : c.mode;
  if (mode == "float") return f(double{});
  return f(Rational{});
}

void add_strategy_flags(CLI::App* sub, Config& c) {
  sub->add_option("--forecaster", c.forecaster, "Forecaster NAME[:k=v,...] (market: Market opening)");
  sub->add_option("--skeptic", c.skeptic, "Skeptic NAME[:k=v,...] (market: Speculator)");
  sub->add_option("--reality", c.reality, "Reality NAME[:k=v,...] (market: Market closing)");
}

void add_mode_flag(CLI::App* sub, Config& c) {
  sub->add_option("--mode", c.mode, "Arithmetic: float or rational")->check(CLI::IsMember({"float", "rational"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Betting games, Ville tests, conditioning and belief functions"};
  app.name("ville");
  app.set_config("--config", "", "Read options from a TOML/INI file; command-line flags take precedence");
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Play a game and write its transcript");
  sim->add_option("--protocol", c.protocol, "forecasting or market")->check(CLI::IsMember({"forecasting", "market"}));
  add_strategy_flags(sim, c);
  sim->add_option("--market-open", c.market_open, "Market opening NAME[:k=v,...]");
  sim->add_option("--speculator", c.speculator, "Speculator NAME[:k=v,...]");
  sim->add_option("--market-close", c.market_close, "Market closing NAME[:k=v,...]");
  sim->add_option("--rounds", c.rounds, "Number of rounds")->required();
  sim->add_option("--k0", c.k0, "Initial capital");
  sim->add_option("--seed", c.seed, "RNG seed");
  sim->add_option("--replications", c.replications, "Independent games, seeded by substreams of --seed");
  sim->add_option("--threads", c.threads, "Worker threads for --replications (0: one per core)");
  sim->add_flag("--no-safety", c.no_safety, "Do not confine the Skeptic to the safe interval");
  add_mode_flag(sim, c);
  sim->add_option("--out", c.out, "Transcript (or replication summaries) path");
  sim->add_option("--table", c.table, "Human-readable table path");

  auto* tst = app.add_subcommand("test", "Ville test of a transcript");
  tst->add_option("transcript", c.input, "Transcript file")->required();
  tst->add_option("--alpha", c.alpha, "Significance level");
  add_mode_flag(tst, c);
  tst->add_option("--out", c.out, "Result record path");

  auto* alt = app.add_subcommand("alternative", "Enumerate the alternative Q(y) = K(y) P(y) / K0");
  alt->add_option("--dist", c.dist, "Joint distribution file");
  add_strategy_flags(alt, c);
  alt->add_option("--rounds", c.rounds, "Rounds, with a constant forecaster instead of --dist");
  add_mode_flag(alt, c);
  alt->add_option("--out", c.out, "Output path");

  auto* trn = app.add_subcommand("transform", "Check the conditional-price strategy transformation");
  trn->add_option("scenario", c.input, "Scenario file")->required();
  trn->add_option("--out", c.out, "Result path");
  trn->add_option("--table", c.table, "Human-readable table path");

  auto* cmb = app.add_subcommand("combine", "Combine two evidence files");
  cmb->add_option("first", c.input, "Evidence file")->required();
  cmb->add_option("second", c.input2, "Evidence file")->required();
  cmb->add_option("--rule", c.rule, "dempster, independent or condition")
      ->check(CLI::IsMember({"dempster", "independent", "condition"}));
  add_mode_flag(cmb, c);
  cmb->add_option("--out", c.out, "Output mass file");

  auto* cnd = app.add_subcommand("condition", "Condition a mapping on its non-empty images");
  cnd->add_option("evidence", c.input, "Evidence file")->required();
  cnd->add_option("--event", c.event, "Also learn that the answer lies in this set, e.g. {a,b}");
  add_mode_flag(cnd, c);
  cnd->add_option("--out", c.out, "Output mass file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (sim->parsed())
      return with_mode(c, "float", [&](auto tag) { return Simulation<decltype(tag)>(c).run(out); });
    if (tst->parsed()) return with_mode(c, "float", [&](auto tag) { return cmd_test<decltype(tag)>(c, out); });
    if (alt->parsed())
      return with_mode(c, "rational", [&](auto tag) { return cmd_alternative<decltype(tag)>(c, out); });
    if (trn->parsed()) return cmd_transform(c, out, err);
    if (cmb->parsed())
      return with_mode(c, "rational", [&](auto tag) { return cmd_combine<decltype(tag)>(c, out, err); });
    if (cnd->parsed())
      return with_mode(c, "rational", [&](auto tag) { return cmd_condition<decltype(tag)>(c, out, err); });
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace ville::cli
