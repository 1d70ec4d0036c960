#ifndef VILLE_BELIEF_IO_HPP
#define VILLE_BELIEF_IO_HPP

// Evidence files.
//
//   # comment
//   frame a b c
//   id witness            (optional source name)
//   mass {a} 0.6          (mass form: focal set, weight)
//   mass {a,b,c} 2/5
//
// or, in mapping form,
//
//   frame a b
//   source x1 0.6 {a}
//   source x2 0.4 {a,b}
//
// Weights are decimal or fractional.  Totals more than 1e-9 away from 1,
// and mass on the empty set, are rejected unless the file carries a line
// "unnormalized"; weights are then rescaled to sum to 1 (in every case the
// stored weights are divided by their total).  Results written by the
// combination commands add "conflict <value>" and
// "judgement <id> <statement>" lines, which the parser keeps.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ville/belief.hpp"
#include "ville/error.hpp"
#include "ville/io.hpp"
#include "ville/scalar.hpp"

namespace ville::belief {

inline constexpr double kFileNormalizationTolerance = 1e-9;

template <Scalar S>
struct EvidenceFile {
  enum class Form { mass, mapping };

  Form form = Form::mass;
  bool unnormalized = false;
  MultivaluedMapping<S> mapping;  // mass form is stored as its canonical mapping
  std::optional<S> conflict;
  std::vector<Judgement> judgements;

  const Frame& frame() const { return mapping.frame; }

  MassFunction<S> mass() const { return mass_of_mapping(mapping); }
};

template <Scalar S>
EvidenceFile<S> parse_evidence(std::string_view text) {
  EvidenceFile<S> file;
  bool have_frame = false, have_mass = false, have_source = false, have_id = false;
  std::vector<Subset> images;
  std::vector<S> weights;
  std::vector<std::string> names;

  const auto ls = io::lines(text);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto where = [&](const std::string& what) { return ParseError("line " + std::to_string(line_no) + ": " + what); };
    const std::string_view line = io::trim(ls[i]);
    if (line.empty() || line.front() == '#') continue;
    const auto tok = io::split_ws(line);
    const std::string& key = tok[0];
    auto weight = [&](const std::string& s) {
      try {
        return parse_scalar<S>(s);
      } catch (const ParseError& e) {
        throw where(e.what());
      }
    };
    auto subset = [&](const std::string& s) {
      try {
        return file.mapping.frame.parse_subset(s);
      } catch (const ParseError& e) {
        throw where(e.what());
      }
    };

    if (key == "frame") {
      if (have_frame) throw where("duplicate frame line");
      try {
        file.mapping.frame = Frame(std::vector<std::string>(tok.begin() + 1, tok.end()));
      } catch (const Error& e) {
        throw where(e.what());
      }
      have_frame = true;
    } else if (key == "unnormalized") {
      if (tok.size() != 1) throw where("'unnormalized' takes no arguments");
      file.unnormalized = true;
    } else if (key == "id") {
      if (tok.size() != 2 || have_id) throw where("expected a single 'id <name>' line");
      file.mapping.id = tok[1];
      have_id = true;
    } else if (key == "mass") {
      if (!have_frame) throw where("'frame' must come first");
      if (tok.size() != 3) throw where("expected 'mass {set} weight'");
      have_mass = true;
      const Subset s = subset(tok[1]);
      for (Subset prev : images)
        if (prev == s) throw where("focal set " + tok[1] + " listed twice");
      images.push_back(s);
      weights.push_back(weight(tok[2]));
      names.push_back(tok[1]);
    } else if (key == "source") {
      if (!have_frame) throw where("'frame' must come first");
      if (tok.size() != 4) throw where("expected 'source name weight {set}'");
      have_source = true;
      for (const auto& n : names)
        if (n == tok[1]) throw where("source value " + tok[1] + " listed twice");
      names.push_back(tok[1]);
      weights.push_back(weight(tok[2]));
      images.push_back(subset(tok[3]));
    } else if (key == "conflict") {
      if (tok.size() != 2) throw where("expected 'conflict value'");
      file.conflict = weight(tok[1]);
    } else if (key == "judgement") {
      if (tok.size() < 3) throw where("expected 'judgement id statement'");
      const std::size_t id_pos = line.find(tok[1]);
      file.judgements.push_back({tok[1], std::string(io::trim(line.substr(id_pos + tok[1].size())))});
    } else {
      throw where("unknown record '" + key + "'");
    }
  }
  if (!have_frame) throw ParseError("missing 'frame' line");
  if (have_mass && have_source) throw ParseError("a file holds either mass lines or source lines, not both");
  if (!have_mass && !have_source) throw ParseError("no mass or source lines");
  file.form = have_source ? EvidenceFile<S>::Form::mapping : EvidenceFile<S>::Form::mass;

  S total = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!is_finite(weights[i]) || weights[i] < 0) throw ParseError("weights must be nonnegative");
    if (images[i] == 0 && weights[i] != 0 && !file.unnormalized)
      throw ParseError("weight on the empty set requires the 'unnormalized' flag");
    total += weights[i];
  }
  if (!(total > 0)) throw ParseError("weights sum to zero");
  if (!file.unnormalized && std::fabs(to_double(total) - 1.0) > kFileNormalizationTolerance)
    throw ParseError("weights sum to " + to_string(total) + ", not 1 (add 'unnormalized' to rescale)");
  for (auto& w : weights) w = S(w / total);

  file.mapping.source.names = std::move(names);
  file.mapping.source.weights = std::move(weights);
  file.mapping.gamma = std::move(images);
  file.mapping.validate(std::same_as<S, double> ? 1e-12 : 0.0);
  return file;
}

template <Scalar S>
std::string serialize_mass(const MassFunction<S>& m, const std::optional<S>& conflict = std::nullopt,
                           const std::vector<Judgement>& judgements = {}) {
  std::string out = "frame";
  for (const auto& l : m.frame().labels()) out += ' ' + l;
  out += '\n';
  for (const auto& [set, w] : m.focal()) out += "mass " + m.frame().format(set) + ' ' + to_string(w) + '\n';
  if (conflict) out += "conflict " + to_string(*conflict) + '\n';
  for (const auto& j : judgements) out += "judgement " + j.id + ' ' + j.statement + '\n';
  return out;
}

template <Scalar S>
std::string serialize_mapping(const MultivaluedMapping<S>& map) {
  std::string out = "frame";
  for (const auto& l : map.frame.labels()) out += ' ' + l;
  out += "\nid " + map.id + '\n';
  for (std::size_t i = 0; i < map.source.size(); ++i)
    out += "source " + map.source.name(i) + ' ' + to_string(map.source.weights[i]) + ' ' +
           map.frame.format(map.gamma[i]) + '\n';
  return out;
}

}  // namespace ville::belief

#endif  // VILLE_BELIEF_IO_HPP
