#ifndef VILLE_BELIEF_HPP
#define VILLE_BELIEF_HPP

// Belief functions on finite frames.
//
// The semantic ground truth is a multivalued mapping: a finite probability
// space (X, P) and an image Gamma(x), a subset of the frame, for each x.
// Degrees of belief are Bel(A) = P{x : Gamma(x) is a subset of A}.  Mass
// functions are the compact interchange form: m(B) is the probability of
// the x whose image is B.
//
// Subsets of an n-element frame (n <= 20) are n-bit masks: bit i is set
// when label i belongs to the subset.  Every operation that builds a new
// body of evidence reports its conflict (the probability discarded by
// conditioning, 0 when nothing was discarded) and the irrelevance judgements
// its result presupposes.  The judgements are recorded, not checked.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ville/error.hpp"
#include "ville/scalar.hpp"

namespace ville::belief {

using Subset = std::uint32_t;

inline constexpr std::size_t kMaxFrameSize = 20;

inline bool is_subset(Subset a, Subset b) { return (a & ~b) == 0; }

class Frame {
 public:
  Frame() = default;

  explicit Frame(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw DomainError("a frame needs at least one label");
    if (labels_.size() > kMaxFrameSize) throw CapacityError("frames are limited to 20 labels");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      const std::string& l = labels_[i];
      if (l.empty() || l.find_first_of(" \t{},") != std::string::npos)
        throw DomainError("invalid frame label '" + l + "'");
      if (!index_.emplace(l, i).second) throw DomainError("duplicate frame label '" + l + "'");
    }
  }

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t lattice_size() const noexcept { return std::size_t{1} << labels_.size(); }
  Subset full() const noexcept { return static_cast<Subset>(lattice_size() - 1); }
  Subset complement(Subset a) const noexcept { return full() & ~a; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::size_t index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw DomainError("label '" + label + "' is not in the frame");
    return it->second;
  }

  Subset singleton(const std::string& label) const { return Subset{1} << index_of(label); }

  Subset subset(const std::vector<std::string>& members) const {
    Subset s = 0;
    for (const auto& m : members) s |= singleton(m);
    return s;
  }

  // "{a,b}", "{}" for the empty set.
  std::string format(Subset s) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!(s >> i & 1U)) continue;
      if (!first) out += ',';
      out += labels_[i];
      first = false;
    }
    return out + "}";
  }

  Subset parse_subset(const std::string& text) const {
    if (text.size() < 2 || text.front() != '{' || text.back() != '}')
      throw ParseError("subset must be written as {label,...}, got '" + text + "'");
    const std::string inner = text.substr(1, text.size() - 2);
    if (inner.empty()) return 0;
    Subset s = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= inner.size(); ++i) {
      if (i == inner.size() || inner[i] == ',') {
        const std::string label = inner.substr(start, i - start);
        auto it = index_.find(label);
        if (it == index_.end()) throw ParseError("label '" + label + "' is not in the frame");
        s |= Subset{1} << it->second;
        start = i + 1;
      }
    }
    return s;
  }

  friend bool operator==(const Frame& a, const Frame& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Machine-readable record of an irrelevance judgement a result relies on.
struct Judgement {
  std::string id;
  std::string statement;

  friend bool operator==(const Judgement&, const Judgement&) = default;
};

namespace judgements {

inline Judgement source_unbeatable(const std::string& source) {
  return {"source-unbeatable:" + source, "no betting strategy beats the probabilities of source " + source};
}
inline Judgement mapping_meaning(const std::string& source) {
  return {"mapping-meaning:" + source, "if source " + source + " takes value x, the answer lies in its image of x"};
}
inline Judgement mapping_irrelevant(const std::string& source) {
  return {"mapping-irrelevant:" + source,
          "learning the mapping of source " + source + " does not help a strategy beat its probabilities"};
}
inline Judgement only_nonempty_learned(const std::string& what) {
  return {"only-nonempty-learned:" + what,
          "beyond ruling out the source values with empty " + what + ", the mapping carries no information "
          "that helps beat the source probabilities"};
}
inline Judgement product_measure(const std::string& a, const std::string& b) {
  return {"product-measure:" + a + "," + b,
          "knowing either of sources " + a + ", " + b + " does not help beat the probabilities of the other"};
}
inline Judgement joint_mappings_irrelevant(const std::string& a, const std::string& b) {
  return {"joint-mappings-irrelevant:" + a + "," + b,
          "learning both mappings together does not help beat the product probabilities of " + a + " and " + b};
}

}  // namespace judgements

template <Scalar S>
double weight_tolerance() {
  return std::same_as<S, double> ? 1e-12 : 0.0;
}

template <Scalar S>
struct SourceSpace {
  std::vector<std::string> names;  // optional labels for the x values
  std::vector<S> weights;

  std::size_t size() const noexcept { return weights.size(); }

  void validate(double tol = weight_tolerance<S>()) const {
    if (weights.empty()) throw DomainError("source space is empty");
    if (weights.size() > (std::size_t{1} << 16)) throw CapacityError("source spaces are limited to 2^16 outcomes");
    if (!names.empty() && names.size() != weights.size()) throw DomainError("source names and weights differ in length");
    S total = 0;
    for (const S& w : weights) {
      if (!is_finite(w) || w < 0) throw DomainError("source weights must be finite and nonnegative");
      total += w;
    }
    if (!nearly_equal(total, S(1), tol)) throw DomainError("source weights must sum to 1");
  }

  std::string name(std::size_t i) const { return names.empty() ? "x" + std::to_string(i + 1) : names[i]; }
};

template <Scalar S>
struct MultivaluedMapping {
  std::string id = "X";  // names the source in judgement records
  SourceSpace<S> source;
  Frame frame;
  std::vector<Subset> gamma;  // one image per source value; empty images allowed

  void validate(double tol = weight_tolerance<S>()) const {
    source.validate(tol);
    if (gamma.size() != source.size()) throw DomainError("every source value needs exactly one image");
    for (Subset g : gamma)
      if (!is_subset(g, frame.full())) throw DomainError("image outside the frame");
  }

  bool has_empty_image() const {
    for (Subset g : gamma)
      if (g == 0) return true;
    return false;
  }
};

template <Scalar S>
class MassFunction {
 public:
  MassFunction() = default;

  // Validates normalization (within `tol`), nonnegativity and m(empty) = 0.
  MassFunction(Frame frame, std::map<Subset, S> masses, double tol = weight_tolerance<S>())
      : frame_(std::move(frame)), masses_(std::move(masses)) {
    S total = 0;
    for (auto it = masses_.begin(); it != masses_.end();) {
      const auto& [set, w] = *it;
      if (!is_subset(set, frame_.full())) throw DomainError("focal set outside the frame");
      if (!is_finite(w) || w < 0) throw DomainError("masses must be finite and nonnegative");
      if (set == 0 && w != 0) throw DomainError("a normalized mass function puts no mass on the empty set");
      total += w;
      it = w == 0 ? masses_.erase(it) : std::next(it);
    }
    if (!nearly_equal(total, S(1), tol)) throw DomainError("masses must sum to 1");
  }

  // m(frame) = 1.
  static MassFunction vacuous(Frame frame) {
    const Subset all = frame.full();
    return MassFunction(std::move(frame), {{all, S(1)}});
  }

  // m(A) = 1.
  static MassFunction categorical(Frame frame, Subset a) {
    if (a == 0) throw DomainError("categorical mass needs a non-empty set");
    return MassFunction(std::move(frame), {{a, S(1)}});
  }

  // Singleton masses equal to the given probabilities (in frame order).
  static MassFunction bayesian(Frame frame, const std::vector<S>& probabilities) {
    if (probabilities.size() != frame.size()) throw DomainError("one probability per frame label expected");
    std::map<Subset, S> m;
    for (std::size_t i = 0; i < probabilities.size(); ++i) m[Subset{1} << i] = probabilities[i];
    return MassFunction(std::move(frame), std::move(m));
  }

  const Frame& frame() const noexcept { return frame_; }
  const std::map<Subset, S>& focal() const noexcept { return masses_; }

  S mass(Subset a) const {
    auto it = masses_.find(a);
    return it == masses_.end() ? S(0) : it->second;
  }

  bool is_bayesian() const {
    for (const auto& [set, w] : masses_)
      if (std::popcount(set) != 1) return false;
    return true;
  }

  friend bool operator==(const MassFunction& a, const MassFunction& b) {
    return a.frame_ == b.frame_ && a.masses_ == b.masses_;
  }

 private:
  Frame frame_;
  std::map<Subset, S> masses_;
};

template <Scalar S>
struct BeliefFunction {
  Frame frame;
  std::vector<S> values;  // values[A] = Bel(A), indexed by subset mask

  const S& operator()(Subset a) const { return values.at(a); }
  S plausibility(Subset a) const { return S(S(1) - values.at(frame.complement(a))); }

  friend bool operator==(const BeliefFunction&, const BeliefFunction&) = default;
};

// A derived body of evidence with its conflict and presupposed judgements.
template <class T, Scalar S>
struct Assessment {
  T result;
  S conflict = S(0);
  std::vector<Judgement> judgements;
};

class TotalConflict : public Error {
 public:
  TotalConflict() : Error("total conflict: the bodies of evidence are contradictory (conflict = 1)") {}
};

class FrameMismatch : public DomainError {
 public:
  FrameMismatch() : DomainError("the two bodies of evidence are on different frames") {}
};

namespace detail {

// Probability of each distinct image, keyed by subset.
template <Scalar S>
std::map<Subset, S> image_weights(const MultivaluedMapping<S>& map) {
  std::map<Subset, S> w;
  for (std::size_t i = 0; i < map.gamma.size(); ++i)
    if (map.source.weights[i] != 0) w[map.gamma[i]] += map.source.weights[i];
  return w;
}

// Bel(A) = sum of weights of images contained in A, for every A, directly
// from the definition.  Images are grouped first, so the cost is
// (#distinct images) x 2^n.
template <Scalar S>
std::vector<S> belief_table(const Frame& frame, const std::map<Subset, S>& images, const S& normalizer) {
  std::vector<S> values(frame.lattice_size(), S(0));
  for (Subset a = 0; a < values.size(); ++a) {
    S total = 0;
    for (const auto& [img, w] : images)
      if (img != 0 && is_subset(img, a)) total += w;
    values[a] = S(total / normalizer);
  }
  return values;
}

inline void append(std::vector<Judgement>& to, const std::vector<Judgement>& from) {
  for (const auto& j : from)
    if (std::find(to.begin(), to.end(), j) == to.end()) to.push_back(j);
}

}  // namespace detail

// Bel(A) := P{x : Gamma(x) is a subset of A}.  Requires non-empty images;
// use condition_mapping otherwise.
template <Scalar S>
Assessment<BeliefFunction<S>, S> belief_from_mapping(const MultivaluedMapping<S>& map) {
  map.validate();
  if (map.has_empty_image()) throw DomainError("mapping has empty images; use condition_mapping");
  Assessment<BeliefFunction<S>, S> out;
  out.result.frame = map.frame;
  out.result.values = detail::belief_table(map.frame, detail::image_weights(map), S(1));
  out.judgements = {judgements::source_unbeatable(map.id), judgements::mapping_meaning(map.id),
                    judgements::mapping_irrelevant(map.id)};
  return out;
}

// Bel(A) = P{x : Gamma(x) in A, Gamma(x) non-empty} / P{x : Gamma(x) non-empty}.
template <Scalar S>
Assessment<BeliefFunction<S>, S> condition_mapping(const MultivaluedMapping<S>& map) {
  map.validate();
  const auto images = detail::image_weights(map);
  S nonempty = 0;
  for (const auto& [img, w] : images)
    if (img != 0) nonempty += w;
  if (nonempty == 0) throw NullEventError("every image is empty");
  Assessment<BeliefFunction<S>, S> out;
  out.result.frame = map.frame;
  out.result.values = detail::belief_table(map.frame, images, nonempty);
  out.conflict = S(S(1) - nonempty);
  out.judgements = {judgements::source_unbeatable(map.id), judgements::mapping_meaning(map.id),
                    judgements::only_nonempty_learned("images of " + map.id)};
  return out;
}

// Product frame of two frames; the label of (a, c) is "a*c" and its index
// is i * |frame2| + j.
inline Frame product_frame(const Frame& f1, const Frame& f2) {
  if (f1.size() * f2.size() > kMaxFrameSize) throw CapacityError("product frame exceeds 20 labels");
  std::vector<std::string> labels;
  for (const auto& a : f1.labels())
    for (const auto& b : f2.labels()) labels.push_back(a + "*" + b);
  return Frame(std::move(labels));
}

// Rectangle B x C in the product frame.
inline Subset product_subset(Subset b, std::size_t n1, Subset c, std::size_t n2) {
  Subset out = 0;
  for (std::size_t i = 0; i < n1; ++i)
    if (b >> i & 1U)
      for (std::size_t j = 0; j < n2; ++j)
        if (c >> j & 1U) out |= Subset{1} << (i * n2 + j);
  return out;
}

// Product source (X1 x X2, P1 x P2) with images Gamma1(x1) x Gamma2(x2).
template <Scalar S>
MultivaluedMapping<S> product_mapping(const MultivaluedMapping<S>& m1, const MultivaluedMapping<S>& m2) {
  m1.validate();
  m2.validate();
  MultivaluedMapping<S> out;
  out.id = m1.id + "x" + m2.id;
  out.frame = product_frame(m1.frame, m2.frame);
  for (std::size_t i = 0; i < m1.source.size(); ++i)
    for (std::size_t j = 0; j < m2.source.size(); ++j) {
      out.source.names.push_back(m1.source.name(i) + "*" + m2.source.name(j));
      out.source.weights.push_back(S(m1.source.weights[i] * m2.source.weights[j]));
      out.gamma.push_back(product_subset(m1.gamma[i], m1.frame.size(), m2.gamma[j], m2.frame.size()));
    }
  return out;
}

// Bel(A) = (P1 x P2){(x1, x2) : Gamma1(x1) x Gamma2(x2) in A} on the
// product frame.
template <Scalar S>
Assessment<BeliefFunction<S>, S> independent_combination(const MultivaluedMapping<S>& m1,
                                                         const MultivaluedMapping<S>& m2) {
  if (m1.has_empty_image() || m2.has_empty_image())
    throw DomainError("independent combination needs non-empty images");
  const MultivaluedMapping<S> prod = product_mapping(m1, m2);
  Assessment<BeliefFunction<S>, S> out;
  out.result.frame = prod.frame;
  // Sources of a product can exceed 2^16 before grouping; the definition is
  // applied to the grouped images directly.
  out.result.values = detail::belief_table(prod.frame, detail::image_weights(prod), S(1));
  out.judgements = {judgements::source_unbeatable(m1.id),        judgements::source_unbeatable(m2.id),
                    judgements::mapping_meaning(m1.id),          judgements::mapping_meaning(m2.id),
                    judgements::product_measure(m1.id, m2.id),   judgements::joint_mappings_irrelevant(m1.id, m2.id)};
  return out;
}

// Dempster's rule on mappings: the product source with images
// Gamma1(x1) & Gamma2(x2), conditioned on the intersection being non-empty.
template <Scalar S>
Assessment<BeliefFunction<S>, S> dempster_combine_mappings(const MultivaluedMapping<S>& m1,
                                                           const MultivaluedMapping<S>& m2) {
  m1.validate();
  m2.validate();
  if (!(m1.frame == m2.frame)) throw FrameMismatch();
  std::map<Subset, S> images;
  for (std::size_t i = 0; i < m1.source.size(); ++i)
    for (std::size_t j = 0; j < m2.source.size(); ++j) {
      const S w = m1.source.weights[i] * m2.source.weights[j];
      if (w != 0) images[m1.gamma[i] & m2.gamma[j]] += w;
    }
  S nonempty = 0;
  for (const auto& [img, w] : images)
    if (img != 0) nonempty += w;
  if (nonempty == 0) throw TotalConflict();
  Assessment<BeliefFunction<S>, S> out;
  out.result.frame = m1.frame;
  out.result.values = detail::belief_table(m1.frame, images, nonempty);
  out.conflict = S(S(1) - nonempty);
  out.judgements = {judgements::source_unbeatable(m1.id),
                    judgements::source_unbeatable(m2.id),
                    judgements::mapping_meaning(m1.id),
                    judgements::mapping_meaning(m2.id),
                    judgements::product_measure(m1.id, m2.id),
                    judgements::only_nonempty_learned("intersections of " + m1.id + " and " + m2.id)};
  return out;
}

// m(A) = sum_{B & C = A} m1(B) m2(C) / (1 - kappa), A non-empty, where
// kappa = sum_{B & C = empty} m1(B) m2(C).
template <Scalar S>
Assessment<MassFunction<S>, S> dempster_combine_masses(const MassFunction<S>& m1, const MassFunction<S>& m2) {
  if (!(m1.frame() == m2.frame())) throw FrameMismatch();
  std::map<Subset, S> raw;
  S conflict = 0;
  for (const auto& [b, wb] : m1.focal())
    for (const auto& [c, wc] : m2.focal()) {
      const S w = wb * wc;
      if ((b & c) == 0) {
        conflict += w;
      } else {
        raw[b & c] += w;
      }
    }
  const S keep = S(1) - conflict;
  if (raw.empty() || keep == 0) throw TotalConflict();
  for (auto& [set, w] : raw) w = S(w / keep);
  Assessment<MassFunction<S>, S> out;
  // Renormalized masses sum to 1 up to rounding; allow for it in float mode.
  out.result = MassFunction<S>(m1.frame(), std::move(raw), std::same_as<S, double> ? 1e-9 : 0.0);
  out.conflict = conflict;
  out.judgements = {judgements::product_measure("m1", "m2"), judgements::only_nonempty_learned("intersections")};
  return out;
}

// Bel(A) = sum of m(B) over non-empty B contained in A.
template <Scalar S>
S bel_value(const MassFunction<S>& m, Subset a) {
  S total = 0;
  for (const auto& [b, w] : m.focal())
    if (b != 0 && is_subset(b, a)) total += w;
  return total;
}

// Pl(A) = 1 - Bel(complement of A).
template <Scalar S>
S plausibility(const MassFunction<S>& m, Subset a) {
  return S(S(1) - bel_value(m, m.frame().complement(a)));
}

// Full table of Bel by the subset-sum (zeta) transform, O(n 2^n).
template <Scalar S>
BeliefFunction<S> belief_function(const MassFunction<S>& m) {
  BeliefFunction<S> bel;
  bel.frame = m.frame();
  bel.values.assign(m.frame().lattice_size(), S(0));
  for (const auto& [b, w] : m.focal()) bel.values[b] = w;
  const std::size_t n = m.frame().size();
  for (std::size_t i = 0; i < n; ++i) {
    const Subset bit = Subset{1} << i;
    for (Subset a = 0; a < bel.values.size(); ++a)
      if (a & bit) bel.values[a] += bel.values[a ^ bit];
  }
  return bel;
}

// Moebius inversion: the unique m with Bel(A) = sum_{B in A} m(B).  Throws
// when the input is not a belief function.
template <Scalar S>
MassFunction<S> mass_from_belief(const BeliefFunction<S>& bel) {
  const Frame& frame = bel.frame;
  if (bel.values.size() != frame.lattice_size()) throw DomainError("belief table does not match the frame");
  const double tol = std::same_as<S, double> ? 1e-12 : 0.0;
  if (!nearly_equal(bel.values[0], S(0), tol) || !nearly_equal(bel.values[frame.full()], S(1), tol))
    throw DomainError("input is not a belief function: need Bel(empty) = 0 and Bel(frame) = 1");
  std::vector<S> m = bel.values;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const Subset bit = Subset{1} << i;
    for (Subset a = 0; a < m.size(); ++a)
      if (a & bit) m[a] -= m[a ^ bit];
  }
  std::map<Subset, S> masses;
  for (Subset a = 1; a < m.size(); ++a) {
    if (m[a] < 0 && !nearly_equal(m[a], S(0), tol)) throw DomainError("input is not a belief function");
    if (!nearly_equal(m[a], S(0), tol)) masses[a] = m[a];
  }
  return MassFunction<S>(frame, std::move(masses), std::same_as<S, double> ? 1e-9 : 0.0);
}

// Mapping with one source value per focal set, Gamma = identity on focal
// sets.
template <Scalar S>
MultivaluedMapping<S> canonical_mapping(const MassFunction<S>& m, std::string id = "X") {
  MultivaluedMapping<S> map;
  map.id = std::move(id);
  map.frame = m.frame();
  for (const auto& [set, w] : m.focal()) {
    map.source.names.push_back(map.frame.format(set));
    map.source.weights.push_back(w);
    map.gamma.push_back(set);
  }
  return map;
}

// Pushes source probabilities onto their images (non-empty images only).
template <Scalar S>
MassFunction<S> mass_of_mapping(const MultivaluedMapping<S>& map) {
  map.validate();
  if (map.has_empty_image()) throw DomainError("mapping has empty images; use condition_mapping");
  return MassFunction<S>(map.frame, detail::image_weights(map), weight_tolerance<S>());
}

// Mass form of condition_mapping: non-empty images renormalized.
template <Scalar S>
MassFunction<S> conditioned_mass(const MultivaluedMapping<S>& map) {
  map.validate();
  std::map<Subset, S> images = detail::image_weights(map);
  images.erase(Subset{0});
  S nonempty = 0;
  for (const auto& [img, w] : images) nonempty += w;
  if (nonempty == 0) throw NullEventError("every image is empty");
  for (auto& [img, w] : images) w = S(w / nonempty);
  return MassFunction<S>(map.frame, std::move(images), std::same_as<S, double> ? 1e-9 : 0.0);
}

// Images intersected with `event`: learning only that the answer lies in it.
template <Scalar S>
MultivaluedMapping<S> restrict_mapping(MultivaluedMapping<S> map, Subset event) {
  if (!is_subset(event, map.frame.full())) throw DomainError("event outside the frame");
  for (Subset& g : map.gamma) g &= event;
  return map;
}

}  // namespace ville::belief

#endif  // VILLE_BELIEF_HPP
