#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "binder/core.hpp"
#include "binder/rng.hpp"

// Edge-list ingestion, closure/reduction, experiment splits, and negative
// sampling. All pair lists are (hyponym, hypernym): (a, b) reads "a is-a b".

namespace binder {

struct Pair {
  std::uint32_t hypo = 0;
  std::uint32_t hyper = 0;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

using PairList = std::vector<Pair>;

// Hash set over ordered pairs, used for forbidden-pair checks during sampling.
class PairSet {
  struct Hash {
    std::size_t operator()(std::uint64_t k) const { return rng::mix64(k); }
  };
  static std::uint64_t pack(Pair p) {
    return (static_cast<std::uint64_t>(p.hypo) << 32) | p.hyper;
  }

 public:
  PairSet() = default;
  explicit PairSet(const PairList& pairs) {
    set_.reserve(pairs.size() * 2);
    for (Pair p : pairs) set_.insert(pack(p));
  }
  void insert(Pair p) { set_.insert(pack(p)); }
  bool contains(Pair p) const { return set_.contains(pack(p)); }
  std::size_t size() const { return set_.size(); }

 private:
  std::unordered_set<std::uint64_t, Hash> set_;
};

// Dense membership bitmap over all n*n ordered pairs: one bit each, so
// contains() is a load and a mask instead of a hash probe. Worth it in hot
// sampling loops whenever n*n bits fit comfortably in memory.
class DensePairSet {
 public:
  DensePairSet(const PairList& pairs, std::size_t n)
      : n_(n), bits_((n * n + 63) / 64, 0) {
    for (Pair p : pairs) {
      const std::size_t k = static_cast<std::size_t>(p.hypo) * n_ + p.hyper;
      bits_[k >> 6] |= 1ULL << (k & 63);
    }
  }
  bool contains(Pair p) const {
    const std::size_t k = static_cast<std::size_t>(p.hypo) * n_ + p.hyper;
    return (bits_[k >> 6] >> (k & 63)) & 1;
  }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> bits_;
};

enum class SplitMode { kRepresentation, kLinkPrediction };

std::string_view to_string(SplitMode mode);
SplitMode split_mode_from_string(std::string_view s);  // ConfigError on unknown

// One experiment's frozen data. Link prediction: train/val/test positives
// partition the closure and val/test negatives are frozen at split time.
// Representation: train_pos is the full closure, val_pos aliases it, and the
// test set is logically all n^2 - n ordered pairs (materialized lazily by the
// evaluator), so test_pos/test_neg stay empty.
struct SplitBundle {
  SplitMode mode = SplitMode::kRepresentation;
  int tc_percent = 100;  // 100 in representation mode
  int neg_ratio = 10;
  std::uint64_t split_seed = 0;
  PairList train_pos;
  PairList val_pos, val_neg;
  PairList test_pos, test_neg;
};

struct ParsedEdges {
  Vocabulary vocab;
  PairList pairs;
};

// Lines are "child<TAB>parent", UTF-8, LF or CRLF. Blank lines and lines
// starting with '#' are ignored. Duplicate edges are deduplicated, reflexive
// edges dropped. Vocabulary ids are assigned in first-appearance order.
// DataError on malformed lines (with line number) and on empty input.
ParsedEdges parse_edges(std::istream& in);

// Closure under composition, reflexive pairs excluded, canonically sorted by
// (hypo, hyper). CycleError when the edges do not form a DAG.
PairList transitive_closure(const PairList& pairs, std::size_t n);

struct EdgeClasses {
  PairList direct;    // pairs with no intermediate concept
  PairList indirect;  // the rest of the closure
};

// Input must be transitively closed (DataError otherwise). direct and
// indirect are disjoint and their union is the input.
EdgeClasses classify_edges(const PairList& closure, std::size_t n);

struct DropRootResult {
  Vocabulary vocab;
  PairList pairs;
};

// Removes every pair touching the named root. By default the concept itself
// is dropped too and ids are recompacted (first-appearance order preserved).
// DataError when the name is unknown.
DropRootResult drop_root(const Vocabulary& vocab, const PairList& pairs,
                         std::string_view root_name, bool keep_node = false);

// Builds one experiment split. Link prediction: tc_percent in {0,10,25,50};
// train_pos = direct edges plus floor(tc_percent% of indirect) chosen by a
// seeded shuffle; leftover indirect edges split 50/50 into val/test (val gets
// the floor half). Representation: tc_percent must be 100. Negatives are
// drawn iid uniform over ordered non-closure pairs (repeats possible), frozen.
// ConfigError on invalid tc_percent/neg_ratio; DataError when the graph is
// too dense to supply the requested number of negatives.
SplitBundle make_split(const PairList& closure, std::size_t n, SplitMode mode,
                       int tc_percent, int neg_ratio, std::uint64_t seed);

// Per positive (a,b): n_minus/2 left corruptions (r,b) and n_minus/2 right
// corruptions (a,r), r uniform over the vocabulary. Reflexive or forbidden
// candidates are resampled up to 100 times, then the slot is skipped. Output
// is a pure function of (seed, epoch, pair index, slot), independent of
// thread count. ConfigError when n_minus is odd or < 2, or vocab_size < 2.
PairList sample_negatives(const PairList& positives, const PairSet& forbidden,
                          std::size_t vocab_size, int n_minus, std::uint64_t seed,
                          std::uint64_t epoch);

// In-place variant reusing a buffer; used by the training loop.
void sample_negatives_into(const PairList& positives, const PairSet& forbidden,
                           std::size_t vocab_size, int n_minus, std::uint64_t seed,
                           std::uint64_t epoch, PairList& out);

namespace detail {

// Shared slot sampler so the materialized list and the optimizer's fused
// training path produce identical negatives. Slot s < n_minus/2 corrupts the
// hyponym, the rest corrupt the hypernym. nullopt after 100 rejections.
//
// pair_key is the fold of (seed, kNegatives, epoch, pair_index); hot loops
// compute it once per positive instead of re-hashing the full key per
// attempt. Forbidden is duck-typed so callers can pass a DensePairSet.
template <class Forbidden>
inline std::optional<Pair> sample_negative_slot_keyed(std::uint64_t pair_key,
                                                      std::uint64_t slot, int n_minus,
                                                      Pair positive,
                                                      std::size_t vocab_size,
                                                      const Forbidden& forbidden) {
  const bool left = slot < static_cast<std::uint64_t>(n_minus / 2);
  const std::uint64_t slot_key = rng::combine(pair_key, slot);
  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    const std::uint64_t h = rng::combine(slot_key, attempt);
    const auto r = static_cast<std::uint32_t>(rng::bounded(h, vocab_size));
    const Pair cand = left ? Pair{r, positive.hyper} : Pair{positive.hypo, r};
    if (cand.hypo == cand.hyper) continue;
    if (forbidden.contains(cand)) continue;
    return cand;
  }
  return std::nullopt;
}

inline std::optional<Pair> sample_negative_slot(std::uint64_t seed, std::uint64_t epoch,
                                                std::uint64_t pair_index, std::uint64_t slot,
                                                int n_minus, Pair positive,
                                                std::size_t vocab_size,
                                                const PairSet& forbidden) {
  return sample_negative_slot_keyed(
      rng::key(seed, rng::Stream::kNegatives, epoch, pair_index), slot, n_minus,
      positive, vocab_size, forbidden);
}

}  // namespace detail

}  // namespace binder
