#pragma once

#include <cstdint>

#include "binder/core.hpp"
#include "binder/dataset.hpp"

// Confusion counts and F1 for both evaluation protocols: labeled pair lists
// (link prediction) and the full n^2 - n adjacency (representation). All
// operations are read-only over the matrix and parallelize internally.

namespace binder {

struct Confusion {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::int64_t total() const { return tp + fp + fn + tn; }
};

// Positives count tp when predicted, else fn; negatives count fp when
// predicted, else tn.
Confusion evaluate_pairs(const BitMatrix& B, const PairList& positives,
                         const PairList& negatives, int threads = 0);

// Streams all ordered pairs (a, b), a != b, labeling by closure membership;
// never materializes the pair list.
Confusion evaluate_full_adjacency(const BitMatrix& B, const PairList& closure,
                                  int threads = 0);

// 2TP / (2TP + FP + FN); 0 when the denominator is 0.
double f1(const Confusion& c);
double precision(const Confusion& c);
double recall(const Confusion& c);

}  // namespace binder
