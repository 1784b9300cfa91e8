#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "binder/core.hpp"
#include "binder/dataset.hpp"
#include "binder/optimizer.hpp"

// Independent reference implementations used to check the library. Everything
// here favors obviousness over speed: per-bit loops, BFS reachability, and
// brute-force loss re-evaluation. None of it shares code with src/.

namespace binder::oracle {

// Row bits as a plain vector<int>, index j = bit j.
std::vector<int> unpack(const BitRow& row);
std::vector<int> unpack(const BitMatrix& m, std::uint32_t w);

// "101100" -> row with bits 0, 2, 3 set (leftmost character is bit 0).
BitRow row_from_bits(std::string_view bits);

// |{ j : a_j = 0 and b_j = 1 }| by per-position loop.
std::size_t naive_violation_count(const std::vector<int>& a, const std::vector<int>& b);

// Loss recomputed from scratch with naive_violation_count:
// alpha * sum of positive violations + beta * |{negatives with zero violations}|.
std::int64_t naive_loss(const BitMatrix& B, const PairList& P, const PairList& N,
                        std::int64_t alpha, std::int64_t beta);

// Reachability closure by BFS from every node; sorted by (hypo, hyper).
PairList bfs_closure(const PairList& pairs, std::size_t n);

struct RandomDag {
  std::size_t n = 0;
  PairList edges;  // every edge has hyper < hypo, hence acyclic
};

// Random DAG keyed by (seed, instance): 2..max_n nodes, each ordered pair
// (i, j) with j < i becomes an edge with probability ~0.15.
RandomDag random_dag(std::uint64_t seed, std::uint64_t instance, std::size_t max_n);

// Matrix of iid uniform bits, padding zero, keyed by (seed, instance).
BitMatrix random_matrix(std::uint64_t seed, std::uint64_t instance, std::size_t n,
                        std::size_t d);

// count ordered pairs with hypo != hyper, keyed by (seed, instance).
PairList random_pairs(std::uint64_t seed, std::uint64_t instance, std::size_t n,
                      std::size_t count);

// d = n embedding with row(v) = {v} union ancestors(v); containment then
// holds exactly for closure pairs, so it scores perfectly.
BitMatrix perfect_embedding(const PairList& closure, std::size_t n);

struct DescentResult {
  BitMatrix state;
  std::vector<std::int64_t> losses;  // loss after every accepted flip
  bool monotone = true;              // no step increased the loss
  bool swept_clean = false;          // final exhaustive sweep found no improving flip
};

// Hill climbing on the exact loss: repeatedly flip one bit with positive
// combined gradient until none remains, re-measuring the loss by brute force
// after every flip; finishes with an exhaustive all-bits sweep.
DescentResult hill_climb(BitMatrix B, const PairList& P, const PairList& N,
                         std::int64_t alpha, std::int64_t beta);

}  // namespace binder::oracle
