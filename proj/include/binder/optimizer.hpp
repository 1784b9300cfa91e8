#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "binder/core.hpp"
#include "binder/dataset.hpp"

// Integer loss and gradient, flip-probability sampling, and the training
// loop. Everything that feeds a flip decision is exact 64-bit integer
// arithmetic; only the tanh that turns a gradient into a probability runs in
// double precision. The load-bearing identity, verified by the test suite on
// random instances: for any state B and any single bit (w, j),
//     Loss(B with (w,j) flipped) - Loss(B) = -Delta[w,j]
// where Delta = alpha * positive_gradient + beta * negative_gradient.

namespace binder {

using GradientMatrix =
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ProbMatrix =
    Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct TrainConfig {
  std::size_t d = 0;
  std::int64_t alpha = 1;
  std::int64_t beta = 10;
  int n_minus = 2;
  double lr = 0.008;
  double bias = 0.01;
  std::int64_t max_epochs = 10000;
  std::int64_t early_stop_width = 500;  // window of recorded evaluations
  std::int64_t eval_every = 1;          // epochs between validation checks
  std::uint64_t seed = 0;
  int threads = 0;  // 0: all available

  // ConfigError on violation. beta = 0 and bias = 0 are legal (ablations);
  // alpha >= 1, n_minus even, max_epochs >= 1, widths >= 1.
  void validate() const;
};

struct LossValue {
  std::int64_t loss_p = 0;  // alpha * sum of positive-pair violations
  std::int64_t loss_n = 0;  // beta * count of negative pairs with G = 0
  std::int64_t total() const { return loss_p + loss_n; }
};

LossValue loss(const BitMatrix& B, const PairList& P, const PairList& N,
               std::int64_t alpha, std::int64_t beta);

// Unscaled Delta+ : per pair (a,b), Delta[a] += b*(1-2a), Delta[b] += (1-a)*(2b-1).
GradientMatrix positive_gradient(const BitMatrix& B, const PairList& P);

// Unscaled Delta- : per pair with G good bits ((a'_j,b'_j) = (0,1)):
// G=0: Delta[a'] += a'*b', Delta[b'] += (1-a')*(1-b');
// G=1: both rows get -1 at the single good bit; G>=2: no contribution.
GradientMatrix negative_gradient(const BitMatrix& B, const PairList& N);

// Element-wise max{0, 0.5 * tanh(2 * (lr * Delta + bias))}; values in [0, 0.5].
ProbMatrix flip_probabilities(const GradientMatrix& delta, double lr, double bias);

// Flips each bit independently with its probability. The draw for bit (w, j)
// is a pure function of (seed, epoch, w, j): identical results for any thread
// count. Returns the number of bits flipped.
std::size_t apply_flips(BitMatrix& B, const ProbMatrix& probs, std::uint64_t seed,
                        std::uint64_t epoch, int threads = 0);

struct EpochRecord {
  std::int64_t epoch = 0;    // 1-based
  std::int64_t loss_p = 0;   // measured on the state entering the epoch
  std::int64_t loss_n = 0;
  std::optional<double> val_f1;  // present on evaluation epochs
  std::size_t bits_flipped = 0;
  std::int64_t elapsed_us = 0;
};

struct TrainReport {
  BitMatrix best_embedding;
  double best_f1 = 0.0;
  std::vector<EpochRecord> history;
  std::int64_t stopped_epoch = 0;
};

using MetricsSink = std::function<void(const EpochRecord&)>;

// Full training loop: B starts as the zero matrix; each epoch resamples
// training negatives (epoch-keyed, fresh every epoch), computes
// Delta = alpha*Delta+ + beta*Delta-, turns it into flip probabilities,
// flips, and every eval_every epochs scores F1 on (val_pos, val_neg),
// tracking the best state (strict improvement). Exits early when the mean of
// the older half of the last 2*width recorded F1 values is >= the mean of
// the recent half; the check is skipped until 2*width evaluations exist. The
// final epoch is always evaluated so the report never lacks a validation
// score. Training negatives are checked against train positives only.
TrainReport train(const Vocabulary& vocab, const SplitBundle& bundle,
                  const TrainConfig& cfg, const MetricsSink& sink = {});

}  // namespace binder
