#include "binder/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>

#include "binder/evaluator.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace binder {
namespace {

int resolve_threads(int threads) {
#ifdef _OPENMP
  return threads > 0 ? threads : omp_get_max_threads();
#else
  (void)threads;
  return 1;
#endif
}

int this_thread_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

// Adds weight to grad[row, k*64 + t] for every set bit t of mask.
inline void scatter(std::int64_t* grad_row, std::size_t word_index, std::uint64_t mask,
                    std::int64_t weight) {
  std::int64_t* base = grad_row + word_index * kWordBits;
  while (mask) {
    base[std::countr_zero(mask)] += weight;
    mask &= mask - 1;
  }
}

// Positive pair (a, b), truth table per bit (a_j, b_j):
//   (0,1): Delta[a] += 1, Delta[b] += 1   (fix the violation from either side)
//   (1,1): Delta[a] -= 1                  (protect the satisfied containment)
//   (0,0): Delta[b] -= 1                  (protect b's zero)
//   (1,0): nothing
// Returns the pair's violation count (its (0,1) bits).
inline std::int64_t accumulate_positive(std::int64_t* grad, const BitMatrix& B,
                                        Pair p, std::int64_t weight) {
  const auto a = B.row(p.hypo);
  const auto b = B.row(p.hyper);
  std::int64_t* ga = grad + static_cast<std::size_t>(p.hypo) * B.d();
  std::int64_t* gb = grad + static_cast<std::size_t>(p.hyper) * B.d();
  const std::uint64_t live = B.live_mask();
  std::int64_t violations = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::uint64_t va = a[k], vb = b[k];
    const std::uint64_t lw = (k + 1 == a.size()) ? live : ~0ULL;
    const std::uint64_t viol = ~va & vb;  // b's padding is zero, no mask needed
    violations += std::popcount(viol);
    scatter(ga, k, viol, weight);
    scatter(ga, k, va & vb, -weight);
    scatter(gb, k, viol, weight);
    scatter(gb, k, ~va & ~vb & lw, -weight);
  }
  return violations;
}

// Negative pair (a', b'): G = count of good bits (0,1). G = 0 means the pair
// is wrongly predicted positive: push 1-bits of b' out of a' and raise b's
// zeros that a' also lacks. G = 1: protect the lone good bit on both rows.
// G >= 2: safely negative, no contribution. Returns 1 when G = 0.
inline std::int64_t accumulate_negative(std::int64_t* grad, const BitMatrix& B,
                                        Pair p, std::int64_t weight) {
  const auto a = B.row(p.hypo);
  const auto b = B.row(p.hyper);
  std::size_t good = 0;
  std::size_t good_word = 0;
  std::uint64_t good_mask = 0;
  for (std::size_t k = 0; k < a.size() && good < 2; ++k) {
    const std::uint64_t g = ~a[k] & b[k];
    if (g) {
      good += std::popcount(g);
      good_word = k;
      good_mask = g;
    }
  }
  if (good >= 2) return 0;

  std::int64_t* ga = grad + static_cast<std::size_t>(p.hypo) * B.d();
  std::int64_t* gb = grad + static_cast<std::size_t>(p.hyper) * B.d();
  if (good == 1) {
    const std::size_t j = good_word * kWordBits + std::countr_zero(good_mask);
    ga[j] -= weight;
    gb[j] -= weight;
    return 0;
  }
  const std::uint64_t live = B.live_mask();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::uint64_t va = a[k], vb = b[k];
    const std::uint64_t lw = (k + 1 == a.size()) ? live : ~0ULL;
    scatter(ga, k, va & vb, weight);
    scatter(gb, k, ~va & ~vb & lw, weight);
  }
  return 1;
}

struct GradientWorkspace {
  std::vector<GradientMatrix> partials;  // one per thread
  GradientMatrix delta;

  GradientWorkspace(int threads, std::size_t n, std::size_t d)
      : partials(threads, GradientMatrix::Zero(n, d)), delta(n, d) {}

  void reset() {
    for (auto& p : partials) p.setZero();
  }

  void merge(int threads) {
    const auto n = delta.rows();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (Eigen::Index w = 0; w < n; ++w) {
      delta.row(w) = partials[0].row(w);
      for (std::size_t t = 1; t < partials.size(); ++t)
        delta.row(w) += partials[t].row(w);
    }
  }
};

void check_ids(const PairList& pairs, std::size_t n, const char* what) {
  for (Pair p : pairs)
    if (p.hypo >= n || p.hyper >= n)
      throw DataError(std::string(what) + ": pair id out of range");
}

double mean(const std::vector<double>& v, std::size_t from, std::size_t to) {
  return std::accumulate(v.begin() + from, v.begin() + to, 0.0) /
         static_cast<double>(to - from);
}

}  // namespace

void TrainConfig::validate() const {
  if (d < 1) throw ConfigError("dimension must be >= 1");
  if (alpha < 1) throw ConfigError("alpha must be >= 1");
  if (beta < 0) throw ConfigError("beta must be >= 0");
  if (n_minus < 2 || n_minus % 2 != 0)
    throw ConfigError("negative multiplier must be even and >= 2");
  if (!(lr > 0)) throw ConfigError("learning rate must be > 0");
  if (bias < 0) throw ConfigError("learning bias must be >= 0");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (early_stop_width < 1) throw ConfigError("early_stop_width must be >= 1");
  if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

LossValue loss(const BitMatrix& B, const PairList& P, const PairList& N,
               std::int64_t alpha, std::int64_t beta) {
  std::int64_t violations = 0;
  std::int64_t zero_good = 0;
#pragma omp parallel for schedule(static) reduction(+ : violations)
  for (std::size_t i = 0; i < P.size(); ++i)
    violations += static_cast<std::int64_t>(
        violation_count(B.row(P[i].hypo), B.row(P[i].hyper)));
#pragma omp parallel for schedule(static) reduction(+ : zero_good)
  for (std::size_t i = 0; i < N.size(); ++i)
    zero_good += violation_count(B.row(N[i].hypo), B.row(N[i].hyper)) == 0 ? 1 : 0;
  return {alpha * violations, beta * zero_good};
}

GradientMatrix positive_gradient(const BitMatrix& B, const PairList& P) {
  const int nt = resolve_threads(0);
  GradientWorkspace ws(nt, B.n(), B.d());
#pragma omp parallel num_threads(nt)
  {
    std::int64_t* grad = ws.partials[this_thread_id()].data();
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < P.size(); ++i)
      accumulate_positive(grad, B, P[i], 1);
  }
  ws.merge(nt);
  return std::move(ws.delta);
}

GradientMatrix negative_gradient(const BitMatrix& B, const PairList& N) {
  const int nt = resolve_threads(0);
  GradientWorkspace ws(nt, B.n(), B.d());
#pragma omp parallel num_threads(nt)
  {
    std::int64_t* grad = ws.partials[this_thread_id()].data();
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < N.size(); ++i)
      accumulate_negative(grad, B, N[i], 1);
  }
  ws.merge(nt);
  return std::move(ws.delta);
}

ProbMatrix flip_probabilities(const GradientMatrix& delta, double lr, double bias) {
  if (!(lr > 0)) throw ConfigError("learning rate must be > 0");
  if (bias < 0) throw ConfigError("learning bias must be >= 0");
  ProbMatrix x =
      (((delta.cast<double>().array() * lr) + bias) * 2.0).tanh() * 0.5;
  return x.max(0.0);
}

std::size_t apply_flips(BitMatrix& B, const ProbMatrix& probs, std::uint64_t seed,
                        std::uint64_t epoch, int threads) {
  if (static_cast<std::size_t>(probs.rows()) != B.n() ||
      static_cast<std::size_t>(probs.cols()) != B.d())
    throw DimensionError("probability matrix shape mismatch");
  const int nt = resolve_threads(threads);
  const std::size_t d = B.d();
  std::int64_t flipped = 0;
#pragma omp parallel for schedule(static) num_threads(nt) reduction(+ : flipped)
  for (std::size_t w = 0; w < B.n(); ++w) {
    auto row = B.row_mut(w);
    const double* pr = probs.data() + w * d;
    for (std::size_t j = 0; j < d; ++j) {
      const double p = pr[j];
      if (p <= 0.0) continue;
      const double u = rng::to_unit(rng::key(seed, rng::Stream::kFlips, epoch, w, j));
      if (u < p) {
        row[j / kWordBits] ^= 1ULL << (j % kWordBits);
        ++flipped;
      }
    }
  }
  return static_cast<std::size_t>(flipped);
}

TrainReport train(const Vocabulary& vocab, const SplitBundle& bundle,
                  const TrainConfig& cfg, const MetricsSink& sink) {
  cfg.validate();
  const std::size_t n = vocab.size();
  if (n < 2) throw ConfigError("training requires at least two concepts");
  if (bundle.train_pos.empty()) throw ConfigError("training set is empty");
  check_ids(bundle.train_pos, n, "train_pos");
  check_ids(bundle.val_pos, n, "val_pos");
  check_ids(bundle.val_neg, n, "val_neg");

  const int nt = resolve_threads(cfg.threads);
  const PairList& P = bundle.train_pos;
  // Hot loops probe the forbidden set once per sampling attempt; a dense
  // bitmap (n*n bits) beats hashing whenever it fits. 32768^2 bits = 128 MB.
  const bool use_dense = n <= 32768;
  const std::optional<DensePairSet> dense =
      use_dense ? std::optional<DensePairSet>(std::in_place, P, n) : std::nullopt;
  const PairSet sparse = use_dense ? PairSet() : PairSet(P);

  BitMatrix B(n, cfg.d);
  TrainReport report;
  report.best_embedding = B;
  report.best_f1 = -1.0;

  GradientWorkspace ws(nt, n, cfg.d);
  ProbMatrix probs;
  std::vector<double> f1_history;
  const std::size_t width = static_cast<std::size_t>(cfg.early_stop_width);

  // Orphaned worksharing: the omp for binds to the caller's parallel region.
  // zg must be the caller's reduction-private copy, not the shared variable.
  // pair_key reuse makes the per-attempt cost one hash round instead of five.
  const auto negative_pass = [&](std::int64_t& zg, std::int64_t* grad,
                                 std::uint64_t epoch_key, const auto& forbidden) {
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < P.size(); ++i) {
      const std::uint64_t pair_key = rng::combine(epoch_key, i);
      for (int s = 0; s < cfg.n_minus; ++s)
        if (auto cand = detail::sample_negative_slot_keyed(
                pair_key, static_cast<std::uint64_t>(s), cfg.n_minus, P[i], n,
                forbidden))
          zg += accumulate_negative(grad, B, *cand, cfg.beta);
    }
  };

  for (std::int64_t t = 1; t <= cfg.max_epochs; ++t) {
    const auto t0 = std::chrono::steady_clock::now();
    ws.reset();
    std::int64_t violations = 0;
    std::int64_t zero_good = 0;
    const std::uint64_t epoch_key =
        rng::key(cfg.seed, rng::Stream::kNegatives, static_cast<std::uint64_t>(t));

    // Fused pass: positive gradient, then freshly sampled negatives straight
    // into the gradient, never materialized. Per-thread partial matrices and
    // counter-keyed sampling keep the result independent of the schedule.
#pragma omp parallel num_threads(nt) reduction(+ : violations, zero_good)
    {
      std::int64_t* grad = ws.partials[this_thread_id()].data();
#pragma omp for schedule(static) nowait
      for (std::size_t i = 0; i < P.size(); ++i)
        violations += accumulate_positive(grad, B, P[i], cfg.alpha);
      if (dense)
        negative_pass(zero_good, grad, epoch_key, *dense);
      else
        negative_pass(zero_good, grad, epoch_key, sparse);
    }
    ws.merge(nt);

    EpochRecord rec;
    rec.epoch = t;
    rec.loss_p = cfg.alpha * violations;
    rec.loss_n = cfg.beta * zero_good;

    probs = flip_probabilities(ws.delta, cfg.lr, cfg.bias);
    rec.bits_flipped = apply_flips(B, probs, cfg.seed, static_cast<std::uint64_t>(t),
                                   cfg.threads);

    bool stop = false;
    if (t % cfg.eval_every == 0 || t == cfg.max_epochs) {
      const Confusion c = evaluate_pairs(B, bundle.val_pos, bundle.val_neg,
                                         cfg.threads);
      const double f = f1(c);
      rec.val_f1 = f;
      if (f > report.best_f1) {
        report.best_f1 = f;
        report.best_embedding = B;
      }
      f1_history.push_back(f);
      if (f1_history.size() >= 2 * width) {
        const std::size_t end = f1_history.size();
        if (mean(f1_history, end - 2 * width, end - width) >=
            mean(f1_history, end - width, end))
          stop = true;
      }
    }

    rec.elapsed_us = std::chrono::duration_cast<std::chrono::microseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    report.history.push_back(rec);
    if (sink) sink(rec);
    report.stopped_epoch = t;
    if (stop) break;
  }
  return report;
}

}  // namespace binder
