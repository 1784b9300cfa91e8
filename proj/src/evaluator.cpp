#include "binder/evaluator.hpp"

#include <algorithm>

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

// Containment check on raw rows; padding zero makes masking unnecessary.
inline bool contained(std::span<const std::uint64_t> a,
                      std::span<const std::uint64_t> b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (~a[k] & b[k]) return false;
  return true;
}

}  // namespace

Confusion evaluate_pairs(const BitMatrix& B, const PairList& positives,
                         const PairList& negatives, int threads) {
  const int nt = resolve_threads(threads);
  std::int64_t tp = 0, fn = 0, fp = 0, tn = 0;
#pragma omp parallel for schedule(static) num_threads(nt) reduction(+ : tp, fn)
  for (std::size_t i = 0; i < positives.size(); ++i) {
    const Pair p = positives[i];
    if (p.hypo != p.hyper && contained(B.row(p.hypo), B.row(p.hyper)))
      ++tp;
    else
      ++fn;
  }
#pragma omp parallel for schedule(static) num_threads(nt) reduction(+ : fp, tn)
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    const Pair p = negatives[i];
    if (p.hypo != p.hyper && contained(B.row(p.hypo), B.row(p.hyper)))
      ++fp;
    else
      ++tn;
  }
  return {tp, fp, fn, tn};
}

Confusion evaluate_full_adjacency(const BitMatrix& B, const PairList& closure,
                                  int threads) {
  const std::size_t n = B.n();
  // Closure pairs grouped by hyponym for O(1) label lookups per row sweep.
  std::vector<std::uint32_t> offsets(n + 1, 0);
  for (Pair p : closure) ++offsets[p.hypo + 1];
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  std::vector<std::uint32_t> targets(closure.size());
  {
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (Pair p : closure) targets[cursor[p.hypo]++] = p.hyper;
  }

  const int nt = resolve_threads(threads);
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
#pragma omp parallel num_threads(nt) reduction(+ : tp, fp, fn, tn)
  {
    std::vector<char> is_pos(n, 0);
#pragma omp for schedule(dynamic, 64)
    for (std::size_t a = 0; a < n; ++a) {
      for (std::uint32_t k = offsets[a]; k < offsets[a + 1]; ++k)
        is_pos[targets[k]] = 1;
      const auto ra = B.row(a);
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        const bool pred = contained(ra, B.row(b));
        if (is_pos[b])
          pred ? ++tp : ++fn;
        else
          pred ? ++fp : ++tn;
      }
      for (std::uint32_t k = offsets[a]; k < offsets[a + 1]; ++k)
        is_pos[targets[k]] = 0;
    }
  }
  return {tp, fp, fn, tn};
}

double f1(const Confusion& c) {
  const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
  return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / denom;
}

double precision(const Confusion& c) {
  const double denom = static_cast<double>(c.tp + c.fp);
  return denom == 0.0 ? 0.0 : static_cast<double>(c.tp) / denom;
}

double recall(const Confusion& c) {
  const double denom = static_cast<double>(c.tp + c.fn);
  return denom == 0.0 ? 0.0 : static_cast<double>(c.tp) / denom;
}

}  // namespace binder
