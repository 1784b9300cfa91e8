#include "taxonomy_gen.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace binder::bench {
namespace {

using rng::bounded;
using rng::key;
using rng::Stream;

std::string node_name(char prefix, std::uint32_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%05u", prefix, i);
  return buf;
}

// Ancestor sets recomputed in index order; parent indices are always smaller,
// so a single forward pass suffices.
std::vector<std::vector<std::uint32_t>> ancestors(
    const std::vector<std::vector<std::uint32_t>>& parents) {
  const std::size_t n = parents.size();
  std::vector<std::vector<std::uint32_t>> anc(n);
  std::vector<std::uint32_t> merged;
  for (std::uint32_t v = 0; v < n; ++v) {
    merged.clear();
    for (const std::uint32_t p : parents[v]) {
      merged.push_back(p);
      merged.insert(merged.end(), anc[p].begin(), anc[p].end());
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    anc[v] = merged;
  }
  return anc;
}

bool in_sorted(const std::vector<std::uint32_t>& v, std::uint32_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace

Taxonomy gen_animals_like(std::uint64_t seed) {
  constexpr std::uint32_t kChains = 293;
  constexpr std::uint32_t kLongChains = 207;  // rank depth 14; the rest run 13
  constexpr std::uint32_t kCrossEdges = 35;
  constexpr std::uint32_t kNodes = 4017;  // 1 + 207*14 + 86*13

  // Root plus a forest of single-child rank chains. Every edge is trivially
  // direct, and each node's ancestor set is its own spine prefix.
  std::vector<std::vector<std::uint32_t>> parents(kNodes);
  std::vector<std::uint32_t> chain_of(kNodes, ~0u);
  std::vector<std::uint32_t> bottoms;
  std::uint32_t id = 1;
  for (std::uint32_t c = 0; c < kChains; ++c) {
    const std::uint32_t len = c < kLongChains ? 14 : 13;
    std::uint32_t prev = 0;
    for (std::uint32_t d = 1; d <= len; ++d, ++id) {
      parents[id].push_back(prev);
      chain_of[id] = c;
      prev = id;
    }
    bottoms.push_back(prev);
  }

  // Cross edges: a chain bottom gains a parent inside another chain's spine
  // (at most two, all from distinct chains). The new parent's ancestors stay
  // disjoint from every existing parent's spine, so all edges remain direct.
  std::vector<std::uint32_t> extra(kNodes, 0);
  std::uint32_t added = 0;
  for (std::uint64_t attempt = 0; added < kCrossEdges; ++attempt) {
    const std::uint64_t h1 = key(seed, Stream::kGenerator, 1, attempt, 0);
    const std::uint64_t h2 = key(seed, Stream::kGenerator, 1, attempt, 1);
    const std::uint32_t v = bottoms[bounded(h1, bottoms.size())];
    const auto u = static_cast<std::uint32_t>(1 + bounded(h2, kNodes - 1));
    if (chain_of[u] == chain_of[v]) continue;
    bool dup = extra[v] >= 2;
    for (std::size_t i = 1; !dup && i < parents[v].size(); ++i)
      dup = chain_of[parents[v][i]] == chain_of[u];
    if (dup) continue;
    // u must be a spine node, not another crossed bottom
    bool is_bottom = false;
    for (const std::uint32_t b : bottoms) is_bottom |= b == u;
    if (is_bottom) continue;
    parents[v].push_back(u);
    ++extra[v];
    ++added;
  }

  Taxonomy t;
  for (std::uint32_t i = 0; i < kNodes; ++i) t.vocab.add(node_name('a', i));
  for (std::uint32_t v = 0; v < kNodes; ++v)
    for (const std::uint32_t p : parents[v]) t.direct.push_back({v, p});
  std::sort(t.direct.begin(), t.direct.end());
  return t;
}

Taxonomy gen_medical_like(std::uint64_t seed) {
  constexpr std::uint32_t kRoots = 60;
  constexpr std::uint32_t kMid = 874;
  constexpr std::uint32_t kLeaves = 466;
  constexpr std::uint32_t kNodes = kRoots + kMid + kLeaves;

  // Parent count per non-root node: 1, 2, or 3, mean just above 1.95.
  const auto draw_parent_count = [&](std::uint32_t v) -> std::uint32_t {
    const double u = rng::to_unit(key(seed, Stream::kGenerator, 3, v));
    if (u < 0.30) return 1;
    if (u < 0.75) return 2;
    return 3;
  };

  std::vector<std::vector<std::uint32_t>> parents(kNodes);
  const auto pick_parents = [&](std::uint32_t v, std::uint32_t lo, std::uint32_t hi) {
    const std::uint32_t want = std::min(draw_parent_count(v), hi - lo);
    std::uint64_t attempt = 0;
    while (parents[v].size() < want) {
      const std::uint64_t h = key(seed, Stream::kGenerator, 4, v, attempt++);
      const auto p = static_cast<std::uint32_t>(lo + bounded(h, hi - lo));
      if (std::find(parents[v].begin(), parents[v].end(), p) == parents[v].end())
        parents[v].push_back(p);
    }
  };

  for (std::uint32_t v = kRoots; v < kRoots + kMid; ++v) pick_parents(v, 0, kRoots);
  for (std::uint32_t v = kRoots + kMid; v < kNodes; ++v)
    pick_parents(v, kRoots, kRoots + kMid);

  Taxonomy t;
  for (std::uint32_t i = 0; i < kNodes; ++i) t.vocab.add(node_name('m', i));
  for (std::uint32_t v = 0; v < kNodes; ++v)
    for (const std::uint32_t p : parents[v]) t.direct.push_back({v, p});
  std::sort(t.direct.begin(), t.direct.end());
  return t;
}

}  // namespace binder::bench
