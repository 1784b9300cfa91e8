#include "binder/dataset.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <string>

namespace binder {
namespace {

// Sorted, deduplicated copy; canonical (hypo, hyper) order.
PairList canonical(PairList pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

// Per-node sorted hypernym (ancestor) lists from a closed pair set.
std::vector<std::vector<std::uint32_t>> ancestor_lists(const PairList& closure,
                                                       std::size_t n) {
  std::vector<std::vector<std::uint32_t>> anc(n);
  for (Pair p : closure) anc[p.hypo].push_back(p.hyper);
  for (auto& v : anc) std::sort(v.begin(), v.end());
  return anc;
}

bool sorted_contains(const std::vector<std::uint32_t>& v, std::uint32_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

// Uniform ordered pair (x, y), x != y, rejected against the closure. Repeats
// across draws are allowed; the draw index i keeps every draw independent.
PairList sample_eval_negatives(std::size_t count, const PairSet& closure_set,
                               std::size_t n, std::uint64_t seed, std::uint64_t tag) {
  PairList out;
  out.reserve(count);
  if (count == 0) return out;
  if (n < 2) throw DataError("cannot sample negatives from a vocabulary of size 1");
  constexpr std::uint64_t kMaxAttempts = 10000;
  for (std::size_t i = 0; i < count; ++i) {
    bool placed = false;
    for (std::uint64_t t = 0; t < kMaxAttempts; ++t) {
      const std::uint64_t h1 = rng::key(seed, rng::Stream::kSplit, tag, i, t, 0);
      const std::uint64_t h2 = rng::key(seed, rng::Stream::kSplit, tag, i, t, 1);
      const auto x = static_cast<std::uint32_t>(rng::bounded(h1, n));
      auto y = static_cast<std::uint32_t>(rng::bounded(h2, n - 1));
      if (y >= x) ++y;
      const Pair cand{x, y};
      if (closure_set.contains(cand)) continue;
      out.push_back(cand);
      placed = true;
      break;
    }
    if (!placed)
      throw DataError("could not sample enough negative pairs; graph too dense");
  }
  return out;
}

void seeded_shuffle(PairList& v, std::uint64_t seed, std::uint64_t tag) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::uint64_t h = rng::key(seed, rng::Stream::kSplit, tag, i);
    std::swap(v[i - 1], v[rng::bounded(h, i)]);
  }
}

}  // namespace

std::string_view to_string(SplitMode mode) {
  return mode == SplitMode::kRepresentation ? "repr" : "lp";
}

SplitMode split_mode_from_string(std::string_view s) {
  if (s == "repr" || s == "representation") return SplitMode::kRepresentation;
  if (s == "lp" || s == "link-prediction") return SplitMode::kLinkPrediction;
  throw ConfigError("unknown split mode: " + std::string(s));
}

ParsedEdges parse_edges(std::istream& in) {
  ParsedEdges out;
  PairSet seen;
  std::string line;
  std::size_t line_no = 0;
  std::size_t data_lines = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos)
      throw DataError("line " + std::to_string(line_no) +
                      ": expected exactly two tab-separated fields");
    ++data_lines;
    const std::uint32_t child = out.vocab.add(std::string_view(line).substr(0, tab));
    const std::uint32_t parent = out.vocab.add(std::string_view(line).substr(tab + 1));
    if (child == parent) continue;  // reflexive edges dropped
    const Pair p{child, parent};
    if (seen.contains(p)) continue;
    seen.insert(p);
    out.pairs.push_back(p);
  }
  if (data_lines == 0) throw DataError("empty edge list");
  return out;
}

PairList transitive_closure(const PairList& pairs, std::size_t n) {
  const PairList edges = canonical(pairs);
  std::vector<std::vector<std::uint32_t>> parents(n), children(n);
  std::vector<std::uint32_t> deps(n, 0);
  for (Pair p : edges) {
    if (p.hypo >= n || p.hyper >= n) throw IndexError("pair id out of range");
    if (p.hypo == p.hyper) throw CycleError(p.hypo, "reflexive edge forms a cycle");
    parents[p.hypo].push_back(p.hyper);
    children[p.hyper].push_back(p.hypo);
    ++deps[p.hypo];
  }

  // Kahn order: a node is processed once all of its hypernyms are done.
  std::deque<std::uint32_t> ready;
  for (std::uint32_t v = 0; v < n; ++v)
    if (deps[v] == 0) ready.push_back(v);

  std::vector<std::vector<std::uint32_t>> anc(n);
  std::size_t processed = 0;
  std::vector<std::uint32_t> merged;
  while (!ready.empty()) {
    const std::uint32_t u = ready.front();
    ready.pop_front();
    ++processed;
    for (const std::uint32_t c : children[u])
      if (--deps[c] == 0) {
        merged.clear();
        for (const std::uint32_t p : parents[c]) {
          merged.push_back(p);
          merged.insert(merged.end(), anc[p].begin(), anc[p].end());
        }
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        anc[c] = merged;
        ready.push_back(c);
      }
  }

  if (processed < n) {
    // Some node kept a positive dependency count: walk unprocessed parents
    // until one repeats; that node lies on a cycle.
    std::vector<char> unprocessed(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) unprocessed[v] = deps[v] > 0;
    std::uint32_t start = 0;
    while (!unprocessed[start]) ++start;
    std::vector<char> visited(n, 0);
    std::uint32_t cur = start;
    while (!visited[cur]) {
      visited[cur] = 1;
      for (const std::uint32_t p : parents[cur])
        if (unprocessed[p]) {
          cur = p;
          break;
        }
    }
    throw CycleError(cur, "edge list contains a cycle (concept id " +
                              std::to_string(cur) + ")");
  }

  PairList out;
  std::size_t total = 0;
  for (const auto& a : anc) total += a.size();
  out.reserve(total);
  for (std::uint32_t v = 0; v < n; ++v)
    for (const std::uint32_t u : anc[v]) out.push_back({v, u});
  // anc lists are sorted and v ascends, so the output is already canonical.
  return out;
}

EdgeClasses classify_edges(const PairList& closure, std::size_t n) {
  const PairList input = canonical(closure);
  if (transitive_closure(input, n) != input)
    throw DataError("classify_edges: input is not transitively closed");

  const auto anc = ancestor_lists(input, n);
  EdgeClasses out;
  for (Pair p : input) {
    bool direct = true;
    for (const std::uint32_t c : anc[p.hypo]) {
      if (c == p.hyper) continue;
      if (sorted_contains(anc[c], p.hyper)) {
        direct = false;
        break;
      }
    }
    (direct ? out.direct : out.indirect).push_back(p);
  }
  return out;
}

DropRootResult drop_root(const Vocabulary& vocab, const PairList& pairs,
                         std::string_view root_name, bool keep_node) {
  const std::uint32_t root = vocab.at(root_name);
  DropRootResult out;
  if (keep_node) {
    out.vocab = vocab;
    for (Pair p : pairs)
      if (p.hypo != root && p.hyper != root) out.pairs.push_back(p);
    return out;
  }
  std::vector<std::uint32_t> remap(vocab.size());
  for (std::uint32_t id = 0; id < vocab.size(); ++id) {
    if (id == root) continue;
    remap[id] = out.vocab.add(vocab.name(id));
  }
  for (Pair p : pairs)
    if (p.hypo != root && p.hyper != root)
      out.pairs.push_back({remap[p.hypo], remap[p.hyper]});
  return out;
}

SplitBundle make_split(const PairList& closure, std::size_t n, SplitMode mode,
                       int tc_percent, int neg_ratio, std::uint64_t seed) {
  if (neg_ratio < 1) throw ConfigError("neg_ratio must be >= 1");
  const PairList closed = canonical(closure);
  const PairSet closure_set(closed);

  SplitBundle b;
  b.mode = mode;
  b.tc_percent = tc_percent;
  b.neg_ratio = neg_ratio;
  b.split_seed = seed;

  if (mode == SplitMode::kRepresentation) {
    if (tc_percent != 100)
      throw ConfigError("representation mode requires tc_percent = 100");
    if (transitive_closure(closed, n) != closed)
      throw DataError("make_split: input is not transitively closed");
    b.train_pos = closed;
    b.val_pos = closed;
    b.val_neg = sample_eval_negatives(closed.size() * neg_ratio, closure_set, n,
                                      seed, /*tag=*/2);
    return b;
  }

  if (tc_percent != 0 && tc_percent != 10 && tc_percent != 25 && tc_percent != 50)
    throw ConfigError("link-prediction tc_percent must be one of {0,10,25,50}");

  EdgeClasses classes = classify_edges(closed, n);
  seeded_shuffle(classes.indirect, seed, /*tag=*/1);

  const std::size_t take = classes.indirect.size() * tc_percent / 100;
  b.train_pos = classes.direct;
  b.train_pos.insert(b.train_pos.end(), classes.indirect.begin(),
                     classes.indirect.begin() + take);
  std::sort(b.train_pos.begin(), b.train_pos.end());

  const std::size_t rest = classes.indirect.size() - take;
  const std::size_t val_count = rest / 2;
  b.val_pos.assign(classes.indirect.begin() + take,
                   classes.indirect.begin() + take + val_count);
  b.test_pos.assign(classes.indirect.begin() + take + val_count,
                    classes.indirect.end());
  std::sort(b.val_pos.begin(), b.val_pos.end());
  std::sort(b.test_pos.begin(), b.test_pos.end());

  b.val_neg = sample_eval_negatives(b.val_pos.size() * neg_ratio, closure_set, n,
                                    seed, /*tag=*/2);
  b.test_neg = sample_eval_negatives(b.test_pos.size() * neg_ratio, closure_set, n,
                                     seed, /*tag=*/3);
  return b;
}

void sample_negatives_into(const PairList& positives, const PairSet& forbidden,
                           std::size_t vocab_size, int n_minus, std::uint64_t seed,
                           std::uint64_t epoch, PairList& out) {
  if (n_minus < 2 || n_minus % 2 != 0)
    throw ConfigError("n_minus must be even and >= 2");
  if (vocab_size < 2)
    throw ConfigError("cannot sample negatives from a vocabulary of size 1");
  out.clear();
  out.reserve(positives.size() * static_cast<std::size_t>(n_minus));
  for (std::size_t i = 0; i < positives.size(); ++i)
    for (int s = 0; s < n_minus; ++s)
      if (auto cand = detail::sample_negative_slot(seed, epoch, i, s, n_minus,
                                                   positives[i], vocab_size, forbidden))
        out.push_back(*cand);
}

PairList sample_negatives(const PairList& positives, const PairSet& forbidden,
                          std::size_t vocab_size, int n_minus, std::uint64_t seed,
                          std::uint64_t epoch) {
  PairList out;
  sample_negatives_into(positives, forbidden, vocab_size, n_minus, seed, epoch, out);
  return out;
}

}  // namespace binder
