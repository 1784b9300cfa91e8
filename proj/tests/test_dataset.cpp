#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "binder/dataset.hpp"
#include "support/oracles.hpp"

using namespace binder;

namespace {

ParsedEdges parse(const char* text) {
  std::istringstream in(text);
  return parse_edges(in);
}

bool is_sorted_unique(const PairList& v) {
  return std::is_sorted(v.begin(), v.end()) &&
         std::adjacent_find(v.begin(), v.end()) == v.end();
}

PairList sorted_union(PairList a, const PairList& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("parse_edges basic transcription") {
  const auto [vocab, pairs] = parse("a\tb\nb\tc\n");
  REQUIRE(vocab.size() == 3);
  CHECK(vocab.at("a") == 0);
  CHECK(vocab.at("b") == 1);
  CHECK(vocab.at("c") == 2);
  CHECK(pairs == PairList{{0, 1}, {1, 2}});
}

TEST_CASE("parse_edges drops reflexive edges but keeps the concept") {
  const auto [vocab, pairs] = parse("a\ta\n");
  CHECK(vocab.size() == 1);
  CHECK(pairs.empty());
}

TEST_CASE("parse_edges deduplicates, skips comments and blanks, strips CR") {
  const auto [vocab, pairs] = parse("# header\na\tb\r\n\na\tb\nb\tc\n");
  CHECK(vocab.size() == 3);
  CHECK(pairs == PairList{{0, 1}, {1, 2}});
}

TEST_CASE("parse_edges rejects malformed lines with the line number") {
  std::istringstream in("a\tb\nbad line\n");
  CHECK_THROWS_WITH_AS(parse_edges(in), doctest::Contains("line 2"), DataError);
  std::istringstream three("a\tb\tc\n");
  CHECK_THROWS_AS(parse_edges(three), DataError);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_edges(empty), DataError);
  std::istringstream only_comments("# nothing\n");
  CHECK_THROWS_AS(parse_edges(only_comments), DataError);
}

TEST_CASE("transitive_closure composes a chain") {
  const PairList chain{{0, 1}, {1, 2}};
  CHECK(transitive_closure(chain, 3) == PairList{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("transitive_closure is idempotent") {
  for (std::uint64_t inst = 0; inst < 30; ++inst) {
    const auto dag = oracle::random_dag(21, inst, 30);
    const PairList once = transitive_closure(dag.edges, dag.n);
    CHECK(transitive_closure(once, dag.n) == once);
  }
}

TEST_CASE("transitive_closure matches BFS reachability on random DAGs") {
  for (std::uint64_t inst = 0; inst < 60; ++inst) {
    const auto dag = oracle::random_dag(22, inst, 40);
    REQUIRE(transitive_closure(dag.edges, dag.n) == oracle::bfs_closure(dag.edges, dag.n));
  }
}

TEST_CASE("transitive_closure output is canonically sorted") {
  const auto dag = oracle::random_dag(23, 0, 40);
  CHECK(is_sorted_unique(transitive_closure(dag.edges, dag.n)));
}

TEST_CASE("transitive_closure detects cycles and names a member") {
  const PairList cyc{{0, 1}, {1, 2}, {2, 0}};
  CHECK_THROWS_AS(transitive_closure(cyc, 3), CycleError);
  try {
    transitive_closure(cyc, 3);
  } catch (const CycleError& e) {
    CHECK(e.member < 3);
  }
  const PairList self_via_two{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(transitive_closure(self_via_two, 2), CycleError);
}

TEST_CASE("classify_edges on a triangle closure") {
  const PairList closure{{0, 1}, {0, 2}, {1, 2}};
  const auto classes = classify_edges(closure, 3);
  CHECK(classes.direct == PairList{{0, 1}, {1, 2}});
  CHECK(classes.indirect == PairList{{0, 2}});
}

TEST_CASE("classify_edges of a tree closure recovers the parent edges") {
  // 0 -> 2, 1 -> 2, 2 -> 3 (two leaves, a middle node, a root)
  const PairList parents{{0, 2}, {1, 2}, {2, 3}};
  const auto closure = transitive_closure(parents, 4);
  const auto classes = classify_edges(closure, 4);
  CHECK(classes.direct == parents);
}

TEST_CASE("classify_edges rejects non-closed input") {
  CHECK_THROWS_AS(classify_edges(PairList{{0, 1}, {1, 2}}, 3), DataError);
}

TEST_CASE("direct edges regenerate the closure on random DAGs") {
  for (std::uint64_t inst = 0; inst < 60; ++inst) {
    const auto dag = oracle::random_dag(24, inst, 40);
    const PairList closure = transitive_closure(dag.edges, dag.n);
    const auto classes = classify_edges(closure, dag.n);
    CHECK(sorted_union(classes.direct, classes.indirect) == closure);
    CHECK(transitive_closure(classes.direct, dag.n) == closure);
  }
}

TEST_CASE("drop_root removes a star center") {
  const auto [vocab, pairs] = parse("a\troot\nb\troot\nc\troot\n");
  const auto dropped = drop_root(vocab, pairs, "root");
  CHECK(dropped.vocab.size() == 3);
  CHECK(dropped.pairs.empty());
  CHECK(dropped.vocab.find("root") == std::nullopt);
  CHECK(dropped.vocab.at("c") == 2);  // ids recompacted in appearance order
}

TEST_CASE("drop_root can keep the node itself") {
  const auto [vocab, pairs] = parse("a\troot\na\tb\n");
  const auto kept = drop_root(vocab, pairs, "root", /*keep_node=*/true);
  CHECK(kept.vocab.size() == 3);
  CHECK(kept.pairs.size() == 1);
  CHECK(kept.vocab.find("root").has_value());
}

TEST_CASE("drop_root on an unknown name") {
  const auto [vocab, pairs] = parse("a\tb\n");
  CHECK_THROWS_AS(drop_root(vocab, pairs, "nope"), DataError);
}

TEST_CASE("make_split link prediction on the smallest closure") {
  const PairList closure{{0, 1}, {0, 2}, {1, 2}};
  const auto b = make_split(closure, 3, SplitMode::kLinkPrediction, 0, 10, 7);
  CHECK(b.train_pos == PairList{{0, 1}, {1, 2}});
  // The lone indirect edge lands in val or test; the other side is empty.
  const auto held = sorted_union(b.val_pos, b.test_pos);
  CHECK(held == PairList{{0, 2}});
  CHECK(b.val_neg.size() == 10 * b.val_pos.size());
  CHECK(b.test_neg.size() == 10 * b.test_pos.size());
}

TEST_CASE("make_split representation mode freezes the closure") {
  const auto dag = oracle::random_dag(25, 3, 30);
  const PairList closure = transitive_closure(dag.edges, dag.n);
  const auto b = make_split(closure, dag.n, SplitMode::kRepresentation, 100, 10, 9);
  CHECK(b.train_pos == closure);
  CHECK(b.val_pos == closure);
  CHECK(b.test_pos.empty());
  CHECK(b.test_neg.empty());
  CHECK(b.val_neg.size() == 10 * closure.size());
}

TEST_CASE("make_split partitions the closure in link-prediction mode") {
  for (int tc : {0, 10, 25, 50}) {
    const auto dag = oracle::random_dag(26, tc, 40);
    const PairList closure = transitive_closure(dag.edges, dag.n);
    const auto b = make_split(closure, dag.n, SplitMode::kLinkPrediction, tc, 10, 11);
    PairList all = sorted_union(sorted_union(b.train_pos, b.val_pos), b.test_pos);
    CHECK(all == closure);  // partition: union is the closure, sizes add up
    CHECK(b.train_pos.size() + b.val_pos.size() + b.test_pos.size() == closure.size());
    const auto classes = classify_edges(closure, dag.n);
    const std::size_t expect_train =
        classes.direct.size() + classes.indirect.size() * tc / 100;
    CHECK(b.train_pos.size() == expect_train);
    const std::size_t leftover = closure.size() - expect_train;
    CHECK(b.val_pos.size() == leftover / 2);  // val gets the floor half
    CHECK(b.test_pos.size() == leftover - leftover / 2);
  }
}

TEST_CASE("make_split negatives avoid the closure and respect the ratio") {
  const auto dag = oracle::random_dag(27, 1, 40);
  const PairList closure = transitive_closure(dag.edges, dag.n);
  const auto b = make_split(closure, dag.n, SplitMode::kLinkPrediction, 25, 10, 13);
  const PairSet closure_set(closure);
  for (Pair p : b.val_neg) {
    CHECK_FALSE(closure_set.contains(p));
    CHECK(p.hypo != p.hyper);
  }
  for (Pair p : b.test_neg) CHECK_FALSE(closure_set.contains(p));
  CHECK(b.val_neg.size() == 10 * b.val_pos.size());
  CHECK(b.test_neg.size() == 10 * b.test_pos.size());
}

TEST_CASE("make_split is deterministic in the seed") {
  const auto dag = oracle::random_dag(28, 2, 40);
  const PairList closure = transitive_closure(dag.edges, dag.n);
  const auto b1 = make_split(closure, dag.n, SplitMode::kLinkPrediction, 50, 10, 17);
  const auto b2 = make_split(closure, dag.n, SplitMode::kLinkPrediction, 50, 10, 17);
  CHECK(b1.train_pos == b2.train_pos);
  CHECK(b1.val_pos == b2.val_pos);
  CHECK(b1.test_pos == b2.test_pos);
  CHECK(b1.val_neg == b2.val_neg);
  CHECK(b1.test_neg == b2.test_neg);
  const auto b3 = make_split(closure, dag.n, SplitMode::kLinkPrediction, 50, 10, 18);
  CHECK(b1.train_pos != b3.train_pos);  // a different seed shuffles differently
}

TEST_CASE("make_split validates mode and tc_percent") {
  const PairList closure{{0, 1}, {0, 2}, {1, 2}};
  CHECK_THROWS_AS(make_split(closure, 3, SplitMode::kLinkPrediction, 100, 10, 1),
                  ConfigError);
  CHECK_THROWS_AS(make_split(closure, 3, SplitMode::kLinkPrediction, 7, 10, 1),
                  ConfigError);
  CHECK_THROWS_AS(make_split(closure, 3, SplitMode::kRepresentation, 0, 10, 1),
                  ConfigError);
  CHECK_THROWS_AS(make_split(closure, 3, SplitMode::kRepresentation, 100, -1, 1),
                  ConfigError);
  CHECK_THROWS_AS(make_split(PairList{{0, 1}, {1, 2}}, 3, SplitMode::kRepresentation,
                             100, 10, 1),
                  DataError);  // not transitively closed
}

TEST_CASE("split_mode string round trip") {
  CHECK(to_string(SplitMode::kRepresentation) == "repr");
  CHECK(to_string(SplitMode::kLinkPrediction) == "lp");
  CHECK(split_mode_from_string("repr") == SplitMode::kRepresentation);
  CHECK(split_mode_from_string("representation") == SplitMode::kRepresentation);
  CHECK(split_mode_from_string("lp") == SplitMode::kLinkPrediction);
  CHECK(split_mode_from_string("link-prediction") == SplitMode::kLinkPrediction);
  CHECK_THROWS_AS(split_mode_from_string("banana"), ConfigError);
}

TEST_CASE("sample_negatives forced corruption") {
  // P = {(a,b)} over {a,b,c}: the only legal left corruption is (c,b) and the
  // only legal right corruption is (a,c).
  const PairList positives{{0, 1}};
  const PairSet forbidden(positives);
  const PairList negs = sample_negatives(positives, forbidden, 3, 2, 5, 0);
  REQUIRE(negs.size() == 2);
  CHECK(negs[0] == Pair{2, 1});
  CHECK(negs[1] == Pair{0, 2});
}

TEST_CASE("sample_negatives emits n_minus corruptions per positive, half each side") {
  const auto dag = oracle::random_dag(29, 4, 25);
  const PairList closure = transitive_closure(dag.edges, dag.n);
  const PairSet forbidden(closure);
  const int n_minus = 8;
  const PairList negs = sample_negatives(closure, forbidden, dag.n, n_minus, 5, 3);
  // On a sparse graph no slot exhausts its 100 retries, so nothing is skipped
  // and slot k = i * n_minus + s corrupts positive i.
  REQUIRE(negs.size() == closure.size() * n_minus);
  for (std::size_t i = 0; i < closure.size(); ++i) {
    const Pair pos = closure[i];
    for (int s = 0; s < n_minus; ++s) {
      const Pair got = negs[i * n_minus + s];
      CHECK_FALSE(forbidden.contains(got));
      CHECK(got.hypo != got.hyper);
      if (s < n_minus / 2) {  // hyponym replaced
        CHECK(got.hyper == pos.hyper);
        CHECK(got.hypo != pos.hypo);
      } else {  // hypernym replaced
        CHECK(got.hypo == pos.hypo);
        CHECK(got.hyper != pos.hyper);
      }
    }
  }
}

TEST_CASE("sample_negatives is a pure function of seed and epoch") {
  const PairList positives{{0, 1}, {2, 3}, {1, 3}};
  const PairSet forbidden(positives);
  const auto a = sample_negatives(positives, forbidden, 9, 4, 77, 12);
  const auto b = sample_negatives(positives, forbidden, 9, 4, 77, 12);
  CHECK(a == b);
  const auto c = sample_negatives(positives, forbidden, 9, 4, 77, 13);
  CHECK(a != c);  // a fresh epoch draws fresh negatives
}

TEST_CASE("sample_negatives skips exhausted slots") {
  // Forbid every ordered pair over a 2-concept vocabulary: nothing survives.
  PairSet all;
  all.insert({0, 1});
  all.insert({1, 0});
  const PairList out = sample_negatives(PairList{{0, 1}}, all, 2, 2, 1, 0);
  CHECK(out.empty());
}

TEST_CASE("sample_negatives validates arguments") {
  const PairList positives{{0, 1}};
  const PairSet forbidden(positives);
  CHECK_THROWS_AS(sample_negatives(positives, forbidden, 3, 3, 1, 0), ConfigError);
  CHECK_THROWS_AS(sample_negatives(positives, forbidden, 3, 0, 1, 0), ConfigError);
  CHECK_THROWS_AS(sample_negatives(positives, forbidden, 1, 2, 1, 0), ConfigError);
}

TEST_CASE("sample_negatives_into matches the allocating variant") {
  const PairList positives{{0, 1}, {2, 3}};
  const PairSet forbidden(positives);
  PairList buf{{9, 9}};  // stale content must be cleared
  sample_negatives_into(positives, forbidden, 7, 4, 3, 2, buf);
  CHECK(buf == sample_negatives(positives, forbidden, 7, 4, 3, 2));
}

TEST_CASE("DensePairSet mirrors PairSet membership") {
  const std::size_t n = 37;
  PairList members;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::uint64_t h = rng::key(5150, rng::Stream::kTest, i);
    members.push_back({static_cast<std::uint32_t>(rng::bounded(h, n)),
                       static_cast<std::uint32_t>(rng::bounded(rng::mix64(h), n))});
  }
  const PairSet sparse(members);
  const DensePairSet dense(members, n);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      REQUIRE(dense.contains({a, b}) == sparse.contains({a, b}));
}

TEST_CASE("prefix-keyed slot sampler matches the full-key path") {
  const PairList positives{{0, 1}, {2, 3}, {1, 3}, {4, 0}};
  const PairSet forbidden(positives);
  const DensePairSet dense(positives, 9);
  for (std::uint64_t epoch = 1; epoch <= 3; ++epoch) {
    const std::uint64_t epoch_key = rng::key(77, rng::Stream::kNegatives, epoch);
    for (std::uint64_t i = 0; i < positives.size(); ++i) {
      const std::uint64_t pair_key = rng::combine(epoch_key, i);
      for (std::uint64_t s = 0; s < 6; ++s) {
        const auto full = detail::sample_negative_slot(77, epoch, i, s, 6,
                                                       positives[i], 9, forbidden);
        CHECK(detail::sample_negative_slot_keyed(pair_key, s, 6, positives[i], 9,
                                                 forbidden) == full);
        CHECK(detail::sample_negative_slot_keyed(pair_key, s, 6, positives[i], 9,
                                                 dense) == full);
      }
    }
  }
}

}  // TEST_SUITE
