// Command-line front end: closure, split, train, eval, query.
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "binder/algebra.hpp"
#include "binder/core.hpp"
#include "binder/dataset.hpp"
#include "binder/evaluator.hpp"
#include "binder/io.hpp"
#include "binder/optimizer.hpp"

#ifndef BINDER_VERSION
#define BINDER_VERSION "0.0.0"
#endif

namespace {

using namespace binder;
namespace fs = std::filesystem;

std::string render_bits(const BitRow& row) {
  std::string s(row.d, '0');
  for (std::size_t j = 0; j < row.d; ++j)
    if (row.bit(j)) s[j] = '1';
  return s;
}

BitRow parse_bits(std::string_view s) {
  BitRow row(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] == '1')
      row.set_bit(j, true);
    else if (s[j] != '0')
      throw DataError("bit pattern may contain only 0 and 1");
  }
  return row;
}

// A query expression is a concept name when one matches, otherwise a literal
// bit pattern of length d.
BitRow resolve_expr(const LoadedModel& m, const std::string& expr) {
  if (auto id = m.vocab.find(expr)) return m.matrix.row_copy(*id);
  const bool literal = !expr.empty() &&
                       expr.find_first_not_of("01") == std::string::npos;
  if (literal) {
    if (expr.size() != m.matrix.d())
      throw DataError("bit pattern length " + std::to_string(expr.size()) +
                      " does not match model dimension " +
                      std::to_string(m.matrix.d()));
    return parse_bits(expr);
  }
  throw DataError("unknown concept name: " + expr);
}

std::vector<std::string> matching_names(const LoadedModel& m, const BitRow& row) {
  std::vector<std::string> out;
  for (std::uint32_t w = 0; w < m.matrix.n(); ++w)
    if (m.matrix.row_copy(w) == row) out.push_back(m.vocab.name(w));
  return out;
}

struct ClosureArgs {
  std::string in, out;
  std::string drop_root_name;
  bool keep_root_node = false;
};

int run_closure(const ClosureArgs& a) {
  std::ifstream in(a.in);
  if (!in) throw DataError("cannot open for reading: " + a.in);
  ParsedEdges parsed = parse_edges(in);
  Vocabulary vocab = std::move(parsed.vocab);
  PairList pairs = std::move(parsed.pairs);
  if (!a.drop_root_name.empty()) {
    DropRootResult r = drop_root(vocab, pairs, a.drop_root_name, a.keep_root_node);
    vocab = std::move(r.vocab);
    pairs = std::move(r.pairs);
  }
  PairList closure;
  try {
    closure = transitive_closure(pairs, vocab.size());
  } catch (const CycleError& e) {
    throw DataError("cycle detected involving '" + vocab.name(e.member) + "'");
  }
  std::ofstream out(a.out);
  if (!out) throw DataError("cannot open for writing: " + a.out);
  for (Pair p : closure)
    out << vocab.name(p.hypo) << '\t' << vocab.name(p.hyper) << '\n';
  if (!out) throw DataError("write failed: " + a.out);
  std::cerr << "closure: " << vocab.size() << " concepts, " << closure.size()
            << " pairs\n";
  return 0;
}

struct SplitArgs {
  std::string closure, out;
  std::string mode = "repr";
  int tc_percent = -1;  // -1: mode default (repr 100, lp 0)
  int neg_ratio = 10;
  std::uint64_t seed = 0;
};

int run_split(const SplitArgs& a) {
  std::ifstream in(a.closure);
  if (!in) throw DataError("cannot open for reading: " + a.closure);
  ParsedEdges parsed = parse_edges(in);
  const SplitMode mode = split_mode_from_string(a.mode);
  int tc = a.tc_percent;
  if (tc < 0) tc = mode == SplitMode::kRepresentation ? 100 : 0;
  SplitBundle bundle =
      make_split(parsed.pairs, parsed.vocab.size(), mode, tc, a.neg_ratio, a.seed);
  save_split(a.out, bundle, parsed.vocab);
  std::cerr << "split: train_pos=" << bundle.train_pos.size()
            << " val_pos=" << bundle.val_pos.size()
            << " val_neg=" << bundle.val_neg.size()
            << " test_pos=" << bundle.test_pos.size()
            << " test_neg=" << bundle.test_neg.size() << '\n';
  return 0;
}

struct TrainArgs {
  std::string split, out, metrics;
  TrainConfig cfg;
  std::int64_t eval_every = 0;  // 0: mode default
};

int run_train(TrainArgs a) {
  LoadedSplit s = load_split(a.split);
  a.cfg.eval_every =
      a.eval_every > 0
          ? a.eval_every
          : (s.bundle.mode == SplitMode::kRepresentation && s.vocab.size() > 1000
                 ? 10
                 : 1);

  std::ofstream metrics_file;
  std::ostream* metrics_out = &std::cout;
  if (!a.metrics.empty()) {
    metrics_file.open(a.metrics);
    if (!metrics_file) throw DataError("cannot open for writing: " + a.metrics);
    metrics_out = &metrics_file;
  }

  const auto t0 = std::chrono::steady_clock::now();
  TrainReport report = train(s.vocab, s.bundle, a.cfg, [&](const EpochRecord& rec) {
    write_metrics_line(*metrics_out, rec);
  });
  const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();

  save_model(a.out, report.best_embedding, s.vocab);

  nlohmann::json split_manifest;
  {
    std::ifstream in(fs::path(a.split) / "manifest.json");
    if (in) in >> split_manifest;
  }
  nlohmann::json manifest{
      {"tool", std::string("binder ") + BINDER_VERSION},
      {"split_dir", a.split},
      {"split_manifest", split_manifest},
      {"config", train_config_json(a.cfg)},
      {"result",
       {{"best_f1", report.best_f1},
        {"stopped_epoch", report.stopped_epoch},
        {"wall_ms", wall_ms}}},
  };
  const fs::path manifest_path = a.out + ".manifest.json";
  std::ofstream mout(manifest_path);
  if (!mout) throw DataError("cannot open for writing: " + manifest_path.string());
  mout << manifest.dump(2) << '\n';

  std::cout << nlohmann::json{{"best_f1", report.best_f1},
                              {"stopped_epoch", report.stopped_epoch},
                              {"wall_ms", wall_ms}}
                   .dump()
            << '\n';
  return 0;
}

struct EvalArgs {
  std::string model, split;
  std::string mode = "full";
  int threads = 0;
};

// Split pairs are joined to the model by name; the model's ids are authoritative.
PairList remap(const PairList& pairs, const Vocabulary& from, const LoadedModel& m) {
  PairList out;
  out.reserve(pairs.size());
  for (Pair p : pairs)
    out.push_back({m.vocab.at(from.name(p.hypo)), m.vocab.at(from.name(p.hyper))});
  return out;
}

int run_eval(const EvalArgs& a) {
  LoadedModel m = load_model(a.model);
  LoadedSplit s = load_split(a.split);
  Confusion c;
  if (a.mode == "full") {
    PairList closure = remap(s.bundle.train_pos, s.vocab, m);
    const PairList val = remap(s.bundle.val_pos, s.vocab, m);
    const PairList test = remap(s.bundle.test_pos, s.vocab, m);
    closure.insert(closure.end(), val.begin(), val.end());
    closure.insert(closure.end(), test.begin(), test.end());
    std::sort(closure.begin(), closure.end());
    closure.erase(std::unique(closure.begin(), closure.end()), closure.end());
    c = evaluate_full_adjacency(m.matrix, closure, a.threads);
  } else if (a.mode == "heldout") {
    if (s.bundle.test_pos.empty())
      throw DataError("split has no held-out test pairs (representation split?)");
    c = evaluate_pairs(m.matrix, remap(s.bundle.test_pos, s.vocab, m),
                       remap(s.bundle.test_neg, s.vocab, m), a.threads);
  } else {
    throw ConfigError("eval mode must be 'full' or 'heldout'");
  }
  std::cout << confusion_json(a.mode, c).dump() << '\n';
  return 0;
}

struct QueryArgs {
  std::string model;
  std::vector<std::string> isa, meet, join;
  std::string complement_name, hyponyms, hypernyms;
  bool include_self = false;
  bool json = false;
};

void print_row_result(const LoadedModel& m, const BitRow& row, bool json) {
  const auto names = matching_names(m, row);
  if (json) {
    std::cout << nlohmann::json{{"bits", render_bits(row)}, {"matches", names}}.dump()
              << '\n';
    return;
  }
  std::cout << render_bits(row);
  for (const auto& n : names) std::cout << " = " << n;
  std::cout << '\n';
}

void print_id_list(const LoadedModel& m, const std::vector<std::uint32_t>& ids,
                   bool json) {
  if (json) {
    std::vector<std::string> names;
    names.reserve(ids.size());
    for (auto id : ids) names.push_back(m.vocab.name(id));
    std::cout << nlohmann::json(names).dump() << '\n';
    return;
  }
  for (auto id : ids) std::cout << m.vocab.name(id) << '\n';
}

int run_query(const QueryArgs& a) {
  const LoadedModel m = load_model(a.model);
  if (!a.isa.empty()) {
    const bool r = predicts_isa(m.matrix, m.vocab.at(a.isa[0]), m.vocab.at(a.isa[1]));
    std::cout << (r ? "true" : "false") << '\n';
  } else if (!a.meet.empty()) {
    print_row_result(m, meet(m.matrix, m.vocab.at(a.meet[0]), m.vocab.at(a.meet[1])),
                     a.json);
  } else if (!a.join.empty()) {
    print_row_result(m, join(m.matrix, m.vocab.at(a.join[0]), m.vocab.at(a.join[1])),
                     a.json);
  } else if (!a.complement_name.empty()) {
    print_row_result(m, complement(m.matrix, m.vocab.at(a.complement_name)), a.json);
  } else if (!a.hyponyms.empty()) {
    print_id_list(m, hyponyms_of(m.matrix, resolve_expr(m, a.hyponyms), a.include_self),
                  a.json);
  } else if (!a.hypernyms.empty()) {
    print_id_list(m,
                  hypernyms_of(m.matrix, resolve_expr(m, a.hypernyms), a.include_self),
                  a.json);
  } else {
    throw ConfigError("query requires one of --isa/--meet/--join/--complement/"
                      "--hyponyms/--hypernyms");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"binder: binary order embeddings of concept hierarchies"};
  app.set_version_flag("--version", BINDER_VERSION);
  app.require_subcommand(1);

  ClosureArgs ca;
  auto* closure_cmd =
      app.add_subcommand("closure", "Close an is-a edge list under composition");
  closure_cmd->add_option("--in", ca.in, "Input edge TSV (child<TAB>parent)")
      ->required();
  closure_cmd->add_option("--out", ca.out, "Output closure TSV")->required();
  closure_cmd->add_option("--drop-root", ca.drop_root_name,
                          "Remove this root concept and its edges first");
  closure_cmd->add_flag("--keep-root-node", ca.keep_root_node,
                        "Keep the dropped root in the vocabulary");

  SplitArgs sa;
  auto* split_cmd =
      app.add_subcommand("split", "Build a frozen experiment split from a closure");
  split_cmd->add_option("--closure", sa.closure, "Closure TSV")->required();
  split_cmd->add_option("--mode", sa.mode, "repr or lp")->required();
  split_cmd->add_option("--tc-pct", sa.tc_percent,
                        "Percent of indirect edges kept for training (lp mode)");
  split_cmd->add_option("--neg-ratio", sa.neg_ratio, "Negatives per eval positive");
  split_cmd->add_option("--seed", sa.seed, "Split seed")->required();
  split_cmd->add_option("--out", sa.out, "Output split directory")->required();

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "Train an embedding on a split");
  train_cmd->add_option("--split", ta.split, "Split directory")->required();
  train_cmd->add_option("--dim", ta.cfg.d, "Embedding bits per concept")->required();
  train_cmd->add_option("--alpha", ta.cfg.alpha, "Positive sample weight");
  train_cmd->add_option("--beta", ta.cfg.beta, "Negative sample weight");
  train_cmd->add_option("--neg-mult", ta.cfg.n_minus,
                        "Negatives sampled per training positive (even)");
  train_cmd->add_option("--lr", ta.cfg.lr, "Learning rate");
  train_cmd->add_option("--bias", ta.cfg.bias, "Learning bias");
  train_cmd->add_option("--epochs", ta.cfg.max_epochs, "Maximum epochs");
  train_cmd->add_option("--early-stop-width", ta.cfg.early_stop_width,
                        "Early-exit window, in recorded evaluations");
  train_cmd->add_option("--eval-every", ta.eval_every,
                        "Epochs between validation evaluations (0: mode default)");
  train_cmd->add_option("--seed", ta.cfg.seed, "Training seed")->required();
  train_cmd->add_option("--out", ta.out, "Output model path (.bnd)")->required();
  train_cmd->add_option("--metrics", ta.metrics,
                        "Write JSONL metrics here instead of stdout");
  train_cmd->add_option("--threads", ta.cfg.threads, "Worker threads (0: all)");

  EvalArgs ea;
  auto* eval_cmd = app.add_subcommand("eval", "Score a model against a split");
  eval_cmd->add_option("--model", ea.model, "Model path (.bnd)")->required();
  eval_cmd->add_option("--split", ea.split, "Split directory")->required();
  eval_cmd->add_option("--mode", ea.mode, "full or heldout");
  eval_cmd->add_option("--threads", ea.threads, "Worker threads (0: all)");

  QueryArgs qa;
  auto* query_cmd = app.add_subcommand("query", "Algebra queries over a model");
  query_cmd->add_option("--model", qa.model, "Model path (.bnd)")->required();
  query_cmd->add_option("--isa", qa.isa, "Does A is-a B hold")->expected(2);
  query_cmd->add_option("--meet", qa.meet, "Meet (bitwise OR) of two concepts")
      ->expected(2);
  query_cmd->add_option("--join", qa.join, "Join (bitwise AND) of two concepts")
      ->expected(2);
  query_cmd->add_option("--complement", qa.complement_name,
                        "Complement of a concept's row");
  query_cmd->add_option("--hyponyms", qa.hyponyms,
                        "Concepts below a name or bit pattern");
  query_cmd->add_option("--hypernyms", qa.hypernyms,
                        "Concepts above a name or bit pattern");
  query_cmd->add_flag("--include-self", qa.include_self,
                      "Include exact-row matches in results");
  query_cmd->add_flag("--json", qa.json, "Emit JSON instead of plain text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(closure_cmd)) return run_closure(ca);
    if (app.got_subcommand(split_cmd)) return run_split(sa);
    if (app.got_subcommand(train_cmd)) return run_train(ta);
    if (app.got_subcommand(eval_cmd)) return run_eval(ea);
    if (app.got_subcommand(query_cmd)) return run_query(qa);
  } catch (const binder::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const binder::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
