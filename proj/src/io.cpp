#include "binder/io.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace binder {
namespace {

constexpr std::array<char, 4> kMagic = {'B', 'N', 'D', 'R'};

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

std::uint32_t get_u32(std::istream& in) {
  std::array<char, 4> b;
  in.read(b.data(), b.size());
  if (!in) throw DataError("embedding file truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  std::array<char, 8> b;
  in.read(b.data(), b.size());
  if (!in) throw DataError("embedding file truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw DataError("cannot open for reading: " + path.string());
  return in;
}

void save_pairs_tsv(const std::filesystem::path& path, const PairList& pairs,
                    const Vocabulary& vocab) {
  auto out = open_out(path, std::ios::out);
  for (Pair p : pairs)
    out << vocab.name(p.hypo) << '\t' << vocab.name(p.hyper) << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

PairList load_pairs_tsv(const std::filesystem::path& path, const Vocabulary& vocab) {
  auto in = open_in(path, std::ios::in);
  PairList pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError(path.string() + ": line " + std::to_string(line_no) +
                      ": expected two tab-separated fields");
    pairs.push_back({vocab.at(std::string_view(line).substr(0, tab)),
                     vocab.at(std::string_view(line).substr(tab + 1))});
  }
  return pairs;
}

}  // namespace

void save_embedding(std::ostream& out, const BitMatrix& B) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kEmbeddingFormatVersion);
  put_u64(out, B.n());
  put_u64(out, B.d());
  for (const std::uint64_t w : B.storage()) put_u64(out, w);
  if (!out) throw DataError("embedding write failed");
}

BitMatrix load_embedding(std::istream& in) {
  std::array<char, 4> magic;
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw DataError("not an embedding file (bad magic)");
  const std::uint32_t version = get_u32(in);
  if (version != kEmbeddingFormatVersion)
    throw DataError("unsupported embedding format version " + std::to_string(version));
  const std::uint64_t n = get_u64(in);
  const std::uint64_t d = get_u64(in);
  if (n == 0 || d == 0) throw DataError("embedding file has empty dimensions");

  BitMatrix B(n, d);
  const std::uint64_t mask = B.live_mask();
  const std::size_t wpr = B.words_per_row();
  auto& words = B.storage_mut();
  for (std::size_t i = 0; i < words.size(); ++i) {
    words[i] = get_u64(in);
    if ((i + 1) % wpr == 0 && (words[i] & ~mask))
      throw DataError("embedding file has nonzero padding bits");
  }
  in.peek();
  if (!in.eof()) throw DataError("embedding file has trailing bytes");
  return B;
}

std::filesystem::path vocab_path_for(const std::filesystem::path& model_path) {
  auto p = model_path;
  p += ".vocab";
  return p;
}

void save_model(const std::filesystem::path& path, const BitMatrix& B,
                const Vocabulary& vocab) {
  if (vocab.size() != B.n())
    throw ConfigError("vocabulary size does not match embedding rows");
  {
    auto out = open_out(path, std::ios::binary);
    save_embedding(out, B);
  }
  auto out = open_out(vocab_path_for(path), std::ios::out);
  for (const auto& name : vocab.names()) out << name << '\n';
  if (!out) throw DataError("vocabulary write failed");
}

LoadedModel load_model(const std::filesystem::path& path) {
  LoadedModel m;
  {
    auto in = open_in(path, std::ios::binary);
    m.matrix = load_embedding(in);
  }
  auto in = open_in(vocab_path_for(path), std::ios::in);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    m.vocab.add(line);
  }
  if (m.vocab.size() != m.matrix.n())
    throw DataError("vocabulary line count does not match embedding rows");
  return m;
}

void save_split(const std::filesystem::path& dir, const SplitBundle& bundle,
                const Vocabulary& vocab) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "vocab.txt", std::ios::out);
    for (const auto& name : vocab.names()) out << name << '\n';
    if (!out) throw DataError("vocabulary write failed");
  }
  save_pairs_tsv(dir / "train_pos.tsv", bundle.train_pos, vocab);
  save_pairs_tsv(dir / "val_pos.tsv", bundle.val_pos, vocab);
  save_pairs_tsv(dir / "val_neg.tsv", bundle.val_neg, vocab);
  save_pairs_tsv(dir / "test_pos.tsv", bundle.test_pos, vocab);
  save_pairs_tsv(dir / "test_neg.tsv", bundle.test_neg, vocab);

  nlohmann::json manifest{
      {"format_version", 1},
      {"mode", std::string(to_string(bundle.mode))},
      {"tc_percent", bundle.tc_percent},
      {"neg_ratio", bundle.neg_ratio},
      {"seed", bundle.split_seed},
      {"n", vocab.size()},
      {"counts",
       {{"train_pos", bundle.train_pos.size()},
        {"val_pos", bundle.val_pos.size()},
        {"val_neg", bundle.val_neg.size()},
        {"test_pos", bundle.test_pos.size()},
        {"test_neg", bundle.test_neg.size()}}},
  };
  auto out = open_out(dir / "manifest.json", std::ios::out);
  out << manifest.dump(2) << '\n';
  if (!out) throw DataError("manifest write failed");
}

LoadedSplit load_split(const std::filesystem::path& dir) {
  nlohmann::json manifest;
  {
    auto in = open_in(dir / "manifest.json", std::ios::in);
    try {
      in >> manifest;
    } catch (const nlohmann::json::exception& e) {
      throw DataError("bad split manifest: " + std::string(e.what()));
    }
  }
  LoadedSplit s;
  try {
    s.bundle.mode = split_mode_from_string(manifest.at("mode").get<std::string>());
    s.bundle.tc_percent = manifest.at("tc_percent").get<int>();
    s.bundle.neg_ratio = manifest.at("neg_ratio").get<int>();
    s.bundle.split_seed = manifest.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad split manifest: " + std::string(e.what()));
  }

  {
    auto in = open_in(dir / "vocab.txt", std::ios::in);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      s.vocab.add(line);
    }
  }
  if (manifest.contains("n") && manifest["n"].get<std::size_t>() != s.vocab.size())
    throw DataError("split vocab.txt does not match manifest n");

  s.bundle.train_pos = load_pairs_tsv(dir / "train_pos.tsv", s.vocab);
  s.bundle.val_pos = load_pairs_tsv(dir / "val_pos.tsv", s.vocab);
  s.bundle.val_neg = load_pairs_tsv(dir / "val_neg.tsv", s.vocab);
  s.bundle.test_pos = load_pairs_tsv(dir / "test_pos.tsv", s.vocab);
  s.bundle.test_neg = load_pairs_tsv(dir / "test_neg.tsv", s.vocab);

  const auto expect = [&](const char* key, std::size_t actual) {
    const auto& counts = manifest.at("counts");
    if (counts.contains(key) && counts[key].get<std::size_t>() != actual)
      throw DataError(std::string("split file count mismatch for ") + key);
  };
  expect("train_pos", s.bundle.train_pos.size());
  expect("val_pos", s.bundle.val_pos.size());
  expect("val_neg", s.bundle.val_neg.size());
  expect("test_pos", s.bundle.test_pos.size());
  expect("test_neg", s.bundle.test_neg.size());
  return s;
}

nlohmann::json metrics_json(const EpochRecord& rec) {
  nlohmann::json j{
      {"epoch", rec.epoch},
      {"loss_p", rec.loss_p},
      {"loss_n", rec.loss_n},
      {"bits_flipped", rec.bits_flipped},
      {"elapsed_ms", static_cast<double>(rec.elapsed_us) / 1000.0},
  };
  if (rec.val_f1)
    j["val_f1"] = *rec.val_f1;
  else
    j["val_f1"] = nullptr;
  return j;
}

void write_metrics_line(std::ostream& out, const EpochRecord& rec) {
  out << metrics_json(rec).dump() << '\n';
}

nlohmann::json confusion_json(std::string_view mode, const Confusion& c) {
  return nlohmann::json{
      {"mode", std::string(mode)}, {"tp", c.tp},
      {"fp", c.fp},                {"fn", c.fn},
      {"tn", c.tn},                {"precision", precision(c)},
      {"recall", recall(c)},       {"f1", f1(c)},
  };
}

nlohmann::json train_config_json(const TrainConfig& cfg) {
  return nlohmann::json{
      {"dim", cfg.d},
      {"alpha", cfg.alpha},
      {"beta", cfg.beta},
      {"neg_mult", cfg.n_minus},
      {"lr", cfg.lr},
      {"bias", cfg.bias},
      {"epochs", cfg.max_epochs},
      {"early_stop_width", cfg.early_stop_width},
      {"eval_every", cfg.eval_every},
      {"seed", cfg.seed},
      {"threads", cfg.threads},
  };
}

}  // namespace binder
