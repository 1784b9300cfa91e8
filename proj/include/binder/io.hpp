#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>

#include <json.hpp>

#include "binder/core.hpp"
#include "binder/dataset.hpp"
#include "binder/evaluator.hpp"
#include "binder/optimizer.hpp"

// Bit-exact persistence. The embedding container is:
//   magic "BNDR" | u32 LE version = 1 | u64 LE n | u64 LE d |
//   n * ceil(d/64) u64 LE words, row-major, layout identical to BitMatrix.
// File size is exactly 24 + 8 * n * ceil(d/64) bytes. A model on disk is the
// container plus a companion vocabulary text file (line i = name of id i).

namespace binder {

inline constexpr std::uint32_t kEmbeddingFormatVersion = 1;

constexpr std::uint64_t embedding_file_size(std::uint64_t n, std::uint64_t d) {
  return 24 + 8 * n * ((d + 63) / 64);
}

void save_embedding(std::ostream& out, const BitMatrix& B);
BitMatrix load_embedding(std::istream& in);  // DataError on bad magic/version/size

std::filesystem::path vocab_path_for(const std::filesystem::path& model_path);

struct LoadedModel {
  BitMatrix matrix;
  Vocabulary vocab;
};

// Writes <path> and its companion <path>.vocab.
void save_model(const std::filesystem::path& path, const BitMatrix& B,
                const Vocabulary& vocab);
LoadedModel load_model(const std::filesystem::path& path);

// Split directory: vocab.txt, train_pos.tsv, val_pos.tsv, val_neg.tsv,
// test_pos.tsv, test_neg.tsv (name<TAB>name lines) and manifest.json with
// mode, tc_percent, neg_ratio, seed, and counts.
void save_split(const std::filesystem::path& dir, const SplitBundle& bundle,
                const Vocabulary& vocab);

struct LoadedSplit {
  SplitBundle bundle;
  Vocabulary vocab;
};

LoadedSplit load_split(const std::filesystem::path& dir);

nlohmann::json metrics_json(const EpochRecord& rec);
void write_metrics_line(std::ostream& out, const EpochRecord& rec);

nlohmann::json confusion_json(std::string_view mode, const Confusion& c);
nlohmann::json train_config_json(const TrainConfig& cfg);

}  // namespace binder
