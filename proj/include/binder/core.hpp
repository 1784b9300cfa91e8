#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "binder/errors.hpp"

// Bit-packed embedding storage and the containment predicates everything else
// is built on. A concept's embedding is one row of d bits packed into 64-bit
// words, bit j living in word j/64 at position j%64 (LSB first). Padding bits
// beyond d-1 are zero after every mutation; that invariant is what makes
// popcount-based predicates correct without per-call masking.

namespace binder {

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_per_row(std::size_t d) {
  return (d + kWordBits - 1) / kWordBits;
}

// Mask of live bits in the last word of a d-bit row.
constexpr std::uint64_t last_word_mask(std::size_t d) {
  const std::size_t rem = d % kWordBits;
  return rem == 0 ? ~0ULL : ((1ULL << rem) - 1);
}

// ---------------------------------------------------------------------------
// BitRow: a standalone row value, used for algebra results and query literals.
// ---------------------------------------------------------------------------

struct BitRow {
  std::size_t d = 0;
  std::vector<std::uint64_t> words;  // words_per_row(d) entries, padding zero

  BitRow() = default;
  explicit BitRow(std::size_t dim) : d(dim), words(words_per_row(dim), 0) {}

  bool bit(std::size_t j) const {
    return (words[j / kWordBits] >> (j % kWordBits)) & 1ULL;
  }
  void set_bit(std::size_t j, bool v) {
    const std::uint64_t m = 1ULL << (j % kWordBits);
    if (v)
      words[j / kWordBits] |= m;
    else
      words[j / kWordBits] &= ~m;
  }

  bool operator==(const BitRow&) const = default;
};

// ---------------------------------------------------------------------------
// BitMatrix: n rows of d bits. The optimizer owns the only mutation path
// during training; concurrent readers are always safe.
// ---------------------------------------------------------------------------

class BitMatrix {
 public:
  BitMatrix() = default;

  // Zero-initialized n x d matrix. n >= 1 and d >= 1.
  BitMatrix(std::size_t n, std::size_t d)
      : n_(n), d_(d), wpr_(binder::words_per_row(d)), words_(n * wpr_, 0) {
    if (n == 0 || d == 0) throw ConfigError("BitMatrix requires n >= 1 and d >= 1");
  }

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }
  std::size_t words_per_row() const { return wpr_; }
  std::uint64_t live_mask() const { return last_word_mask(d_); }

  std::span<const std::uint64_t> row(std::size_t w) const {
    check_row(w);
    return {words_.data() + w * wpr_, wpr_};
  }
  std::span<std::uint64_t> row_mut(std::size_t w) {
    check_row(w);
    return {words_.data() + w * wpr_, wpr_};
  }

  bool bit(std::size_t w, std::size_t j) const {
    check_bit(w, j);
    return (words_[w * wpr_ + j / kWordBits] >> (j % kWordBits)) & 1ULL;
  }
  void set_bit(std::size_t w, std::size_t j, bool v) {
    check_bit(w, j);
    const std::uint64_t m = 1ULL << (j % kWordBits);
    std::uint64_t& word = words_[w * wpr_ + j / kWordBits];
    if (v)
      word |= m;
    else
      word &= ~m;
  }
  void flip_bit(std::size_t w, std::size_t j) {
    check_bit(w, j);
    words_[w * wpr_ + j / kWordBits] ^= 1ULL << (j % kWordBits);
  }

  BitRow row_copy(std::size_t w) const {
    check_row(w);
    BitRow r(d_);
    const auto s = row(w);
    std::copy(s.begin(), s.end(), r.words.begin());
    return r;
  }
  void set_row(std::size_t w, const BitRow& r) {
    check_row(w);
    if (r.d != d_) throw DimensionError("row dimension mismatch");
    auto s = row_mut(w);
    std::copy(r.words.begin(), r.words.end(), s.begin());
  }

  // Raw word storage, row-major; layout identical to the serialized format.
  const std::vector<std::uint64_t>& storage() const { return words_; }
  std::vector<std::uint64_t>& storage_mut() { return words_; }

  bool operator==(const BitMatrix&) const = default;

 private:
  void check_row(std::size_t w) const {
    if (w >= n_) throw IndexError("row id out of range");
  }
  void check_bit(std::size_t w, std::size_t j) const {
    if (w >= n_ || j >= d_) throw IndexError("bit index out of range");
  }

  std::size_t n_ = 0, d_ = 0, wpr_ = 0;
  std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Vocabulary: bijection between concept strings and dense ids 0..n-1.
// ---------------------------------------------------------------------------

class Vocabulary {
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  struct Eq {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const { return a == b; }
  };

 public:
  // Returns the existing id when the name is already present.
  std::uint32_t add(std::string_view name) {
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<std::uint32_t> find(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::uint32_t at(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw DataError("unknown concept name: " + std::string(name));
    return it->second;
  }

  const std::string& name(std::uint32_t id) const {
    if (id >= names_.size()) throw IndexError("concept id out of range");
    return names_[id];
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t, Hash, Eq> index_;
};

// ---------------------------------------------------------------------------
// Predicates. The span overloads assume equal word counts and zero padding;
// the BitRow/BitMatrix overloads check dimensions.
// ---------------------------------------------------------------------------

// |{ j : a_j = 0 and b_j = 1 }|. With b's padding zero, no mask is needed.
std::size_t violation_count(std::span<const std::uint64_t> a,
                            std::span<const std::uint64_t> b);

std::size_t violation_count(const BitRow& a, const BitRow& b);
std::size_t violation_count(const BitMatrix& m, std::uint32_t a, std::uint32_t b);

// Model asserts "a is-a b": every 1-bit of b is set in a, and a != b.
bool predicts_isa(const BitMatrix& m, std::uint32_t a, std::uint32_t b);

std::size_t hamming_distance(const BitRow& a, const BitRow& b);

BitRow bitwise_or(const BitRow& a, const BitRow& b);
BitRow bitwise_and(const BitRow& a, const BitRow& b);

}  // namespace binder
