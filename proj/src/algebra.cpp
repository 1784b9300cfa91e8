#include "binder/algebra.hpp"

namespace binder {
namespace {

bool row_equals(std::span<const std::uint64_t> row, const BitRow& q) {
  for (std::size_t k = 0; k < row.size(); ++k)
    if (row[k] != q.words[k]) return false;
  return true;
}

void check_query(const BitMatrix& B, const BitRow& q) {
  if (q.d != B.d()) throw DimensionError("query dimension mismatch");
}

}  // namespace

BitRow meet(const BitMatrix& B, std::uint32_t a, std::uint32_t b) {
  return bitwise_or(B.row_copy(a), B.row_copy(b));
}

BitRow join(const BitMatrix& B, std::uint32_t a, std::uint32_t b) {
  return bitwise_and(B.row_copy(a), B.row_copy(b));
}

BitRow complement(const BitRow& row) {
  BitRow r(row.d);
  for (std::size_t k = 0; k < r.words.size(); ++k) r.words[k] = ~row.words[k];
  r.words.back() &= last_word_mask(row.d);
  return r;
}

BitRow complement(const BitMatrix& B, std::uint32_t a) {
  return complement(B.row_copy(a));
}

std::vector<std::uint32_t> hyponyms_of(const BitMatrix& B, const BitRow& query,
                                       bool include_self) {
  check_query(B, query);
  std::vector<std::uint32_t> out;
  const std::span<const std::uint64_t> q(query.words);
  for (std::uint32_t w = 0; w < B.n(); ++w) {
    const auto row = B.row(w);
    if (violation_count(row, q) != 0) continue;
    if (!include_self && row_equals(row, query)) continue;
    out.push_back(w);
  }
  return out;
}

std::vector<std::uint32_t> hypernyms_of(const BitMatrix& B, const BitRow& query,
                                        bool include_self) {
  check_query(B, query);
  std::vector<std::uint32_t> out;
  const std::span<const std::uint64_t> q(query.words);
  for (std::uint32_t w = 0; w < B.n(); ++w) {
    const auto row = B.row(w);
    if (violation_count(q, row) != 0) continue;
    if (!include_self && row_equals(row, query)) continue;
    out.push_back(w);
  }
  return out;
}

}  // namespace binder
