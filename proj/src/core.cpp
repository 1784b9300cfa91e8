#include "binder/core.hpp"

#include <bit>

namespace binder {

std::size_t violation_count(std::span<const std::uint64_t> a,
                            std::span<const std::uint64_t> b) {
  std::size_t c = 0;
  for (std::size_t k = 0; k < a.size(); ++k) c += std::popcount(~a[k] & b[k]);
  return c;
}

std::size_t violation_count(const BitRow& a, const BitRow& b) {
  if (a.d != b.d) throw DimensionError("violation_count: dimension mismatch");
  return violation_count(std::span<const std::uint64_t>(a.words),
                         std::span<const std::uint64_t>(b.words));
}

std::size_t violation_count(const BitMatrix& m, std::uint32_t a, std::uint32_t b) {
  return violation_count(m.row(a), m.row(b));
}

bool predicts_isa(const BitMatrix& m, std::uint32_t a, std::uint32_t b) {
  if (a == b) return false;
  const auto ra = m.row(a);
  const auto rb = m.row(b);
  for (std::size_t k = 0; k < ra.size(); ++k)
    if (~ra[k] & rb[k]) return false;
  return true;
}

std::size_t hamming_distance(const BitRow& a, const BitRow& b) {
  if (a.d != b.d) throw DimensionError("hamming_distance: dimension mismatch");
  std::size_t c = 0;
  for (std::size_t k = 0; k < a.words.size(); ++k)
    c += std::popcount(a.words[k] ^ b.words[k]);
  return c;
}

BitRow bitwise_or(const BitRow& a, const BitRow& b) {
  if (a.d != b.d) throw DimensionError("bitwise_or: dimension mismatch");
  BitRow r(a.d);
  for (std::size_t k = 0; k < r.words.size(); ++k) r.words[k] = a.words[k] | b.words[k];
  return r;
}

BitRow bitwise_and(const BitRow& a, const BitRow& b) {
  if (a.d != b.d) throw DimensionError("bitwise_and: dimension mismatch");
  BitRow r(a.d);
  for (std::size_t k = 0; k < r.words.size(); ++k) r.words[k] = a.words[k] & b.words[k];
  return r;
}

}  // namespace binder
