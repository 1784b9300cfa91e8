#pragma once

#include <cstdint>
#include <vector>

#include "binder/core.hpp"

// Lattice-style queries over a trained embedding. On bit rows, meet is
// bitwise OR (the more specific concept: union of attributes) and join is
// bitwise AND (the more general one). The join is meaningful only locally,
// near concepts that actually share structure; distant concepts usually
// join to the zero row, the hypernym of everything.

namespace binder {

BitRow meet(const BitMatrix& B, std::uint32_t a, std::uint32_t b);
BitRow join(const BitMatrix& B, std::uint32_t a, std::uint32_t b);

// Bitwise NOT within the d live bits; padding stays zero.
BitRow complement(const BitRow& row);
BitRow complement(const BitMatrix& B, std::uint32_t a);

// All concepts the model places strictly below / above the query row.
// Exact-row matches are excluded unless include_self is set: a concept is
// not its own hyponym. Results are sorted by id.
std::vector<std::uint32_t> hyponyms_of(const BitMatrix& B, const BitRow& query,
                                       bool include_self = false);
std::vector<std::uint32_t> hypernyms_of(const BitMatrix& B, const BitRow& query,
                                        bool include_self = false);

}  // namespace binder
