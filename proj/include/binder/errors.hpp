#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace binder {

// Error taxonomy mirrors the CLI exit-code contract:
//   ConfigError -> exit 2 (bad parameters, invalid mode/flag combinations)
//   DataError   -> exit 3 (malformed input, cycles, unknown names, bad files)
// Everything else is a programming error and surfaces as a logic_error subclass.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cycle detected while closing an edge set. Carries one member of the cycle
// so callers that own the vocabulary can report a name instead of an id.
struct CycleError : DataError {
  CycleError(std::uint32_t member_id, const std::string& what)
      : DataError(what), member(member_id) {}
  std::uint32_t member;
};

struct DimensionError : std::logic_error {
  using std::logic_error::logic_error;
};

struct IndexError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace binder
