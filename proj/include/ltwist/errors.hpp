#pragma once

#include <stdexcept>
#include <string>

namespace ltwist {

// A request exceeded a configured memory/size budget. The message names the
// offending bound so callers can rebuild with a larger table.
struct capacity_error : std::runtime_error {
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Table or result file could not be read/written/parsed.
struct persistence_error : std::runtime_error {
  explicit persistence_error(const std::string& what) : std::runtime_error(what) {}
};

// Constructed data failed its own validation (oracle mismatch, bad checksum).
struct construction_error : std::runtime_error {
  explicit construction_error(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical invariant that the algorithms rely on was violated.
// Reaching this means a bug, not bad input.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace ltwist
