#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>

#include "snndyn/snnd.hpp"

namespace snndyn {

inline constexpr std::string_view kSnapshotMagic = "BISDSNAP";
inline constexpr int kSnapshotVersion = 1;

// Writes the versioned line-oriented snapshot and returns the byte count.
// The format is canonical: equal states serialize to identical bytes
// (points by id, list entries in rank order, edges lower-id-first, floats
// in shortest round-trip form). Undirected edges are written once.
std::size_t save_state(const EngineState& state, std::ostream& out);

// Reads a snapshot and revalidates the structural invariants of every
// section. Throws std::runtime_error: "unsupported snapshot ..." for a bad
// magic or version, "corrupt snapshot ..." (naming section and line) for
// anything else.
EngineState load_state(std::istream& in);

}  // namespace snndyn
