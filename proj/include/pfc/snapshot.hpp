#pragma once

#include <cstdint>
#include <filesystem>

#include "pfc/lattice.hpp"

namespace pfc {

/// Binary field snapshot, little-endian throughout:
///
///   "PFCF"            4 bytes
///   version           uint32 (currently 1)
///   n, d              uint32 each
///   N_1 .. N_n        uint32 each
///   B                 n*n float64, row-major
///   P                 d*n float64, row-major
///   amplitudes        2*size float64, (re, im) pairs in IndexGrid storage order
struct Snapshot {
  LatticeSpec lattice;
  FourierField field;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Writes through a temporary file and renames it into place.
void write_snapshot(const std::filesystem::path& path, const LatticeSpec& lattice, const FourierField& field);

/// Throws SnapshotError on a bad magic, unknown version, truncated data or inconsistent sizes.
Snapshot read_snapshot(const std::filesystem::path& path);

/// As read_snapshot, and also requires n, d and every N_j to match `expected`.
Snapshot read_snapshot(const std::filesystem::path& path, const LatticeSpec& expected);

}  // namespace pfc
