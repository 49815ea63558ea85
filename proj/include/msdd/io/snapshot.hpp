#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msdd/dynamics.hpp"

namespace msdd::io {

/// Binary state file, all integers and floats little-endian:
///   "MSW1", version byte (1), N1 N2 N3 as uint32, t as float64, then the
///   coefficient arrays as float64 in the order A_1..A_3, Pi_1..Pi_3,
///   Re psi, Im psi (each in layout order).
constexpr std::uint8_t kSnapshotVersion = 1;

std::vector<std::uint8_t> encode_snapshot(const State& s);

/// Throws FormatError on bad magic or version, CorruptionError on a
/// truncated or oversized payload, DimensionError when the stored grid
/// differs from `domain`.
State decode_snapshot(const std::vector<std::uint8_t>& bytes, const DomainPtr& domain);

void save_snapshot(const std::string& path, const State& s);
State load_snapshot(const std::string& path, const DomainPtr& domain);

/// Grid dimensions stored in a snapshot file (header only).
std::array<int, 3> snapshot_dims(const std::string& path);

}  // namespace msdd::io
