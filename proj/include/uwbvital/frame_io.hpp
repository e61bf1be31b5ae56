#pragma once

#include <iosfwd>
#include <string>

#include "uwbvital/frame.hpp"

namespace uwbvital {

// Binary frame file, all multi-byte values little-endian:
//   "RFRM"            4 bytes magic
//   version           u16, currently 1
//   m_samples         u32
//   n_traces          u32
//   fast_rate         f64, Hz
//   prf               f64, Hz
//   payload           n_traces traces, each m_samples f32
// Samples are stored per trace; in-memory frames hold doubles, so writing
// quantizes to f32. Frames read from a file (or produced by the scene
// generator) round-trip bit-exactly.
inline constexpr char kFrameMagic[4] = {'R', 'F', 'R', 'M'};
inline constexpr std::uint16_t kFrameVersion = 1;
inline constexpr std::size_t kFrameHeaderBytes = 30;

void write_frame(std::ostream& out, const RadarFrame& frame);
void write_frame_file(const std::string& path, const RadarFrame& frame);

// Throws FormatError on bad magic/version, truncated or oversized payload,
// or header fields that violate the frame invariants.
RadarFrame read_frame(std::istream& in);
RadarFrame read_frame_file(const std::string& path);

} // namespace uwbvital
