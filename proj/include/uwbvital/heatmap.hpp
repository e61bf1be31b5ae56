#pragma once

#include <iosfwd>
#include <string>

#include "uwbvital/grid.hpp"

namespace uwbvital {

// Binary portable graymap (P5, 8-bit) of a non-negative map, scaled
// linearly so the map maximum becomes 255 (an all-zero map stays black).
// Rows map to image rows.
void write_pgm(std::ostream& out, const Matrix& map);
void write_pgm_file(const std::string& path, const Matrix& map);

} // namespace uwbvital
