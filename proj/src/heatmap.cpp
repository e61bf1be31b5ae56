#include "uwbvital/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "uwbvital/errors.hpp"

namespace uwbvital {

void write_pgm(std::ostream& out, const Matrix& map) {
    if (map.empty()) throw DimensionError("write_pgm: empty map");
    double peak = 0.0;
    for (double v : map.values()) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InputError("write_pgm: map must be finite and non-negative");
        }
        peak = std::max(peak, v);
    }
    out << "P5\n" << map.cols() << " " << map.rows() << "\n255\n";
    std::vector<unsigned char> row(map.cols());
    for (std::size_t r = 0; r < map.rows(); ++r) {
        const double* src = map.row(r);
        for (std::size_t c = 0; c < map.cols(); ++c) {
            row[c] = peak > 0.0
                         ? static_cast<unsigned char>(std::lround(src[c] / peak * 255.0))
                         : 0;
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw FormatError("write_pgm: write failed");
}

void write_pgm_file(const std::string& path, const Matrix& map) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("write_pgm: cannot open '" + path + "' for writing");
    write_pgm(out, map);
}

} // namespace uwbvital
