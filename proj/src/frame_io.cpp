#include "uwbvital/frame_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include "uwbvital/errors.hpp"

namespace uwbvital {

namespace {

void put_bytes(std::ostream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void put_le(std::ostream& out, T value) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        buf[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xff);
    }
    put_bytes(out, buf, sizeof(T));
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
void put_f32(std::ostream& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }

template <typename T>
T get_le(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw FormatError("frame file: truncated header");
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= static_cast<T>(buf[i]) << (8 * i);
    }
    return value;
}

} // namespace

void write_frame(std::ostream& out, const RadarFrame& frame) {
    frame.validate();
    put_bytes(out, kFrameMagic, 4);
    put_le(out, kFrameVersion);
    put_le(out, static_cast<std::uint32_t>(frame.samples()));
    put_le(out, static_cast<std::uint32_t>(frame.traces()));
    put_f64(out, frame.fast_rate);
    put_f64(out, frame.prf);
    for (std::size_t n = 0; n < frame.traces(); ++n) {
        for (std::size_t i = 0; i < frame.samples(); ++i) {
            put_f32(out, static_cast<float>(frame.data(i, n)));
        }
    }
    if (!out) throw FormatError("frame file: write failed");
}

void write_frame_file(const std::string& path, const RadarFrame& frame) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("frame file: cannot open '" + path + "' for writing");
    write_frame(out, frame);
    out.flush();
    if (!out) throw FormatError("frame file: write failed for '" + path + "'");
}

RadarFrame read_frame(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kFrameMagic, 4) != 0) {
        throw FormatError("frame file: bad magic, expected \"RFRM\"");
    }
    const auto version = get_le<std::uint16_t>(in);
    if (version != kFrameVersion) {
        throw FormatError("frame file: unsupported version " + std::to_string(version));
    }
    const auto m = get_le<std::uint32_t>(in);
    const auto n = get_le<std::uint32_t>(in);
    const double fast_rate = std::bit_cast<double>(get_le<std::uint64_t>(in));
    const double prf = std::bit_cast<double>(get_le<std::uint64_t>(in));

    if (m < 2 || n < 2) {
        throw FormatError("frame file: header declares " + std::to_string(m) + "x" +
                          std::to_string(n) + " frame, need at least 2x2");
    }

    RadarFrame frame;
    frame.data = Matrix(m, n, 0.0);
    frame.fast_rate = fast_rate;
    frame.prf = prf;

    std::vector<unsigned char> trace(static_cast<std::size_t>(m) * 4);
    for (std::uint32_t col = 0; col < n; ++col) {
        in.read(reinterpret_cast<char*>(trace.data()), static_cast<std::streamsize>(trace.size()));
        if (!in) {
            throw FormatError("frame file: truncated payload, expected " +
                              std::to_string(static_cast<std::uint64_t>(m) * n * 4) + " bytes");
        }
        for (std::uint32_t i = 0; i < m; ++i) {
            std::uint32_t bits = 0;
            for (int b = 0; b < 4; ++b) {
                bits |= static_cast<std::uint32_t>(trace[i * 4 + static_cast<std::size_t>(b)])
                        << (8 * b);
            }
            frame.data(i, col) = static_cast<double>(std::bit_cast<float>(bits));
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw FormatError("frame file: trailing bytes after payload");
    }

    try {
        frame.validate();
    } catch (const Error& e) {
        throw FormatError(std::string("frame file: ") + e.what());
    }
    return frame;
}

RadarFrame read_frame_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("frame file: cannot open '" + path + "'");
    return read_frame(in);
}

} // namespace uwbvital
