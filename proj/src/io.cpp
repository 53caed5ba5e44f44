#include "tvtv/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace tvtv {

namespace {

constexpr std::size_t kHeaderBytes = 16;
constexpr char kMagic[4] = {'H', 'S', 'C', '1'};

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<unsigned char>((v >> (8 * k)) & 0xFFu));
}

std::uint32_t get_u32(std::span<const unsigned char> in, std::size_t offset) {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(in[offset + k]) << (8 * k);
    return v;
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
    if (v > 0xFFFFFFFFu) throw IoError(std::string("HSC1: ") + what + " does not fit in 32 bits");
    return static_cast<std::uint32_t>(v);
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string with_path(const std::string& msg, const std::filesystem::path& path) {
    return path.string() + ": " + msg;
}

}  // namespace

std::vector<unsigned char> encode_hsc(const HsCube& cube) {
    std::vector<unsigned char> out;
    out.reserve(kHeaderBytes + 4 * cube.size());
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    put_u32(out, checked_u32(cube.rows(), "rows"));
    put_u32(out, checked_u32(cube.cols(), "cols"));
    put_u32(out, checked_u32(cube.bands(), "bands"));
    for (double v : cube.data()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    return out;
}

HsCube decode_hsc(std::span<const unsigned char> bytes) {
    if (bytes.size() < 4) throw TruncatedError("HSC1: file shorter than the magic bytes");
    if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin(),
                    [](char m, unsigned char b) { return static_cast<unsigned char>(m) == b; })) {
        throw BadMagicError("HSC1: bad magic bytes");
    }
    if (bytes.size() < kHeaderBytes) throw TruncatedError("HSC1: truncated header");
    const std::size_t rows = get_u32(bytes, 4);
    const std::size_t cols = get_u32(bytes, 8);
    const std::size_t bands = get_u32(bytes, 12);
    if (rows == 0 || cols == 0 || bands == 0) {
        throw ZeroDimensionError("HSC1: zero dimension in header (" + std::to_string(rows) + "x" +
                                 std::to_string(cols) + "x" + std::to_string(bands) + ")");
    }
    const std::size_t count = rows * cols * bands;
    const std::size_t expected = kHeaderBytes + 4 * count;
    if (bytes.size() < expected) {
        throw TruncatedError("HSC1: payload has " + std::to_string(bytes.size() - kHeaderBytes) + " bytes, expected " +
                             std::to_string(4 * count));
    }
    if (bytes.size() > expected) {
        throw IoError("HSC1: " + std::to_string(bytes.size() - expected) + " trailing bytes after payload");
    }
    std::vector<double> data(count);
    for (std::size_t k = 0; k < count; ++k) {
        data[k] = static_cast<double>(std::bit_cast<float>(get_u32(bytes, kHeaderBytes + 4 * k)));
    }
    return HsCube(rows, cols, bands, std::move(data));
}

void write_hsc(const HsCube& cube, const std::filesystem::path& path) { write_bytes(encode_hsc(cube), path); }

HsCube read_hsc(const std::filesystem::path& path) {
    const auto bytes = read_bytes(path);
    try {
        return decode_hsc(bytes);
    } catch (const BadMagicError& e) {
        throw BadMagicError(with_path(e.what(), path));
    } catch (const TruncatedError& e) {
        throw TruncatedError(with_path(e.what(), path));
    } catch (const ZeroDimensionError& e) {
        throw ZeroDimensionError(with_path(e.what(), path));
    } catch (const IoError& e) {
        throw IoError(with_path(e.what(), path));
    }
}

SpectralMatrix parse_csr(const std::string& text) {
    std::vector<double> entries;
    std::size_t width = 0;
    std::size_t rows = 0;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::size_t count = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string token = trim(std::string_view(line).substr(start, comma == std::string::npos
                                                                                   ? std::string::npos
                                                                                   : comma - start));
            ++count;
            double value = 0.0;
            const char* first = token.data();
            const char* last = token.data() + token.size();
            if (!token.empty() && *first == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (token.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
                throw ParseError("CSR: invalid number '" + token + "' at line " + std::to_string(line_no) +
                                     ", column " + std::to_string(count),
                                 line_no, count);
            }
            entries.push_back(value);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (rows == 0) {
            width = count;
        } else if (count != width) {
            throw ParseError("CSR: line " + std::to_string(line_no) + " has " + std::to_string(count) +
                                 " values, expected " + std::to_string(width),
                             line_no, count);
        }
        ++rows;
    }
    if (rows == 0) throw ParseError("CSR: no rows", 0, 0);
    return SpectralMatrix(rows, width, std::move(entries));
}

std::string format_csr(const SpectralMatrix& r) {
    std::string out;
    char buf[64];
    for (std::size_t b = 0; b < r.s0(); ++b) {
        for (std::size_t c = 0; c < r.s(); ++c) {
            // Shortest representation that parses back to the same double.
            const auto res = std::to_chars(buf, buf + sizeof(buf), r(b, c));
            if (c > 0) out += ',';
            out.append(buf, res.ptr);
        }
        out += '\n';
    }
    return out;
}

SpectralMatrix read_csr(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    try {
        return parse_csr(text);
    } catch (const ParseError& e) {
        throw ParseError(with_path(e.what(), path), e.line(), e.column());
    } catch (const RankError& e) {
        throw RankError(with_path(e.what(), path), e.smallest_singular_value());
    }
}

void write_csr(const SpectralMatrix& r, const std::filesystem::path& path) { write_text(format_csr(r), path); }

std::vector<unsigned char> encode_band_preview(const HsCube& cube, std::size_t band) {
    const auto plane = cube.band(band);
    const std::string header = "P5\n" + std::to_string(cube.cols()) + " " + std::to_string(cube.rows()) + "\n255\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    out.reserve(header.size() + plane.size());
    for (double v : plane) {
        out.push_back(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
    }
    return out;
}

void write_band_preview(const HsCube& cube, std::size_t band, const std::filesystem::path& path) {
    write_bytes(encode_band_preview(cube, band), path);
}

std::string format_metrics_row(const MetricsRow& row) {
    char buf[256];
    const MetricsRecord& m = row.metrics;
    std::snprintf(buf, sizeof(buf), ",%.3f,%.3f,%.3f,%.3f,%.3f", m.psnr, m.ssim, m.sam, m.ergas, m.rmse);
    return row.method + buf;
}

std::string format_metrics_table(std::span<const MetricsRow> rows) {
    std::string out = std::string(kMetricsHeader) + "\n";
    for (const auto& row : rows) out += format_metrics_row(row) + "\n";
    return out;
}

void write_metrics_table(std::span<const MetricsRow> rows, const std::filesystem::path& path) {
    write_text(format_metrics_table(rows), path);
}

void append_metrics_row(const MetricsRow& row, const std::filesystem::path& path) {
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw IoError(with_path("cannot open for appending", path));
    if (fresh) out << kMetricsHeader << '\n';
    out << format_metrics_row(row) << '\n';
    if (!out) throw IoError(with_path("write failed", path));
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(with_path("cannot open for reading", path));
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(with_path("read failed", path));
    return bytes;
}

void write_bytes(std::span<const unsigned char> bytes, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(with_path("cannot open for writing", path));
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(with_path("write failed", path));
}

std::string read_text(const std::filesystem::path& path) {
    const auto bytes = read_bytes(path);
    return std::string(bytes.begin(), bytes.end());
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    write_bytes(std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()), path);
}

}  // namespace tvtv
