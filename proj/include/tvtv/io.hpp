#pragma once

#include "tvtv/core.hpp"
#include "tvtv/metrics.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tvtv {

class IoError : public Error {
public:
    using Error::Error;
};

class BadMagicError : public IoError {
public:
    using IoError::IoError;
};

class TruncatedError : public IoError {
public:
    using IoError::IoError;
};

class ZeroDimensionError : public IoError {
public:
    using IoError::IoError;
};

// Parse failure in a text file; line and column are 1-based.
class ParseError : public IoError {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : IoError(msg), line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// HSC1 layout, all little-endian:
//   offset  0  "HSC1"
//   offset  4  u32 rows, u32 cols, u32 bands
//   offset 16  rows*cols*bands IEEE-754 binary32, band-major, row-major
// Values are narrowed to binary32 on write.
std::vector<unsigned char> encode_hsc(const HsCube& cube);
HsCube decode_hsc(std::span<const unsigned char> bytes);

void write_hsc(const HsCube& cube, const std::filesystem::path& path);
HsCube read_hsc(const std::filesystem::path& path);

// CSR text: one line per source band, comma-separated channel weights.
SpectralMatrix parse_csr(const std::string& text);
std::string format_csr(const SpectralMatrix& r);
SpectralMatrix read_csr(const std::filesystem::path& path);
void write_csr(const SpectralMatrix& r, const std::filesystem::path& path);

// Binary PGM (P5) of one band: byte = round(clamp01(v) * 255), ties away
// from zero.
std::vector<unsigned char> encode_band_preview(const HsCube& cube, std::size_t band);
void write_band_preview(const HsCube& cube, std::size_t band, const std::filesystem::path& path);

struct MetricsRow {
    std::string method;
    MetricsRecord metrics;
};

inline constexpr const char* kMetricsHeader = "method,psnr,ssim,sam,ergas,rmse";

std::string format_metrics_row(const MetricsRow& row);
std::string format_metrics_table(std::span<const MetricsRow> rows);
void write_metrics_table(std::span<const MetricsRow> rows, const std::filesystem::path& path);
// Appends one row, writing the header first when the file is new or empty.
void append_metrics_row(const MetricsRow& row, const std::filesystem::path& path);

std::vector<unsigned char> read_bytes(const std::filesystem::path& path);
void write_bytes(std::span<const unsigned char> bytes, const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace tvtv
