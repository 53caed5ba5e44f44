#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvtv {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shape disagreement between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Single band of a cube, row-major.
template <typename T>
struct BasicPlaneView {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::span<T> values;

    T& operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

using PlaneView = BasicPlaneView<double>;
using ConstPlaneView = BasicPlaneView<const double>;

// Owning row-major image plane.
struct Plane {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Plane() = default;
    Plane(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
    Plane(std::size_t r, std::size_t c, std::vector<double> v);

    ConstPlaneView view() const { return {rows, cols, values}; }
};

// ============================================================================
// HsCube - dense hyperspectral cube
// ============================================================================
// Memory layout is band-major, row-major within each band:
//   data[s * rows * cols + i * cols + j]
// so every band is a contiguous plane. The same flattening is used by all
// operators and by the HSC1 file format.
// ============================================================================
class HsCube {
public:
    HsCube() = default;

    // Zero-filled cube. Every dimension must be positive.
    HsCube(std::size_t rows, std::size_t cols, std::size_t bands);

    // Takes ownership of band-major data; throws if the length does not
    // match or any entry is non-finite.
    HsCube(std::size_t rows, std::size_t cols, std::size_t bands, std::vector<double> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t bands() const noexcept { return bands_; }
    std::size_t plane_size() const noexcept { return rows_ * cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    double& operator()(std::size_t i, std::size_t j, std::size_t s) {
        return data_[(s * rows_ + i) * cols_ + j];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t s) const {
        return data_[(s * rows_ + i) * cols_ + j];
    }

    // Contiguous band storage; throws on an out-of-range index.
    std::span<double> band(std::size_t s);
    std::span<const double> band(std::size_t s) const;

    bool same_shape(const HsCube& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_ && bands_ == other.bands_;
    }

    std::string shape_string() const;

    bool operator==(const HsCube&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t bands_ = 0;
    std::vector<double> data_;
};

// Mutable view of band s; writes through the view land in the cube.
PlaneView band_view(HsCube& cube, std::size_t s);
ConstPlaneView band_view(const HsCube& cube, std::size_t s);

// Stacks equally-sized planes into a cube, plane k becoming band k.
HsCube assemble(std::span<const Plane> planes);

// Clips every entry to [0, 1]. Used on final outputs only.
HsCube clamp01(const HsCube& cube);

// Throws DimensionError with `what` as context when shapes differ.
void require_same_shape(const HsCube& a, const HsCube& b, const char* what);

// Max absolute entry; 0 for an empty cube.
double max_abs(std::span<const double> values);

// ============================================================================
// SpectralMatrix - camera spectral response R (s0 x s)
// ============================================================================
// Row index is the source band, column index the output channel. Entries are
// stored row-major. Construction enforces s <= s0 and full column rank
// (smallest singular value above kMinSingularValue).
// ============================================================================
class RankError : public Error {
public:
    RankError(const std::string& msg, double smallest_singular_value)
        : Error(msg), smallest_singular_value_(smallest_singular_value) {}
    double smallest_singular_value() const noexcept { return smallest_singular_value_; }

private:
    double smallest_singular_value_;
};

class SpectralMatrix {
public:
    static constexpr double kMinSingularValue = 1e-12;

    SpectralMatrix(std::size_t s0, std::size_t s, std::vector<double> entries);

    std::size_t s0() const noexcept { return s0_; }
    std::size_t s() const noexcept { return s_; }
    double operator()(std::size_t band, std::size_t channel) const { return entries_[band * s_ + channel]; }
    std::span<const double> entries() const noexcept { return entries_; }

    // Smallest singular value, computed at construction.
    double min_singular_value() const noexcept { return min_singular_; }

    bool operator==(const SpectralMatrix& o) const { return s0_ == o.s0_ && s_ == o.s_ && entries_ == o.entries_; }

private:
    std::size_t s0_;
    std::size_t s_;
    std::vector<double> entries_;
    double min_singular_ = 0.0;
};

// Smallest singular value of a row-major rows x cols matrix.
double smallest_singular_value(std::span<const double> row_major, std::size_t rows, std::size_t cols);

enum class ProjectionMode { Auto, Exact, Dykstra };

const char* to_string(ProjectionMode mode);
ProjectionMode parse_projection_mode(const std::string& text);

struct SolverConfig {
    double beta = 1.0;
    double rho = 0.2;
    int max_iters = 120;
    double residual_tol = 1e-3;
    std::size_t block = 32;
    bool parallel_bands = false;
    // Worker-count hint used when parallel_bands is set; 0 picks the
    // hardware concurrency.
    std::size_t threads = 0;
    ProjectionMode projection_mode = ProjectionMode::Auto;
    int dykstra_iters = 200;
    double dykstra_tol = 1e-9;
    // Clip the returned cube to [0,1]. Off by default: clipping can break
    // the measurement constraints.
    bool clamp_output = false;

    // Throws tvtv::Error naming the first invalid field.
    void validate() const;
};

}  // namespace tvtv
