#include "tvtv/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tvtv {

namespace {

void require_finite(std::span<const double> values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k])) {
            throw Error("non-finite value at flat index " + std::to_string(k));
        }
    }
}

}  // namespace

Plane::Plane(std::size_t r, std::size_t c, std::vector<double> v) : rows(r), cols(c), values(std::move(v)) {
    if (values.size() != rows * cols) {
        throw DimensionError("plane data length " + std::to_string(values.size()) + " does not match " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    }
}

HsCube::HsCube(std::size_t rows, std::size_t cols, std::size_t bands)
    : rows_(rows), cols_(cols), bands_(bands) {
    if (rows == 0 || cols == 0 || bands == 0) {
        throw DimensionError("cube dimensions must be positive, got " + shape_string());
    }
    data_.assign(rows * cols * bands, 0.0);
}

HsCube::HsCube(std::size_t rows, std::size_t cols, std::size_t bands, std::vector<double> data)
    : rows_(rows), cols_(cols), bands_(bands), data_(std::move(data)) {
    if (rows == 0 || cols == 0 || bands == 0) {
        throw DimensionError("cube dimensions must be positive, got " + shape_string());
    }
    if (data_.size() != rows * cols * bands) {
        throw DimensionError("cube data length " + std::to_string(data_.size()) + " does not match " +
                             shape_string());
    }
    require_finite(data_);
}

std::span<double> HsCube::band(std::size_t s) {
    if (s >= bands_) {
        throw DimensionError("band index " + std::to_string(s) + " out of range for " + shape_string());
    }
    return std::span<double>(data_).subspan(s * plane_size(), plane_size());
}

std::span<const double> HsCube::band(std::size_t s) const {
    if (s >= bands_) {
        throw DimensionError("band index " + std::to_string(s) + " out of range for " + shape_string());
    }
    return std::span<const double>(data_).subspan(s * plane_size(), plane_size());
}

std::string HsCube::shape_string() const {
    std::ostringstream os;
    os << rows_ << "x" << cols_ << "x" << bands_;
    return os.str();
}

PlaneView band_view(HsCube& cube, std::size_t s) {
    return {cube.rows(), cube.cols(), cube.band(s)};
}

ConstPlaneView band_view(const HsCube& cube, std::size_t s) {
    return {cube.rows(), cube.cols(), cube.band(s)};
}

HsCube assemble(std::span<const Plane> planes) {
    if (planes.empty()) {
        throw DimensionError("assemble: no planes given");
    }
    const std::size_t rows = planes.front().rows;
    const std::size_t cols = planes.front().cols;
    std::vector<double> data;
    data.reserve(rows * cols * planes.size());
    for (std::size_t k = 0; k < planes.size(); ++k) {
        const Plane& p = planes[k];
        if (p.rows != rows || p.cols != cols || p.values.size() != rows * cols) {
            throw DimensionError("assemble: plane " + std::to_string(k) + " is " + std::to_string(p.rows) + "x" +
                                 std::to_string(p.cols) + ", expected " + std::to_string(rows) + "x" +
                                 std::to_string(cols));
        }
        data.insert(data.end(), p.values.begin(), p.values.end());
    }
    return HsCube(rows, cols, planes.size(), std::move(data));
}

HsCube clamp01(const HsCube& cube) {
    HsCube out = cube;
    for (double& v : out.data()) {
        v = std::clamp(v, 0.0, 1.0);
    }
    return out;
}

void require_same_shape(const HsCube& a, const HsCube& b, const char* what) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(what) + ": shape mismatch " + a.shape_string() + " vs " + b.shape_string());
    }
}

double max_abs(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double smallest_singular_value(std::span<const double> row_major, std::size_t rows, std::size_t cols) {
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row_major[i * cols + j];
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) {
        return 0.0;
    }
    // Fewer rows than columns means some singular values are structurally zero.
    if (rows < cols) {
        return 0.0;
    }
    return sv(sv.size() - 1);
}

SpectralMatrix::SpectralMatrix(std::size_t s0, std::size_t s, std::vector<double> entries)
    : s0_(s0), s_(s), entries_(std::move(entries)) {
    if (s0 == 0 || s == 0) {
        throw DimensionError("spectral matrix dimensions must be positive");
    }
    if (s > s0) {
        throw DimensionError("spectral matrix must have at most as many output channels as input bands, got " +
                             std::to_string(s0) + "x" + std::to_string(s));
    }
    if (entries_.size() != s0 * s) {
        throw DimensionError("spectral matrix entry count " + std::to_string(entries_.size()) + " does not match " +
                             std::to_string(s0) + "x" + std::to_string(s));
    }
    require_finite(entries_);
    min_singular_ = smallest_singular_value(entries_, s0, s);
    if (!(min_singular_ > kMinSingularValue)) {
        std::ostringstream os;
        os << "spectral matrix is rank deficient (smallest singular value " << min_singular_ << ")";
        throw RankError(os.str(), min_singular_);
    }
}

const char* to_string(ProjectionMode mode) {
    switch (mode) {
        case ProjectionMode::Auto: return "auto";
        case ProjectionMode::Exact: return "exact";
        case ProjectionMode::Dykstra: return "dykstra";
    }
    return "unknown";
}

ProjectionMode parse_projection_mode(const std::string& text) {
    if (text == "auto") return ProjectionMode::Auto;
    if (text == "exact") return ProjectionMode::Exact;
    if (text == "dykstra") return ProjectionMode::Dykstra;
    throw Error("unknown projection mode '" + text + "' (expected auto, exact or dykstra)");
}

void SolverConfig::validate() const {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error("beta must be a finite value >= 0");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw Error("rho must be a finite value > 0");
    if (max_iters <= 0) throw Error("max_iters must be positive");
    if (!(residual_tol > 0.0)) throw Error("residual_tol must be positive");
    if (block == 0) throw Error("block must be positive");
    if (dykstra_iters <= 0) throw Error("dykstra_iters must be positive");
    if (!(dykstra_tol > 0.0)) throw Error("dykstra_tol must be positive");
}

}  // namespace tvtv
