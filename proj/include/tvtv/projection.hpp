#pragma once

#include "tvtv/core.hpp"
#include "tvtv/operators.hpp"

#include <cstddef>
#include <vector>

namespace tvtv {

// Projection onto {X : X R = Y}. Precomputes G = (R^T R)^{-1} R^T once;
// each pixel spectrum p becomes p - (p R - y) G.
class SpectralProjector {
public:
    explicit SpectralProjector(const SpectralMatrix& r);

    const SpectralMatrix& matrix() const noexcept { return r_; }

    HsCube project(const HsCube& p, const HsCube& y, std::size_t workers = 1) const;
    void project_in_place(HsCube& x, const HsCube& y, std::size_t workers = 1) const;

private:
    SpectralMatrix r_;
    std::vector<double> g_;  // s x s0, row-major
};

// P + B^2 A^T (Z - A P): every B x B block is shifted by the gap between
// its target mean and its current mean.
HsCube project_onto_A(const HsCube& p, const HsCube& z, const BlockAverage& a);
void project_onto_A_in_place(HsCube& x, const HsCube& z, const BlockAverage& a, std::size_t workers = 1);

HsCube project_onto_R(const HsCube& p, const HsCube& y, const SpectralMatrix& r);

// ||Z R - A Y||_inf. Zero exactly when both measurements can come from a
// common high-resolution cube.
double consistency_residual(const HsCube& z, const HsCube& y, const BlockAverage& a, const SpectralMatrix& r);

// Relative threshold used by auto mode: exact when
// residual <= kConsistencyTol * max(1, ||Z||_inf).
inline constexpr double kConsistencyTol = 1e-8;

class DykstraError : public Error {
public:
    DykstraError(const std::string& msg, double residual_a, double residual_r)
        : Error(msg), residual_a_(residual_a), residual_r_(residual_r) {}
    double residual_a() const noexcept { return residual_a_; }
    double residual_r() const noexcept { return residual_r_; }

private:
    double residual_a_;
    double residual_r_;
};

struct ProjectionOptions {
    ProjectionMode mode = ProjectionMode::Auto;
    int dykstra_iters = 200;
    double dykstra_tol = 1e-9;
    std::size_t workers = 1;
};

// Projection onto {AX = Z} ∩ {XR = Y}, bound to fixed measurements.
//
// Exact mode composes the two single-constraint projectors. A acts on the
// spatial index and R on the spectral one, so their linear parts commute
// and the composition is the intersection projection whenever the data is
// consistent (ZR = AY).
//
// Dykstra mode alternates R then A with correction terms until the
// per-sweep change drops below dykstra_tol. It always ends on the A
// projection, so AX = Z holds on return. With inconsistent data the
// intersection is empty and the result is the projection onto the
// A-feasible points nearest to {XR = Y}.
class JointProjector {
public:
    JointProjector(HsCube z, HsCube y, const BlockAverage& a, const SpectralMatrix& r, ProjectionOptions options);

    // Mode actually used (auto already resolved).
    ProjectionMode mode() const noexcept { return resolved_; }
    double consistency() const noexcept { return consistency_; }
    const BlockAverage& block_average() const noexcept { return a_; }
    const SpectralProjector& spectral() const noexcept { return spectral_; }
    const HsCube& z() const noexcept { return z_; }
    const HsCube& y() const noexcept { return y_; }

    HsCube project(const HsCube& p) const;

    // Sweeps used by the most recent Dykstra projection (1 in exact mode).
    int last_sweeps() const noexcept { return last_sweeps_; }

    double residual_a(const HsCube& x) const;
    double residual_r(const HsCube& x) const;

private:
    HsCube z_;
    HsCube y_;
    BlockAverage a_;
    SpectralProjector spectral_;
    ProjectionOptions options_;
    ProjectionMode resolved_;
    double consistency_;
    mutable int last_sweeps_ = 0;
};

struct ProjectionProblem {
    HsCube p;
    HsCube z;
    HsCube y;
    BlockAverage a;
    SpectralMatrix r;
    ProjectionOptions options;
};

HsCube project_joint(const ProjectionProblem& problem);

// Constraint residuals ||AX - Z||_inf and ||XR - Y||_inf.
double constraint_residual_a(const HsCube& x, const HsCube& z, const BlockAverage& a);
double constraint_residual_r(const HsCube& x, const HsCube& y, const SpectralMatrix& r);

}  // namespace tvtv
