#include "tvtv/projection.hpp"

#include "tvtv/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tvtv {

namespace {

void check_projection_shapes(const HsCube& p, const HsCube& z, const HsCube& y, const BlockAverage& a,
                             const SpectralMatrix& r) {
    if (p.rows() != a.in_rows() || p.cols() != a.in_cols() || p.bands() != r.s0()) {
        throw DimensionError("projection point is " + p.shape_string() + ", expected " + std::to_string(a.in_rows()) +
                             "x" + std::to_string(a.in_cols()) + "x" + std::to_string(r.s0()));
    }
    if (z.rows() != a.out_rows() || z.cols() != a.out_cols() || z.bands() != r.s0()) {
        throw DimensionError("low-resolution cube is " + z.shape_string() + ", expected " +
                             std::to_string(a.out_rows()) + "x" + std::to_string(a.out_cols()) + "x" +
                             std::to_string(r.s0()));
    }
    if (y.rows() != a.in_rows() || y.cols() != a.in_cols() || y.bands() != r.s()) {
        throw DimensionError("multispectral cube is " + y.shape_string() + ", expected " +
                             std::to_string(a.in_rows()) + "x" + std::to_string(a.in_cols()) + "x" +
                             std::to_string(r.s()));
    }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace

SpectralProjector::SpectralProjector(const SpectralMatrix& r) : r_(r) {
    const auto s0 = static_cast<Eigen::Index>(r.s0());
    const auto s = static_cast<Eigen::Index>(r.s());
    Eigen::MatrixXd rm(s0, s);
    for (Eigen::Index i = 0; i < s0; ++i)
        for (Eigen::Index j = 0; j < s; ++j) rm(i, j) = r(static_cast<std::size_t>(i), static_cast<std::size_t>(j));

    const Eigen::MatrixXd gram = rm.transpose() * rm;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        std::ostringstream os;
        os << "R^T R is not positive definite (smallest singular value of R " << r.min_singular_value() << ")";
        throw RankError(os.str(), r.min_singular_value());
    }
    const Eigen::MatrixXd g = llt.solve(rm.transpose());
    g_.resize(static_cast<std::size_t>(s * s0));
    for (Eigen::Index c = 0; c < s; ++c)
        for (Eigen::Index b = 0; b < s0; ++b) g_[static_cast<std::size_t>(c * s0 + b)] = g(c, b);
}

void SpectralProjector::project_in_place(HsCube& x, const HsCube& y, std::size_t workers) const {
    if (x.bands() != r_.s0() || y.bands() != r_.s() || x.rows() != y.rows() || x.cols() != y.cols()) {
        throw DimensionError("spectral projection: point " + x.shape_string() + " and target " + y.shape_string() +
                             " incompatible with " + std::to_string(r_.s0()) + "x" + std::to_string(r_.s()) +
                             " response");
    }
    const std::size_t s0 = r_.s0();
    const std::size_t s = r_.s();
    const std::size_t n = x.plane_size();
    const std::size_t rows = x.rows();
    const std::size_t cols = x.cols();
    auto xd = x.data();
    auto yd = y.data();
    parallel_for(rows, workers, [&](std::size_t i) {
        std::vector<double> gap(s);
        for (std::size_t j = 0; j < cols; ++j) {
            const std::size_t p = i * cols + j;
            for (std::size_t c = 0; c < s; ++c) {
                double acc = -yd[c * n + p];
                for (std::size_t b = 0; b < s0; ++b) acc += xd[b * n + p] * r_(b, c);
                gap[c] = acc;
            }
            for (std::size_t b = 0; b < s0; ++b) {
                double corr = 0.0;
                for (std::size_t c = 0; c < s; ++c) corr += gap[c] * g_[c * s0 + b];
                xd[b * n + p] -= corr;
            }
        }
    });
}

HsCube SpectralProjector::project(const HsCube& p, const HsCube& y, std::size_t workers) const {
    HsCube out = p;
    project_in_place(out, y, workers);
    return out;
}

void project_onto_A_in_place(HsCube& x, const HsCube& z, const BlockAverage& a, std::size_t workers) {
    if (x.rows() != a.in_rows() || x.cols() != a.in_cols() || z.rows() != a.out_rows() || z.cols() != a.out_cols() ||
        x.bands() != z.bands()) {
        throw DimensionError("block projection: point " + x.shape_string() + " and target " + z.shape_string() +
                             " incompatible with block " + std::to_string(a.block()));
    }
    const std::size_t b = a.block();
    const std::size_t cols = x.cols();
    const std::size_t ocols = a.out_cols();
    const double scale = 1.0 / static_cast<double>(b * b);
    parallel_for(x.bands(), workers, [&](std::size_t s) {
        auto plane = x.band(s);
        auto target = z.band(s);
        for (std::size_t bi = 0; bi < a.out_rows(); ++bi) {
            for (std::size_t bj = 0; bj < ocols; ++bj) {
                double sum = 0.0;
                for (std::size_t di = 0; di < b; ++di) {
                    const double* row = plane.data() + (bi * b + di) * cols + bj * b;
                    for (std::size_t dj = 0; dj < b; ++dj) sum += row[dj];
                }
                const double shift = target[bi * ocols + bj] - sum * scale;
                for (std::size_t di = 0; di < b; ++di) {
                    double* row = plane.data() + (bi * b + di) * cols + bj * b;
                    for (std::size_t dj = 0; dj < b; ++dj) row[dj] += shift;
                }
            }
        }
    });
}

HsCube project_onto_A(const HsCube& p, const HsCube& z, const BlockAverage& a) {
    HsCube out = p;
    project_onto_A_in_place(out, z, a);
    return out;
}

HsCube project_onto_R(const HsCube& p, const HsCube& y, const SpectralMatrix& r) {
    return SpectralProjector(r).project(p, y);
}

double consistency_residual(const HsCube& z, const HsCube& y, const BlockAverage& a, const SpectralMatrix& r) {
    const HsCube zr = csr_apply(z, r);
    const HsCube ay = block_avg_apply(y, a);
    require_same_shape(zr, ay, "consistency_residual");
    return max_abs_diff(zr.data(), ay.data());
}

double constraint_residual_a(const HsCube& x, const HsCube& z, const BlockAverage& a) {
    const HsCube ax = block_avg_apply(x, a);
    require_same_shape(ax, z, "constraint_residual_a");
    return max_abs_diff(ax.data(), z.data());
}

double constraint_residual_r(const HsCube& x, const HsCube& y, const SpectralMatrix& r) {
    const HsCube xr = csr_apply(x, r);
    require_same_shape(xr, y, "constraint_residual_r");
    return max_abs_diff(xr.data(), y.data());
}

JointProjector::JointProjector(HsCube z, HsCube y, const BlockAverage& a, const SpectralMatrix& r,
                               ProjectionOptions options)
    : z_(std::move(z)), y_(std::move(y)), a_(a), spectral_(r), options_(options) {
    if (options_.dykstra_iters <= 0) throw Error("dykstra_iters must be positive");
    if (!(options_.dykstra_tol > 0.0)) throw Error("dykstra_tol must be positive");
    const HsCube probe(a.in_rows(), a.in_cols(), r.s0());
    check_projection_shapes(probe, z_, y_, a_, r);
    consistency_ = consistency_residual(z_, y_, a_, r);
    resolved_ = options_.mode;
    if (resolved_ == ProjectionMode::Auto) {
        const double bound = kConsistencyTol * std::max(1.0, max_abs(z_.data()));
        resolved_ = consistency_ <= bound ? ProjectionMode::Exact : ProjectionMode::Dykstra;
    }
}

double JointProjector::residual_a(const HsCube& x) const { return constraint_residual_a(x, z_, a_); }

double JointProjector::residual_r(const HsCube& x) const {
    return constraint_residual_r(x, y_, spectral_.matrix());
}

HsCube JointProjector::project(const HsCube& p) const {
    check_projection_shapes(p, z_, y_, a_, spectral_.matrix());
    const std::size_t workers = options_.workers;

    if (resolved_ == ProjectionMode::Exact) {
        HsCube x = p;
        spectral_.project_in_place(x, y_, workers);
        project_onto_A_in_place(x, z_, a_, workers);
        last_sweeps_ = 1;
        return x;
    }

    // Dykstra: y = P_R(x + p); p += x - y; x' = P_A(y + q); q += y - x'.
    HsCube x = p;
    HsCube corr_r(p.rows(), p.cols(), p.bands());
    HsCube corr_a(p.rows(), p.cols(), p.bands());
    HsCube mid = p;
    HsCube next = p;
    const std::size_t n = p.size();
    for (int sweep = 1; sweep <= options_.dykstra_iters; ++sweep) {
        auto xd = x.data();
        auto md = mid.data();
        auto crd = corr_r.data();
        for (std::size_t k = 0; k < n; ++k) md[k] = xd[k] + crd[k];
        spectral_.project_in_place(mid, y_, workers);
        for (std::size_t k = 0; k < n; ++k) crd[k] = xd[k] + crd[k] - md[k];

        auto nd = next.data();
        auto cad = corr_a.data();
        for (std::size_t k = 0; k < n; ++k) nd[k] = md[k] + cad[k];
        project_onto_A_in_place(next, z_, a_, workers);
        for (std::size_t k = 0; k < n; ++k) cad[k] = md[k] + cad[k] - nd[k];

        const double change = max_abs_diff(nd, xd);
        std::swap(x, next);
        if (change < options_.dykstra_tol) {
            last_sweeps_ = sweep;
            return x;
        }
    }
    last_sweeps_ = options_.dykstra_iters;
    const double ra = residual_a(x);
    const double rr = residual_r(x);
    std::ostringstream os;
    os << "Dykstra projection did not converge in " << options_.dykstra_iters << " sweeps (residual A " << ra
       << ", residual R " << rr << ")";
    throw DykstraError(os.str(), ra, rr);
}

HsCube project_joint(const ProjectionProblem& problem) {
    const JointProjector projector(problem.z, problem.y, problem.a, problem.r, problem.options);
    return projector.project(problem.p);
}

}  // namespace tvtv
