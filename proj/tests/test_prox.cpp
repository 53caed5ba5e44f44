#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prox_oracle.hpp"
#include "tvtv/core.hpp"
#include "tvtv/prox.hpp"
#include "tvtv/synthetic.hpp"

#include <vector>

using namespace tvtv;

namespace {

// Subdifferential of f at u as an interval [lo, hi].
std::pair<double, double> subdifferential(const ScalarProxProblem& p, double u) {
    auto sgn_interval = [](double x) -> std::pair<double, double> {
        if (x > 0) return {1, 1};
        if (x < 0) return {-1, -1};
        return {-1, 1};
    };
    const auto [a_lo, a_hi] = sgn_interval(u);
    const auto [b_lo, b_hi] = sgn_interval(u - p.wbar);
    const double smooth = p.c + p.rho * u;
    return {a_lo + p.beta * b_lo + smooth, a_hi + p.beta * b_hi + smooth};
}

ScalarProxProblem random_problem(Rng& rng) {
    return {rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(0, 5), rng.uniform(0.01, 10)};
}

}  // namespace

TEST_CASE("scalar_u_min worked examples") {
    CHECK(scalar_u_min({0.0, 0.0, 2.0, 0.5}) == 0.0);
    CHECK(scalar_u_min({0.0, 1.0, 1.0, 1.0}) == 0.0);
    CHECK(scalar_u_min({-3.0, 1.0, 1.0, 1.0}) == 1.0);

    // Cross-check the examples against the brute-force oracle.
    for (auto p : {testing::ProxInstance{0, 1, 1, 1}, testing::ProxInstance{-3, 1, 1, 1}}) {
        const ScalarProxProblem q{p.c, p.wbar, p.beta, p.rho};
        CHECK(std::abs(prox_objective(q, testing::grid_golden_min(p)) - prox_objective(q, scalar_u_min(q))) <= 1e-9);
    }
}

TEST_CASE("scalar_u_min rejects non-positive rho") {
    CHECK_THROWS_AS(scalar_u_min({1.0, 0.0, 1.0, 0.0}), Error);
    CHECK_THROWS_AS(scalar_u_min({1.0, 0.0, 1.0, -1.0}), Error);
    CHECK_THROWS_AS(scalar_u_min({1.0, 0.0, -0.5, 1.0}), Error);
}

TEST_CASE("scalar_u_min agrees with the grid oracle on random draws") {
    Rng rng(2024);
    for (int k = 0; k < 1000; ++k) {
        const ScalarProxProblem p = random_problem(rng);
        const double u = scalar_u_min(p);
        const double u_ref = testing::grid_golden_min({p.c, p.wbar, p.beta, p.rho});
        CHECK(prox_objective(p, u) <= prox_objective(p, u_ref) + 1e-9);
        CHECK(std::abs(prox_objective(p, u) - prox_objective(p, u_ref)) <= 1e-9);
    }
}

TEST_CASE("zero lies in the subdifferential at the returned point") {
    Rng rng(77);
    for (int k = 0; k < 1000; ++k) {
        const ScalarProxProblem p = random_problem(rng);
        const double u = scalar_u_min(p);
        const auto [lo, hi] = subdifferential(p, u);
        CHECK(lo <= 1e-8);
        CHECK(hi >= -1e-8);
    }
}

TEST_CASE("beta = 0 reduces to soft thresholding") {
    Rng rng(5);
    for (int k = 0; k < 500; ++k) {
        const double c = rng.uniform(-10, 10);
        const double rho = rng.uniform(0.01, 10);
        const double wbar = rng.uniform(-10, 10);
        const double expect = -((c > 0) - (c < 0)) * std::max(std::abs(c) - 1.0, 0.0) / rho;
        CHECK(std::abs(scalar_u_min({c, wbar, 0.0, rho}) - expect) <= 1e-12);
    }
}

TEST_CASE("u_update is elementwise scalar_u_min") {
    std::vector<double> zero(10, 0.0), out(10, 5.0);
    u_update(zero, zero, zero, 1.0, 0.2, out);
    for (double v : out) CHECK(v == 0.0);

    std::vector<double> dv{0.3}, lam{-0.1}, wb{0.8}, one(1);
    u_update(dv, lam, wb, 1.5, 0.7, one);
    CHECK(one[0] == scalar_u_min({-0.1 - 0.7 * 0.3, 0.8, 1.5, 0.7}));

    std::vector<double> shorter(9);
    CHECK_THROWS_AS(u_update(shorter, zero, zero, 1.0, 0.2, out), DimensionError);
}

TEST_CASE("u_update matches the brute-force oracle elementwise") {
    Rng rng(99);
    const std::size_t n = 100;
    const double beta = 1.3, rho = 0.2;
    std::vector<double> dv(n), lam(n), wb(n), out(n);
    for (std::size_t k = 0; k < n; ++k) {
        dv[k] = rng.uniform(-3, 3);
        lam[k] = rng.uniform(-2, 2);
        wb[k] = rng.uniform(-3, 3);
    }
    u_update(dv, lam, wb, beta, rho, out);
    for (std::size_t k = 0; k < n; ++k) {
        const double u_ref = testing::grid_golden_min({lam[k] - rho * dv[k], wb[k], beta, rho});
        CHECK(std::abs(out[k] - u_ref) <= 1e-6);
    }
}
