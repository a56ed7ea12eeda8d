#include <doctest.h>

#include "common.hpp"
#include "dnls/backlund.hpp"
#include "dnls/error.hpp"
#include "dnls/evolve.hpp"
#include "dnls/jost.hpp"

using namespace testing;
using dnls::ErrorKind;

namespace {

const Grid& grid() {
    static const Grid g(80.0, 2048);
    return g;
}

std::vector<cplx> det(const dnls::MatrixField& m) {
    std::vector<cplx> d(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) d[k] = m.m11()[k] * m.m22()[k] - m.m12()[k] * m.m21()[k];
    return d;
}

// sup |mu11 - 1| + ||mu21||_2 at t = 0.
double deviation(const dnls::MatrixField& m) {
    double s = 0.0;
    for (const cplx& v : m.m11()) s = std::max(s, std::abs(v - 1.0));
    return s + dnls::l2_norm(m.column(1).component(2));
}

}  // namespace

TEST_SUITE("jost") {

TEST_CASE("zero potential gives the identity") {
    const auto sol = dnls::jost_initial(GridField::zeros(grid()), SpectralParam(kZ0));
    CHECK(sol.iterations == 0);
    CHECK(sol.boundary_error == 0.0);
    const auto id = dnls::MatrixField::identity(grid());
    CHECK(max_diff(sol.mu.column(1), id.column(1)) == 0.0);
    CHECK(max_diff(sol.mu.column(2), id.column(2)) == 0.0);
}

TEST_CASE("solution of the x-equation with linear bounds") {
    const SpectralParam z(kZ0);
    const GridField q = random_bumps(grid(), 5, 1e-2);
    const auto sol = dnls::jost_initial(q, z);
    CHECK(sol.contraction_norm < 1.0);
    CHECK(sol.boundary_error < 1e-12);
    CHECK(dnls::jost_x_residual(sol.mu, q, z) < 1e-5);

    const auto half = dnls::jost_initial(0.5 * q, z);
    CHECK(deviation(sol.mu) / deviation(half.mu) == doctest::Approx(2.0).epsilon(0.25));

    // Liouville: det is x-independent and equals a(z) = 1 + O(q^2).
    const auto d = det(sol.mu);
    for (const cplx& v : d) CHECK(std::abs(v - d[0]) < 1e-8);
    CHECK(std::abs(d[0] - 1.0) < 1e-3);
}

TEST_CASE("large potentials are outside the contraction regime") {
    const SpectralParam z(kZ0);
    const GridField big = 3.0 * dnls::soliton_field(z, 0.0, grid());
    try {
        (void)dnls::jost_initial(big, z);
        FAIL("expected an error");
    } catch (const dnls::Error& e) {
        CHECK((e.kind() == ErrorKind::Contraction || e.kind() == ErrorKind::NoConvergence));
    }
    CHECK_THROWS_AS(dnls::jost_initial(GridField::zeros(grid()), z, 0.0), dnls::Error);
}

TEST_CASE("evolution for a vanishing small field") {
    const SpectralParam z(kZ0);
    const double dt = 1e-3;
    std::vector<dnls::Snapshot> series;
    for (int j = 0; j <= 20; ++j) series.push_back({j * dt, GridField::zeros(grid())});
    const auto mu0 = dnls::jost_initial(series[0].q, z);
    const auto checks = dnls::jost_evolve(series, mu0, z, dt);
    REQUIRE(checks.size() == series.size());
    const cplx i{0.0, 1.0};
    for (const auto& c : checks) {
        const cplx e = std::exp(-2.0 * i * z.z4() * c.solution.t);
        CHECK(std::abs(c.solution.mu.m11()[100] - e) < 1e-10 * std::abs(e));
        CHECK(std::abs(c.solution.mu.m22()[100] - 1.0 / e) < 1e-10 * std::abs(1.0 / e));
        CHECK(c.solution.boundary_error < 1e-10);
        // The up-transform of the evolved matrix is the soliton at that time.
        const auto Q = dnls::bt_up(series[0].q, c.solution.mu, {}, z).q;
        CHECK(max_diff(Q, dnls::soliton_field(z, c.solution.t, grid())) < 1e-8);
    }
}

TEST_CASE("evolution alongside a small DNLS solution") {
    const SpectralParam z(kZ0);
    const GridField q0 = random_bumps(grid(), 9, 1e-3);
    dnls::EvolverConfig cfg;
    cfg.dt = 1e-4;
    cfg.T = 0.2;
    cfg.store_every = 1;
    const auto series = dnls::evolve(q0, cfg);
    const auto mu0 = dnls::jost_initial(q0, z);
    const auto checks = dnls::jost_evolve(series, mu0, z, cfg.dt);
    REQUIRE(!checks.empty());
    const auto d0 = det(mu0.mu);
    for (const auto& c : checks) {
        CHECK(c.x_residual < 1e-5);
        CHECK(c.mismatch < 1e-5);
        CHECK(c.solution.boundary_error < 1e-6);
        const auto d = det(c.solution.mu);
        CHECK(std::abs(d[grid().size() / 2] - d0[grid().size() / 2]) < 1e-6);
    }
    CHECK(checks.back().solution.t == doctest::Approx(0.2));

    // The step-by-step interface agrees with the series driver.
    dnls::JostEvolver ev(mu0, z);
    for (std::size_t j = 0; j + 2 < series.size(); j += 2) ev.advance(series[j].q, series[j + 1].q, series[j + 2].q, 2 * cfg.dt);
    const auto last = ev.checkpoint(series.back().q);
    CHECK(last.mismatch < 1e-5);
}

TEST_CASE("desynchronized fields are detected") {
    const SpectralParam z(kZ0);
    const GridField q0 = random_bumps(grid(), 9, 1e-2);
    const auto mu0 = dnls::jost_initial(q0, z);
    dnls::JostEvolver ev(mu0, z);
    const GridField other = random_bumps(grid(), 77, 1e-2);
    ev.advance(q0, q0, q0, 1e-3);
    CHECK_THROWS_AS(ev.checkpoint(other), dnls::Error);
}

TEST_CASE("boundary error measure") {
    const SpectralParam z(kZ0);
    const auto id = dnls::MatrixField::identity(grid());
    CHECK(dnls::jost_boundary_error(id, z, 0.0) == 0.0);
    CHECK(dnls::jost_boundary_error(id, z, 0.5) > 0.1);
    const auto at = dnls::jost_at(GridField::zeros(grid()), z, 0.5);
    CHECK(at.boundary_error < 1e-15);
}

}
