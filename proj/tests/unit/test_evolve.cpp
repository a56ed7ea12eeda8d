#include <doctest.h>

#include "common.hpp"
#include "dnls/error.hpp"
#include "dnls/evolve.hpp"
#include "dnls/harness.hpp"

using namespace testing;
using dnls::ErrorKind;

namespace {

GridField run(const GridField& q0, double dt, double T, bool dealias = true) {
    dnls::EvolverConfig cfg;
    cfg.dt = dt;
    cfg.T = T;
    cfg.dealias = dealias;
    cfg.store_every = 1000000;
    return dnls::evolve(q0, cfg).back().q;
}

double relative_drift(double a, double b) { return std::abs(a - b) / (std::abs(a) + 1.0); }

}  // namespace

TEST_SUITE("evolve") {

TEST_CASE("configuration checks") {
    const Grid g(80.0, 4096);
    dnls::EvolverConfig cfg;
    CHECK_NOTHROW(cfg.validate(g));
    CHECK(cfg.step_guidance(g) == doctest::Approx(0.5 * std::pow(80.0 / (M_PI * 4096), 2)));
    cfg.enforce_step_guidance = true;
    CHECK_THROWS_AS(cfg.validate(g), dnls::Error);
    cfg = {};
    cfg.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(g), dnls::Error);
    cfg = {};
    cfg.store_every = 0;
    CHECK_THROWS_AS(cfg.validate(g), dnls::Error);
}

TEST_CASE("zero stays zero") {
    const Grid g(20.0, 128);
    CHECK(dnls::max_abs(run(GridField::zeros(g), 1e-3, 0.1)) == 0.0);
}

TEST_CASE("soliton is reproduced") {
    const Grid g(80.0, 4096);
    const SpectralParam z(kZ0);
    const double T = 0.25;
    const GridField q = run(dnls::soliton_field(z, 0.0, g), 1e-4, T);
    CHECK(l2_diff(q, dnls::soliton_field(z, T, g)) < 1e-6);

    // The Evolver class and the snapshot driver agree, and times are exact multiples of dt.
    dnls::EvolverConfig cfg;
    cfg.dt = 1e-4;
    cfg.T = 3e-4;
    dnls::Evolver ev(dnls::soliton_field(z, 0.0, g), cfg);
    ev.advance(3);
    const auto snaps = dnls::evolve(dnls::soliton_field(z, 0.0, g), cfg);
    REQUIRE(snaps.size() == 4);
    CHECK(snaps.back().t == doctest::Approx(3e-4));
    CHECK(max_diff(ev.state(), snaps.back().q) == 0.0);
    CHECK(max_diff(dnls::step(snaps[0].q, cfg), snaps[1].q) == 0.0);
}

TEST_CASE("fourth-order convergence") {
    const Grid g(80.0, 1024);
    const GridField q0 = dnls::soliton_field(SpectralParam(kZ0), 0.0, g);
    const double dt = 4e-3, T = 0.5;
    const GridField ref = run(q0, dt / 8, T);
    const double e1 = l2_diff(run(q0, dt, T), ref);
    const double e2 = l2_diff(run(q0, dt / 2, T), ref);
    CHECK(e1 / e2 >= 12.0);
    CHECK(e1 / e2 <= 20.0);
}

TEST_CASE("backward steps undo forward steps") {
    const Grid g(80.0, 1024);
    const GridField q0 = dnls::soliton_field(SpectralParam(kZ0), 0.0, g);
    dnls::EvolverConfig fwd;
    fwd.dt = 2.5e-4;
    dnls::Evolver ev(q0, fwd);
    ev.advance(50);
    dnls::EvolverConfig back = fwd;
    back.dt = -2.5e-4;
    dnls::Evolver rev(ev.state(), back, ev.time());
    rev.advance(50);
    CHECK(std::abs(rev.time()) < 1e-12);
    CHECK(l2_diff(rev.state(), q0) < 1e-8);
}

TEST_CASE("conserved quantities") {
    const Grid g(80.0, 4096);
    const auto c0 = dnls::conserved(GridField::zeros(g));
    CHECK(c0.mass == 0.0);
    CHECK(c0.energy == 0.0);
    CHECK(c0.momentum == 0.0);

    const GridField f = random_bumps(g, 12);
    CHECK(std::abs(dnls::conserved(f).mass - dnls::conserved(dnls::translate_phase(f, 1.3, 0.4)).mass) < 1e-10);

    const SpectralParam z(kZ0);
    const GridField psi = dnls::soliton_field(z, 0.0, g);
    const auto a = dnls::conserved(psi);
    CHECK(a.mass > 0.0);
    const auto b = dnls::conserved(run(psi, 1e-4, 0.25));
    CHECK(std::abs(a.mass - b.mass) / a.mass < 1e-7);
    CHECK(relative_drift(a.energy, b.energy) < 1e-7);
    CHECK(relative_drift(a.momentum, b.momentum) < 1e-7);
    // The exact solution conserves them too.
    const auto e = dnls::conserved(dnls::soliton_field(z, 0.7, g));
    CHECK(std::abs(a.mass - e.mass) / a.mass < 1e-10);
    CHECK(relative_drift(a.energy, e.energy) < 1e-9);
    CHECK(relative_drift(a.momentum, e.momentum) < 1e-9);
}

TEST_CASE("mass of small data over a long horizon") {
    const Grid g(80.0, 512);
    GridField q = random_bumps(g, 4);
    q = (0.1 / dnls::l2_norm(q)) * q;
    const double m0 = dnls::conserved(q).mass;
    const double m1 = dnls::conserved(run(q, 1e-3, 5.0)).mass;
    CHECK(std::abs(m1 - m0) / m0 < 1e-8);
}

TEST_CASE("symmetries of the flow") {
    const Grid g(80.0, 1024);
    const GridField q = dnls::soliton_field(SpectralParam(kZ0), 0.0, g) + random_bumps(g, 14, 1e-2);
    const double a = 1.7, b = -0.6;
    const GridField one = dnls::translate_phase(run(q, 1e-3, 0.2), a, b);
    const GridField two = run(dnls::translate_phase(q, a, b), 1e-3, 0.2);
    CHECK(l2_diff(one, two) < 1e-8);

    const GridField small = random_bumps(g, 15, 0.05);
    CHECK(l2_diff(run(small, 1e-3, 0.5, true), run(small, 1e-3, 0.5, false)) < 1e-9);
}

TEST_CASE("blow-up is reported") {
    const Grid g(20.0, 128);
    const GridField huge = random_bumps(g, 2, 1e110);
    try {
        (void)run(huge, 1e-3, 0.01);
        FAIL("expected an error");
    } catch (const dnls::Error& e) {
        CHECK(e.kind() == ErrorKind::NonFinite);
    }
}

TEST_CASE("rescale") {
    const Grid g(80.0, 4096);
    const SpectralParam z(kZ0);
    const GridField psi = dnls::soliton_field(z, 0.0, g);
    const GridField same = dnls::rescale(psi, 1.0);
    CHECK(same.grid() == g);
    CHECK(max_diff(same, psi) == 0.0);

    const GridField r = dnls::rescale(random_bumps(g, 3), 2.0);
    CHECK(r.grid().length() == doctest::Approx(40.0));
    CHECK(std::abs(dnls::l2_norm(r) - dnls::l2_norm(random_bumps(g, 3))) < 1e-10);

    const double lambda = 2.0;
    const GridField scaled = dnls::rescale(psi, lambda);
    CHECK(dnls::orbital_distance(scaled, SpectralParam(kZ0 * std::sqrt(lambda)), 0.0).d < 1e-6);
    CHECK_THROWS_AS(dnls::rescale(psi, 0.0), dnls::Error);
}

}
