#include <doctest.h>

#include <json.hpp>

#include <numbers>
#include <sstream>

#include "common.hpp"
#include "dnls/error.hpp"
#include "dnls/harness.hpp"

using namespace testing;
using dnls::ErrorKind;

namespace {

const Grid& grid() {
    static const Grid g(80.0, 2048);
    return g;
}

dnls::ExperimentConfig small_config(double eps) {
    dnls::ExperimentConfig c;
    c.L = 80.0;
    c.N = 2048;
    c.T = 0.2;
    c.evolver.T = c.T;
    c.perturbation.epsilon = eps;
    return c;
}

// A perturbation orthogonal to psi and to its tangent directions.
GridField orthogonal_perturbation(const GridField& psi, double eps) {
    GridField p = random_bumps(psi.grid(), 31);
    const GridField t1 = dnls::spectral_derivative(psi, 1), t2 = cplx(0.0, 1.0) * psi;
    for (const GridField& d : {psi, t1, t2}) p = p - (dnls::inner(p, d) / dnls::inner(d, d)) * d;
    // One Gram-Schmidt pass leaves a tiny overlap between psi and psi_x; repeat once.
    for (const GridField& d : {psi, t1, t2}) p = p - (dnls::inner(p, d) / dnls::inner(d, d)) * d;
    return (eps / dnls::l2_norm(p)) * p;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("orbital distance on and near the family") {
    const SpectralParam z(kZ0);
    const double t = 0.3;
    const GridField psi = dnls::soliton_field(z, t, grid());

    const auto on = dnls::orbital_distance(psi, z, t);
    CHECK(on.d < 1e-9);
    CHECK(std::abs(on.a) < 1e-6);
    CHECK(std::abs(on.b) < 1e-6);

    const auto moved = dnls::orbital_distance(dnls::translate_phase(psi, 0.7, 0.3), z, t);
    CHECK(moved.d < 1e-9);
    CHECK(moved.a == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(moved.b == doctest::Approx(0.3).epsilon(1e-6));

    const double eps = 1e-3;
    const GridField q = psi + orthogonal_perturbation(psi, eps);
    const auto near = dnls::orbital_distance(q, z, t);
    CHECK(near.d <= eps * (1.0 + 1e-3));

    // Equivariance.
    const auto shifted = dnls::orbital_distance(dnls::translate_phase(q, -1.2, 2.0), z, t);
    CHECK(std::abs(shifted.d - near.d) < 1e-9);
    CHECK(shifted.a == doctest::Approx(near.a - 1.2).epsilon(1e-6));
    CHECK(std::abs(dnls::wrap_phase(shifted.b - near.b - 2.0)) < 1e-6);
}

TEST_CASE("orbital distance against a dense brute-force grid") {
    const SpectralParam z(kZ0);
    const GridField psi = dnls::soliton_field(z, 0.0, grid());
    const GridField q = dnls::translate_phase(psi, 0.31, -0.8) + random_bumps(grid(), 90, 3e-3);
    const auto fit = dnls::orbital_distance(q, z, 0.0);
    const int n = 400;
    const double a0 = -1.0, a1 = 1.0, da = (a1 - a0) / (n - 1), db = 2.0 * std::numbers::pi / n;
    const double qq = std::pow(dnls::l2_norm(q), 2), pp = std::pow(dnls::l2_norm(psi), 2);
    double best = 1e300;
    for (int i = 0; i < n; ++i) {
        const cplx c = dnls::inner(q, dnls::translate_phase(psi, a0 + i * da, 0.0));
        for (int j = 0; j < n; ++j) {
            const double b = -std::numbers::pi + j * db;
            best = std::min(best, std::sqrt(std::max(0.0, qq + pp - 2.0 * (std::exp(cplx(0.0, -b)) * c).real())));
        }
    }
    CHECK(fit.d <= best + 1e-12);
    // Resolution: the worst corner of the grid cell around the optimum.
    double corner = 0.0;
    for (double sa : {-1.0, 1.0}) {
        for (double sb : {-1.0, 1.0}) {
            corner = std::max(corner, dnls::l2_norm(q - dnls::translate_phase(psi, fit.a + sa * da, fit.b + sb * db)));
        }
    }
    CHECK(best <= corner);
}

TEST_CASE("perturbation shapes") {
    const Grid& g = grid();
    dnls::PerturbationConfig p;
    p.epsilon = 1e-3;
    CHECK(dnls::l2_norm(dnls::make_perturbation(p, g)) == doctest::Approx(std::sqrt(2.0) * 1e-3).epsilon(1e-8));
    p.shape = dnls::PerturbationShape::Gaussian;
    CHECK(dnls::l2_norm(dnls::make_perturbation(p, g)) ==
          doctest::Approx(1e-3 * std::pow(std::numbers::pi, 0.25)).epsilon(1e-8));
    p.shape = dnls::PerturbationShape::RandomBandlimited;
    const GridField r1 = dnls::make_perturbation(p, g), r2 = dnls::make_perturbation(p, g);
    CHECK(max_diff(r1, r2) == 0.0);
    CHECK(dnls::l2_norm(r1) == doctest::Approx(std::sqrt(2.0) * 1e-3).epsilon(1e-8));
    p.seed = 2;
    CHECK(max_diff(dnls::make_perturbation(p, g), r1) > 0.0);
    p.epsilon = -1.0;
    CHECK_THROWS_AS(dnls::make_perturbation(p, g), dnls::Error);

    CHECK(dnls::parse_shape("sech") == dnls::PerturbationShape::Sech);
    CHECK(dnls::parse_shape("gaussian") == dnls::PerturbationShape::Gaussian);
    CHECK(dnls::parse_shape("random-bandlimited") == dnls::PerturbationShape::RandomBandlimited);
    CHECK(dnls::to_string(dnls::parse_shape("random")) == "random");
    CHECK_THROWS_AS(dnls::parse_shape("square"), dnls::Error);
}

TEST_CASE("configuration files") {
    std::istringstream def(dnls::default_config_text());
    const auto d = dnls::parse_config(def);
    const dnls::ExperimentConfig ref;
    CHECK(d.L == ref.L);
    CHECK(d.N == ref.N);
    CHECK(d.z0 == ref.z0);
    CHECK(d.evolver.dt == ref.evolver.dt);
    CHECK(d.shooting_substeps == ref.shooting_substeps);
    CHECK(d.perturbation.epsilon == ref.perturbation.epsilon);

    std::istringstream custom("[grid]\nL = 40\nN = 1024\n[perturbation]\nshape = gaussian\nepsilon = 2e-4\n"
                              "[experiment]\nz0_re = 0.8\nz0_im = 0.6\nT = 1\n");
    const auto c = dnls::parse_config(custom);
    CHECK(c.L == 40.0);
    CHECK(c.N == 1024);
    CHECK(c.perturbation.shape == dnls::PerturbationShape::Gaussian);
    CHECK(c.perturbation.epsilon == 2e-4);
    CHECK(c.z0 == cplx(0.8, 0.6));
    CHECK(c.evolver.T == 1.0);

    auto kind_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            (void)dnls::parse_config(in);
        } catch (const dnls::Error& e) {
            return e.kind();
        }
        return ErrorKind::Io;
    };
    CHECK(kind_of("[grid]\nLL = 3\n") == ErrorKind::Config);
    CHECK(kind_of("[mesh]\nL = 3\n") == ErrorKind::Config);
    CHECK(kind_of("[grid]\nL = abc\n") == ErrorKind::Config);
    CHECK(kind_of("[evolver]\ndealias = maybe\n") == ErrorKind::Config);
    CHECK(kind_of("[experiment]\nsample_interval = 0.00015\n") == ErrorKind::Config);
    CHECK(kind_of("[experiment]\nT = 0.25\n") == ErrorKind::Config);
    CHECK(kind_of("[grid]\nN = 1000\n") == ErrorKind::InvalidArgument);
    CHECK(kind_of("[experiment]\nz0_re = 1\nz0_im = 0\n") == ErrorKind::InvalidArgument);

    CHECK_THROWS_AS(dnls::load_config("/nonexistent/dnls.ini"), dnls::Error);
}

TEST_CASE("regression helpers") {
    const std::vector<double> x{1.0, 2.0, 4.0}, y{3.0, 6.0, 12.0};
    CHECK(dnls::fit_through_origin(x, y) == doctest::Approx(3.0));
    CHECK(dnls::loglog_slope(x, y) == doctest::Approx(1.0));
    const std::vector<double> sq{1.0, 4.0, 16.0};
    CHECK(dnls::loglog_slope(x, sq) == doctest::Approx(2.0));
    CHECK_THROWS_AS(dnls::loglog_slope({1.0}, {1.0}), dnls::Error);
}

TEST_CASE("pipeline on a small grid") {
    const auto rec = dnls::run_pipeline(small_config(1e-3));
    CHECK(rec.round_trip_error < 1e-7);
    CHECK(rec.samples.size() == 3);
    CHECK(rec.samples.front().t == 0.0);
    CHECK(rec.samples.back().t == doctest::Approx(0.2));
    CHECK(rec.max_control_mismatch < 1e-5);
    CHECK(rec.coefficients.fit_residual < 1e-6);
    CHECK(rec.max_residual < 1e-4);
    CHECK(rec.residual_ratio >= 3.5);
    CHECK(rec.residual_ratio <= 4.5);
    CHECK(rec.max_drift_mass < 1e-6);
    CHECK(rec.max_drift_energy < 1e-6);
    CHECK(rec.max_drift_momentum < 1e-6);
    for (const auto& s : rec.samples) {
        CHECK(s.d >= 0.0);
        CHECK(std::isfinite(s.d));
        CHECK(s.jost_boundary_error < 1e-6);
        CHECK(s.d <= s.up_proximity + 1e-12);
    }

    const auto j = nlohmann::json::parse(dnls::to_json(rec));
    CHECK(j["samples"].size() == 3);
    CHECK(j["z1"]["re"].get<double>() == rec.z1.real());
    CHECK(j.contains("round_trip_error"));

    std::ostringstream csv;
    dnls::write_csv(csv, rec);
    std::istringstream lines(csv.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "t,d,a,b,M,E,P,residual");
    int rows = 0;
    for (std::string l; std::getline(lines, l);) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("unperturbed pipeline stays on the soliton") {
    const auto rec = dnls::run_pipeline(small_config(0.0));
    CHECK(std::abs(rec.z1 - kZ0) < 1e-8);
    for (const auto& s : rec.samples) CHECK(s.d < 1e-8);
}

TEST_CASE("sweep") {
    CHECK_THROWS_AS(dnls::sweep({}), dnls::Error);

    const auto single = dnls::sweep({small_config(1e-3)});
    REQUIRE(single.entries.size() == 1);
    REQUIRE(single.entries[0].record);
    const auto direct = dnls::run_pipeline(small_config(1e-3));
    CHECK(single.entries[0].record->sup_distance == direct.sup_distance);
    CHECK(single.summary.succeeded == 1);

    // A failing entry is recorded without stopping the others.
    // A perturbation of amplitude 5 is far outside the validity region.
    auto bad_data = small_config(5.0);
    const auto mixed = dnls::sweep({small_config(5e-4), bad_data, small_config(1e-3)}, 2);
    REQUIRE(mixed.entries.size() == 3);
    CHECK(mixed.entries[0].record);
    CHECK(!mixed.entries[1].record);
    CHECK(!mixed.entries[1].error.empty());
    CHECK(mixed.entries[2].record);
    CHECK(mixed.summary.succeeded == 2);
    CHECK(mixed.summary.loglog_slope == doctest::Approx(1.0).epsilon(0.2));
    const auto js = nlohmann::json::parse(dnls::to_json(mixed));
    CHECK(js["runs"].size() == 3);
    CHECK(js["runs"][1].contains("error"));
}

}
