#include <doctest.h>

#include "common.hpp"
#include "dnls/error.hpp"
#include "dnls/spectral.hpp"

using namespace testing;
using dnls::ErrorKind;

namespace {

const Grid& grid() {
    static const Grid g(80.0, 4096);
    return g;
}

VectorField sigma1_conj(const VectorField& v) {
    std::vector<cplx> a(v.size()), b(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        a[k] = std::conj(v.comp2()[k]);
        b[k] = std::conj(v.comp1()[k]);
    }
    return VectorField(v.grid(), a, b);
}

// Remove the component along phi so the result is orthogonal to it.
VectorField project_out(const VectorField& w, const VectorField& phi) {
    const cplx c = dnls::inner(w, phi) / dnls::inner(phi, phi);
    return w - c * phi;
}

VectorField bump_pair(const Grid& g, unsigned seed) {
    const GridField a = random_bumps(g, seed), b = random_bumps(g, seed + 1000);
    return VectorField(g, {a.values().begin(), a.values().end()}, {b.values().begin(), b.values().end()});
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("eigenvalue of the exact soliton") {
    const SpectralParam z(kZ0);
    const GridField psi = dnls::soliton_field(z, 0.0, grid());
    const auto eig = dnls::find_eigenvalue(psi, SpectralParam(cplx(1.01, 0.49)));
    CHECK(std::abs(eig.z1.z() - kZ0) < 1e-8);
    CHECK(eig.evans_residual < 1e-12);
    CHECK(eig.iterations <= 50);

    const VectorField phi1 = dnls::fundamental_column1_field(eig.z1, grid());
    CHECK(std::abs(dnls::inner(eig.eigenvector - phi1, phi1)) < 1e-10);

    // Decay of the matched eigenvector.
    double peak = 0.0;
    for (std::size_t k = 0; k < grid().size(); ++k) {
        peak = std::max({peak, std::abs(eig.eigenvector.comp1()[k]), std::abs(eig.eigenvector.comp2()[k])});
    }
    for (double x : {-20.0, 20.0}) {
        const auto k = static_cast<std::size_t>((x + 40.0) / grid().spacing());
        CHECK(std::abs(eig.eigenvector.comp1()[k]) < 1e-6 * peak);
        CHECK(std::abs(eig.eigenvector.comp2()[k]) < 1e-6 * peak);
    }
}

TEST_CASE("evans symmetry z -> -z") {
    const GridField psi = dnls::soliton_field(SpectralParam(kZ0), 0.0, grid());
    const auto plus = dnls::find_eigenvalue(psi, SpectralParam(cplx(1.01, 0.49)));
    CHECK(std::abs(dnls::evans_function(psi, -plus.z1.z())) < 1e-10);
    CHECK(std::abs(dnls::evans_function(psi, -cplx(1.01, 0.49))) ==
          doctest::Approx(std::abs(dnls::evans_function(psi, cplx(1.01, 0.49)))).epsilon(1e-8));

    // From -z the data is e^{i pi} psi^{-z}; the eigenvector is sigma3 Phi^{-z}_1, which has no
    // projection on Phi^{-z}_1, so the normalization is reported as degenerate.
    try {
        (void)dnls::find_eigenvalue(psi, SpectralParam(cplx(-1.01, -0.49)));
        FAIL("expected an error");
    } catch (const dnls::Error& e) {
        CHECK(e.kind() == ErrorKind::Degenerate);
    }
}

TEST_CASE("zero potential has no eigenvalue") {
    try {
        (void)dnls::find_eigenvalue(GridField::zeros(grid()), SpectralParam(kZ0));
        FAIL("expected an error");
    } catch (const dnls::Error& e) {
        CHECK(e.kind() == ErrorKind::NoEigenvalue);
    }
}

TEST_CASE("eigenvalue shift is linear in the perturbation") {
    const SpectralParam z0(kZ0);
    std::vector<double> shift, vec;
    for (double eps : {1e-3, 5e-4}) {
        const auto eig = dnls::find_eigenvalue(perturbed_soliton(grid(), eps), z0);
        shift.push_back(std::abs(eig.z1.z() - kZ0));
        vec.push_back(dnls::l2_norm(eig.eigenvector - dnls::fundamental_column1_field(eig.z1, grid())));
    }
    CHECK(shift[0] / shift[1] == doctest::Approx(2.0).epsilon(0.25));
    CHECK(vec[0] / vec[1] == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("normalize_eigenvector") {
    const SpectralParam z(kZ0);
    const VectorField phi1 = dnls::fundamental_column1_field(z, grid());
    CHECK(max_diff(dnls::normalize_eigenvector(phi1, z), phi1) < 1e-12);
    CHECK(max_diff(dnls::normalize_eigenvector(cplx(0.0, 2.7) * phi1, z), phi1) < 1e-12);
    const VectorField orth = project_out(bump_pair(grid(), 3), phi1);
    try {
        (void)dnls::normalize_eigenvector(orth, z);
        FAIL("expected an error");
    } catch (const dnls::Error& e) {
        CHECK(e.kind() == ErrorKind::Degenerate);
    }
}

TEST_CASE("linearized operator annihilates the eigenvector") {
    const SpectralParam z(kZ0);
    const auto op = dnls::LinearizedOperator::at_soliton(z, grid());
    const VectorField phi1 = dnls::fundamental_column1_field(z, grid());
    CHECK(dnls::l2_norm(op.apply(phi1)) < 1e-8);
}

TEST_CASE("solve_inhomogeneous") {
    const SpectralParam z(kZ0);
    const auto op = dnls::LinearizedOperator::at_soliton(z, grid());
    const VectorField phi1 = dnls::fundamental_column1_field(z, grid());
    const VectorField zero(grid(), std::vector<cplx>(grid().size()), std::vector<cplx>(grid().size()));
    CHECK(dnls::l2_norm(dnls::solve_inhomogeneous(zero, z)) == 0.0);

    SUBCASE("manufactured solution") {
        const VectorField wstar = project_out(bump_pair(grid(), 8), phi1);
        const VectorField h = op.apply(wstar);
        const VectorField w = dnls::solve_inhomogeneous(h, z);
        CHECK(dnls::l2_norm(w - wstar) < 1e-6);
        CHECK(dnls::l2_norm(op.apply(w) - h) < 1e-6);
        CHECK(std::abs(dnls::inner(w, phi1)) < 1e-8);
    }

    SUBCASE("cokernel direction is rejected") {
        try {
            (void)dnls::solve_inhomogeneous(sigma1_conj(phi1), z);
            FAIL("expected an error");
        } catch (const dnls::Error& e) {
            CHECK(e.kind() == ErrorKind::Solvability);
        }
    }

    SUBCASE("linearity") {
        const VectorField h1 = op.apply(project_out(bump_pair(grid(), 30), phi1));
        const VectorField h2 = op.apply(project_out(bump_pair(grid(), 31), phi1));
        const cplx alpha(0.3, -1.2), beta(-2.0, 0.5);
        const VectorField lhs = dnls::solve_inhomogeneous(alpha * h1 + beta * h2, z);
        const VectorField rhs = alpha * dnls::solve_inhomogeneous(h1, z) + beta * dnls::solve_inhomogeneous(h2, z);
        CHECK(dnls::l2_norm(lhs - rhs) < 1e-8);
    }
}

}
