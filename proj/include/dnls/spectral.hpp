#pragma once

#include "dnls/field.hpp"
#include "dnls/soliton.hpp"

namespace dnls {

struct EigenResult {
    SpectralParam z1;
    VectorField eigenvector;
    double evans_residual = 0.0;
    int iterations = 0;
};

struct EigenOptions {
    double tol = 1e-12;
    int max_iterations = 50;
    /// RK4 substeps per grid cell in the shooting integration.
    int substeps = 4;
};

/// L(z) = sigma3 d_x + i z^2 - z [[0, psi], [conj psi, 0]], applied spectrally.
struct LinearizedOperator {
    SpectralParam z;
    GridField potential;

    static LinearizedOperator at_soliton(const SpectralParam& z, const Grid& grid);
    VectorField apply(const VectorField& w) const;
};

/// Evans function E(z) = det[m_L(0), m_R(0)] of the Jost-normalized shooting
/// solutions launched from both ends of the grid. E(-z) = -E(z).
cplx evans_function(const GridField& q, cplx z, int substeps = 4);

EigenResult find_eigenvalue(const GridField& q0, const SpectralParam& z_guess, const EigenOptions& opts = {});

/// c * phi with <c phi - Phi1, Phi1> = 0, Phi1 the decaying soliton column at z1.
VectorField normalize_eigenvector(const VectorField& phi, const SpectralParam& z1);

/// Solves L(z1) w = h with <w, Phi1> = 0, for h orthogonal to sigma1 conj(Phi1).
VectorField solve_inhomogeneous(const VectorField& h, const SpectralParam& z1);

}  // namespace dnls
