#pragma once

#include <utility>

#include "dnls/field.hpp"
#include "dnls/soliton.hpp"
#include "dnls/spectral.hpp"

namespace dnls {

struct BTInput {
    GridField q;
    VectorField phi;
    SpectralParam z;
};

/// Result of the Bäcklund map: new potential and the pushed-forward eigenvector.
struct BTOutput {
    GridField q;
    VectorField phi;
};

/// Superposition weights c_j = e^{a_j + i b_j}.
struct Coefficients {
    double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
    /// Relative weighted residual of the least-squares fit that produced them (0 if given).
    double fit_residual = 0.0;

    cplx c1() const;
    cplx c2() const;
};

struct ModulationPrediction {
    double shift = 0.0;
    double phase = 0.0;
};

/// Pointwise Bäcklund map
///   q1 = R^2 [-q + 2i(z^2 - conj z^2) Phi1 conj Phi2 / (z|Phi2|^2 + conj z |Phi1|^2)],
///   R  = (z|Phi2|^2 + conj z |Phi1|^2) / (z|Phi1|^2 + conj z |Phi2|^2),
/// with Phi^(1) = (conj Phi2 / (z|Phi1|^2 + conj z|Phi2|^2), conj Phi1 / (conj z|Phi1|^2 + z|Phi2|^2)).
/// Applying it twice returns q.
BTOutput bt_forward(const BTInput& input);

struct DownTransform {
    GridField q1;
    VectorField phi1;
    /// ||q1|| / ||q0 - psi^{z1}_0||, the measured smallness ratio (0 when q0 is exactly the soliton).
    double ratio = 0.0;
};

DownTransform bt_down(const GridField& q0, const EigenResult& eig);

/// nu = c1 e^{-i z^2 x} mu_1 + c2 e^{i z^2 x} mu_2 on the grid.
VectorField superpose(const MatrixField& mu, const Coefficients& coeffs, const SpectralParam& z1);

/// Q = BT(q1_t, nu) with nu built from the Jost matrix at the same time.
BTOutput bt_up(const GridField& q1_t, const MatrixField& mu, const Coefficients& coeffs, const SpectralParam& z1);

/// shift = (a1 - a2) / (2 eta), phase = b1 - b2 + xi (a1 - a2) / eta reduced to (-pi, pi].
ModulationPrediction predict_modulation(const Coefficients& coeffs, const SpectralParam& z1);

/// Weighted least squares for phi1 = c1 e^{-i z^2 x} mu_1 + c2 e^{i z^2 x} mu_2.
/// Rows are weighted by 1/|phi1(x)| so every grid point counts in relative terms.
Coefficients match_coefficients(const VectorField& phi1, const MatrixField& mu0, const SpectralParam& z1,
                                double max_residual = 1e-6);

/// Reduce an angle to (-pi, pi].
double wrap_phase(double b);

}  // namespace dnls
