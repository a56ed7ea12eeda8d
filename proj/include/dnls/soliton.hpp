#pragma once

#include <array>

#include "dnls/field.hpp"

namespace dnls {

/// Spectral parameter z with xi = Re z^2, eta = Im z^2. Inputs with eta < 0
/// are replaced by conj(z) so that eta > 0 always holds; eta == 0 is rejected.
class SpectralParam {
public:
    explicit SpectralParam(cplx z);

    cplx z() const noexcept { return z_; }
    cplx z2() const noexcept { return z_ * z_; }
    cplx z4() const noexcept { return z2() * z2(); }
    double xi() const noexcept { return z2().real(); }
    double eta() const noexcept { return z2().imag(); }

private:
    cplx z_;
};

/// Member e^{ib} psi^z(t, x + a) of the soliton orbit.
struct SolitonParams {
    SpectralParam z;
    double shift = 0.0;
    double phase = 0.0;
};

/// Row-major 2x2 complex matrix.
using Mat2 = std::array<cplx, 4>;

/// Closed-form 1-soliton psi^z(t, x); evaluated in a rescaled form that
/// cannot overflow for any x.
cplx soliton(const SpectralParam& z, double t, double x);

/// psi^z(t, .) sampled on the grid.
GridField soliton_field(const SpectralParam& z, double t, const Grid& grid);

/// e^{ib} psi^z(t, x_k + a) sampled on the grid.
GridField soliton_family(const SolitonParams& p, double t, const Grid& grid);

/// Decaying column (Phi_11, Phi_21) of the fundamental matrix at the soliton
/// potential psi^z(0, .). Safe for every x.
std::array<cplx, 2> fundamental_column1(const SpectralParam& z, double x);

/// Full fundamental matrix {Phi_11, Phi_12, Phi_21, Phi_22}. The second column
/// grows like e^{eta |x|}; |x| eta > 700 raises an Overflow error. det = -1.
Mat2 fundamental_matrix(const SpectralParam& z, double x);

/// Decaying column on the grid.
VectorField fundamental_column1_field(const SpectralParam& z, const Grid& grid);

}  // namespace dnls
