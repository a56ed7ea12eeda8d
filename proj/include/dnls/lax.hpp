#pragma once

#include <span>

#include "dnls/field.hpp"
#include "dnls/soliton.hpp"

namespace dnls {

/// X(q, z) = -i z^2 sigma3 + z [[0, q], [-conj q, 0]] on the grid.
struct LaxX {
    MatrixField entries;
};

/// T(q, z) = -2 i z^4 sigma3 + V(q, z) on the grid.
struct LaxT {
    MatrixField entries;
};

/// The four pieces of V kept apart so their individual symmetries can be checked.
struct LaxTTerms {
    MatrixField cubic;       ///< 2 z^3 [[0, q], [-conj q, 0]]
    MatrixField diagonal;    ///< i z^2 |q|^2 sigma3
    MatrixField derivative;  ///< i z [[0, q_x], [conj q_x, 0]]
    MatrixField quintic;     ///< -z |q|^2 [[0, q], [-conj q, 0]]
};

LaxX build_x(const GridField& q, const SpectralParam& z);
LaxT build_t(const GridField& q, const SpectralParam& z);
/// Same as build_t but with a precomputed q_x.
LaxT build_t(const GridField& q, const GridField& qx, const SpectralParam& z);
LaxTTerms build_t_terms(const GridField& q, const SpectralParam& z);

/// max over x of the Frobenius norm of d_x T - d_t X + [T, X] at the middle
/// slice of q_series (at least three slices spaced dt apart). The time
/// derivative is a centred difference of the two neighbouring slices.
double zero_curvature_residual(std::span<const GridField> q_series, double dt, const SpectralParam& z);

}  // namespace dnls
