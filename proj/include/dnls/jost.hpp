#pragma once

#include <vector>

#include "dnls/evolve.hpp"
#include "dnls/field.hpp"
#include "dnls/soliton.hpp"

namespace dnls {

/// Jost matrix mu(t, .) with columns normalized to (e^{-2iz^4 t}, 0) at the
/// left edge and (0, e^{2iz^4 t}) at the right edge.
struct JostSolution {
    double t = 0.0;
    MatrixField mu;
    /// Estimated operator norm of the Volterra map (ratio of successive Picard updates).
    double contraction_norm = 0.0;
    /// Largest relative deviation of the edge values from their prescribed limits.
    double boundary_error = 0.0;
    int iterations = 0;
};

/// Solves the two Volterra equations at time 0 by Picard iteration:
///   mu_11 = 1 + int_{-L/2}^x z q mu_21,  mu_21 = -int_{-L/2}^x e^{2iz^2(x-s)} z conj(q) mu_11,
/// and the mirror pair for the second column from x = +L/2. The oscillatory
/// kernel is integrated exactly against a cubic interpolant of the rest.
JostSolution jost_initial(const GridField& q, const SpectralParam& z, double tol = 1e-13);

/// Same Volterra solution with columns scaled to the time-t normalization.
JostSolution jost_at(const GridField& q, const SpectralParam& z, double t, double tol = 1e-13);

/// Largest relative edge deviation of mu from its prescribed limits at time t.
double jost_boundary_error(const MatrixField& mu, const SpectralParam& z, double t);

/// Relative residual of mu_x = -i z^2 [sigma3, mu] + U(q, z) mu on |x| <= L/4,
/// each column measured against its own sup norm.
double jost_x_residual(const MatrixField& mu, const GridField& q, const SpectralParam& z);

struct JostEvolveOptions {
    /// Base tolerance; the x-equation residual must stay below 10 * tol.
    double tol = 1e-6;
    double boundary_tol = 1e-6;
    /// Bound on the relative mismatch between the evolved columns and fresh Volterra columns.
    double mismatch_tol = 1e-5;
    /// Re-anchor the evolved columns to the fresh Volterra solution at each checkpoint.
    bool resync = true;
    double volterra_tol = 1e-13;
};

/// Diagnostics recorded at a checkpoint.
struct JostCheck {
    JostSolution solution;
    double x_residual = 0.0;
    double mismatch = 0.0;
};

/// Pointwise RK4 integration of d_t mu = T(q, z) mu alongside an evolving q.
class JostEvolver {
public:
    JostEvolver(const JostSolution& initial, const SpectralParam& z, JostEvolveOptions opts = {});

    /// One RK4 step of size `step` using q at the start, midpoint and end of the step.
    void advance(const GridField& q_start, const GridField& q_mid, const GridField& q_end, double step);
    /// Verify the current state against q(t) and, if enabled, re-anchor it.
    JostCheck checkpoint(const GridField& q_now);

    double time() const noexcept { return t_; }
    MatrixField mu() const;

private:
    SpectralParam z_;
    JostEvolveOptions opts_;
    Grid grid_;
    double t_;
    std::vector<cplx> m11_, m12_, m21_, m22_;
};

/// Evolves mu0 along a uniformly spaced series of q-slices (spacing dt). RK4
/// midpoints use cubic interpolation in time; every slice is a checkpoint.
std::vector<JostCheck> jost_evolve(const std::vector<Snapshot>& q_series, const JostSolution& mu0,
                                   const SpectralParam& z, double dt, const JostEvolveOptions& opts = {});

}  // namespace dnls
