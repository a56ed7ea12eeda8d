#include "dnls/lax.hpp"

#include <cmath>

#include "dnls/error.hpp"

namespace dnls {

namespace {

const cplx I{0.0, 1.0};

std::vector<cplx> vec(std::span<const cplx> s) { return {s.begin(), s.end()}; }

}  // namespace

LaxX build_x(const GridField& q, const SpectralParam& p) {
    const std::size_t n = q.size();
    const cplx z = p.z(), d = -I * p.z2();
    std::vector<cplx> m11(n, d), m12(n), m21(n), m22(n, -d);
    for (std::size_t k = 0; k < n; ++k) {
        m12[k] = z * q[k];
        m21[k] = -z * std::conj(q[k]);
    }
    return {MatrixField(q.grid(), std::move(m11), std::move(m12), std::move(m21), std::move(m22))};
}

LaxTTerms build_t_terms(const GridField& q, const SpectralParam& p) {
    const GridField qx = spectral_derivative(q, 1);
    const std::size_t n = q.size();
    const cplx z = p.z(), z2 = p.z2(), z3 = z2 * z;
    std::vector<cplx> c12(n), c21(n), d11(n), d22(n), g12(n), g21(n), p12(n), p21(n), zero(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx qk = q[k], qb = std::conj(qk);
        const double a2 = std::norm(qk);
        c12[k] = 2.0 * z3 * qk;
        c21[k] = -2.0 * z3 * qb;
        d11[k] = I * z2 * a2;
        d22[k] = -I * z2 * a2;
        g12[k] = I * z * qx[k];
        g21[k] = I * z * std::conj(qx[k]);
        p12[k] = -z * a2 * qk;
        p21[k] = z * a2 * qb;
    }
    const Grid& g = q.grid();
    return {MatrixField(g, zero, std::move(c12), std::move(c21), zero),
            MatrixField(g, std::move(d11), zero, zero, std::move(d22)),
            MatrixField(g, zero, std::move(g12), std::move(g21), zero),
            MatrixField(g, zero, std::move(p12), std::move(p21), zero)};
}

LaxT build_t(const GridField& q, const GridField& qx, const SpectralParam& p) {
    require_same_grid(q.grid(), qx.grid(), "build_t");
    const std::size_t n = q.size();
    const cplx z = p.z(), z2 = p.z2(), z3 = z2 * z, w = -2.0 * I * p.z4();
    std::vector<cplx> m11(n), m12(n), m21(n), m22(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx qk = q[k], qb = std::conj(qk);
        const double a2 = std::norm(qk);
        m11[k] = w + I * z2 * a2;
        m22[k] = -w - I * z2 * a2;
        m12[k] = 2.0 * z3 * qk + I * z * qx[k] - z * a2 * qk;
        m21[k] = -2.0 * z3 * qb + I * z * std::conj(qx[k]) + z * a2 * qb;
    }
    return {MatrixField(q.grid(), std::move(m11), std::move(m12), std::move(m21), std::move(m22))};
}

LaxT build_t(const GridField& q, const SpectralParam& z) { return build_t(q, spectral_derivative(q, 1), z); }

double zero_curvature_residual(std::span<const GridField> q_series, double dt, const SpectralParam& z) {
    if (q_series.size() < 3) fail(ErrorKind::InvalidArgument, "zero_curvature_residual needs at least 3 slices");
    if (!(dt > 0.0)) fail(ErrorKind::InvalidArgument, "zero_curvature_residual needs dt > 0");
    const std::size_t mid = q_series.size() / 2;
    const GridField& q = q_series[mid];
    const GridField& qm = q_series[mid - 1];
    const GridField& qp = q_series[mid + 1];
    require_same_grid(qm.grid(), qp.grid(), "zero_curvature_residual");
    require_same_grid(q.grid(), qp.grid(), "zero_curvature_residual");

    const auto T = build_t(q, z).entries;
    const auto X = build_x(q, z).entries;
    const Grid& g = q.grid();
    auto dx = [&](std::span<const cplx> s) { return spectral_derivative(GridField(g, vec(s)), 1); };
    const GridField t11 = dx(T.m11()), t12 = dx(T.m12()), t21 = dx(T.m21()), t22 = dx(T.m22());

    // Only the off-diagonal entries of X depend on t.
    const cplx zz = z.z();
    double worst = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const cplx dq = (qp[k] - qm[k]) / (2.0 * dt);
        const cplx xt12 = zz * dq, xt21 = -zz * std::conj(dq);
        const cplx a11 = T.m11()[k], a12 = T.m12()[k], a21 = T.m21()[k], a22 = T.m22()[k];
        const cplx b11 = X.m11()[k], b12 = X.m12()[k], b21 = X.m21()[k], b22 = X.m22()[k];
        const cplx c11 = a11 * b11 + a12 * b21 - (b11 * a11 + b12 * a21);
        const cplx c12 = a11 * b12 + a12 * b22 - (b11 * a12 + b12 * a22);
        const cplx c21 = a21 * b11 + a22 * b21 - (b21 * a11 + b22 * a21);
        const cplx c22 = a21 * b12 + a22 * b22 - (b21 * a12 + b22 * a22);
        const cplx r11 = t11[k] + c11, r22 = t22[k] + c22;
        const cplx r12 = t12[k] - xt12 + c12, r21 = t21[k] - xt21 + c21;
        const double fro = std::sqrt(std::norm(r11) + std::norm(r12) + std::norm(r21) + std::norm(r22));
        worst = std::max(worst, fro);
    }
    return worst;
}

}  // namespace dnls
