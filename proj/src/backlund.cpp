#include "dnls/backlund.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dnls/error.hpp"

namespace dnls {

namespace {

const cplx I{0.0, 1.0};
constexpr double kUnderflow = 1e-300;

}  // namespace

cplx Coefficients::c1() const { return std::exp(cplx(a1, b1)); }
cplx Coefficients::c2() const { return std::exp(cplx(a2, b2)); }

double wrap_phase(double b) {
    const double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(b, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    if (r > std::numbers::pi) r -= two_pi;
    return r;
}

BTOutput bt_forward(const BTInput& in) {
    require_same_grid(in.q.grid(), in.phi.grid(), "bt_forward");
    const cplx z = in.z.z(), zb = std::conj(z);
    const cplx lead = 2.0 * I * (z * z - zb * zb);
    const std::size_t n = in.q.size();
    auto p1 = in.phi.comp1(), p2 = in.phi.comp2();
    std::vector<cplx> q1(n), f1(n), f2(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s1 = std::norm(p1[k]), s2 = std::norm(p2[k]);
        const cplx d_a = z * s1 + zb * s2;  // z|Phi1|^2 + conj z |Phi2|^2
        const cplx d_b = z * s2 + zb * s1;  // z|Phi2|^2 + conj z |Phi1|^2
        if (std::abs(d_a) < kUnderflow || std::abs(d_b) < kUnderflow) {
            std::ostringstream os;
            os << "bt_forward: degenerate eigenvector at grid point " << k;
            fail(ErrorKind::Degenerate, os.str());
        }
        const cplx R = d_b / d_a;
        q1[k] = R * R * (-in.q[k] + lead * p1[k] * std::conj(p2[k]) / d_b);
        f1[k] = std::conj(p2[k]) / d_a;
        f2[k] = std::conj(p1[k]) / std::conj(d_a);
    }
    const Grid& g = in.q.grid();
    return {GridField(g, std::move(q1)), VectorField(g, std::move(f1), std::move(f2))};
}

DownTransform bt_down(const GridField& q0, const EigenResult& eig) {
    auto out = bt_forward({q0, eig.eigenvector, eig.z1});
    const double dist = l2_norm(q0 - soliton_field(eig.z1, 0.0, q0.grid()));
    const double ratio = dist > 0.0 ? l2_norm(out.q) / dist : 0.0;
    return {std::move(out.q), std::move(out.phi), ratio};
}

VectorField superpose(const MatrixField& mu, const Coefficients& coeffs, const SpectralParam& z1) {
    const Grid& g = mu.grid();
    const std::size_t n = g.size();
    const cplx c1 = coeffs.c1(), c2 = coeffs.c2(), z2 = z1.z2();
    std::vector<cplx> v1(n), v2(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = g.x(k);
        const cplx e1 = c1 * std::exp(-I * z2 * x), e2 = c2 * std::exp(I * z2 * x);
        v1[k] = e1 * mu.m11()[k] + e2 * mu.m12()[k];
        v2[k] = e1 * mu.m21()[k] + e2 * mu.m22()[k];
    }
    return VectorField(g, std::move(v1), std::move(v2));
}

BTOutput bt_up(const GridField& q1_t, const MatrixField& mu, const Coefficients& coeffs, const SpectralParam& z1) {
    require_same_grid(q1_t.grid(), mu.grid(), "bt_up");
    if (!std::isfinite(coeffs.a1) || !std::isfinite(coeffs.a2) || !std::isfinite(coeffs.b1) ||
        !std::isfinite(coeffs.b2)) {
        fail(ErrorKind::InvalidArgument, "bt_up: coefficients must be finite");
    }
    return bt_forward({q1_t, superpose(mu, coeffs, z1), z1});
}

ModulationPrediction predict_modulation(const Coefficients& c, const SpectralParam& z1) {
    const double da = c.a1 - c.a2;
    return {da / (2.0 * z1.eta()), wrap_phase(c.b1 - c.b2 + z1.xi() * da / z1.eta())};
}

Coefficients match_coefficients(const VectorField& phi1, const MatrixField& mu0, const SpectralParam& z1,
                                double max_residual) {
    require_same_grid(phi1.grid(), mu0.grid(), "match_coefficients");
    const Grid& g = phi1.grid();
    const cplx z2 = z1.z2();
    // Normal equations G c = r of the weighted problem.
    cplx g11 = 0.0, g12 = 0.0, g22 = 0.0, r1 = 0.0, r2 = 0.0;
    double bnorm = 0.0;
    auto p1 = phi1.comp1(), p2 = phi1.comp2();
    std::vector<double> wts(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double mag2 = std::norm(p1[k]) + std::norm(p2[k]);
        if (!(mag2 > 0.0)) fail(ErrorKind::Degenerate, "match_coefficients: eigenvector vanishes on the grid");
        const double w2 = 1.0 / mag2;
        wts[k] = w2;
        const double x = g.x(k);
        const cplx e1 = std::exp(-I * z2 * x), e2 = std::exp(I * z2 * x);
        const cplx a[2][2] = {{e1 * mu0.m11()[k], e2 * mu0.m12()[k]}, {e1 * mu0.m21()[k], e2 * mu0.m22()[k]}};
        const cplx b[2] = {p1[k], p2[k]};
        for (int r = 0; r < 2; ++r) {
            g11 += w2 * std::norm(a[r][0]);
            g22 += w2 * std::norm(a[r][1]);
            g12 += w2 * std::conj(a[r][0]) * a[r][1];
            r1 += w2 * std::conj(a[r][0]) * b[r];
            r2 += w2 * std::conj(a[r][1]) * b[r];
            bnorm += w2 * std::norm(b[r]);
        }
    }
    const cplx g21 = std::conj(g12);
    const cplx det = g11 * g22 - g12 * g21;
    if (std::abs(det) < 1e-12 * std::abs(g11) * std::abs(g22)) {
        fail(ErrorKind::IllConditioned, "match_coefficients: Jost columns are numerically dependent");
    }
    const cplx c1 = (g22 * r1 - g12 * r2) / det;
    const cplx c2 = (g11 * r2 - g21 * r1) / det;
    const double cmax = std::max(std::abs(c1), std::abs(c2));
    if (std::abs(c1) <= 1e-10 * cmax || std::abs(c2) <= 1e-10 * cmax) {
        fail(ErrorKind::ZeroCoefficient, "match_coefficients: a superposition weight vanishes (a_j undefined)");
    }

    double res = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double x = g.x(k);
        const cplx e1 = c1 * std::exp(-I * z2 * x), e2 = c2 * std::exp(I * z2 * x);
        const cplx d1 = e1 * mu0.m11()[k] + e2 * mu0.m12()[k] - p1[k];
        const cplx d2 = e1 * mu0.m21()[k] + e2 * mu0.m22()[k] - p2[k];
        res += wts[k] * (std::norm(d1) + std::norm(d2));
    }
    const double rel = std::sqrt(res / bnorm);
    if (!(rel < max_residual)) {
        std::ostringstream os;
        os << "match_coefficients: relative fit residual " << rel << " exceeds " << max_residual;
        fail(ErrorKind::FitResidual, os.str());
    }
    Coefficients out;
    out.a1 = std::log(std::abs(c1));
    out.b1 = std::arg(c1);
    out.a2 = std::log(std::abs(c2));
    out.b2 = std::arg(c2);
    out.fit_residual = rel;
    return out;
}

}  // namespace dnls
