#include "dnls/soliton.hpp"

#include <cmath>

#include "dnls/error.hpp"

namespace dnls {

namespace {

// Largest exponent we let the growing column reach before refusing.
constexpr double kGrowthLimit = 700.0;

cplx expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

}  // namespace

SpectralParam::SpectralParam(cplx z) : z_(z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        fail(ErrorKind::InvalidArgument, "spectral parameter must be finite");
    }
    const double eta = (z * z).imag();
    if (eta == 0.0) fail(ErrorKind::InvalidArgument, "spectral parameter needs Im z^2 != 0");
    if (eta < 0.0) z_ = std::conj(z);
}

cplx soliton(const SpectralParam& p, double t, double x) {
    const cplx z = p.z(), zb = std::conj(z);
    const double eta = p.eta(), xi = p.xi();
    const cplx z4 = p.z4();
    const double theta = 2.0 * (eta * x + 2.0 * z4.imag() * t);
    const double phase = -2.0 * (xi * x + 2.0 * z4.real() * t);
    // Divide numerator and denominator by e^{|theta|} so neither exponential overflows.
    const double a = std::abs(theta);
    const double ep = std::exp(theta - a), em = std::exp(-theta - a);
    const cplx num = z * em + zb * ep;
    const cplx den = z * ep + zb * em;
    if (std::abs(den) == 0.0 || std::abs(num) == 0.0) fail(ErrorKind::Degenerate, "soliton: vanishing denominator");
    const cplx ratio = num / den;
    return ratio * ratio * (-4.0 * eta) * expi(phase) * std::exp(-a) / num;
}

GridField soliton_field(const SpectralParam& z, double t, const Grid& grid) {
    std::vector<cplx> v(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) v[k] = soliton(z, t, grid.x(k));
    return GridField(grid, std::move(v));
}

GridField soliton_family(const SolitonParams& p, double t, const Grid& grid) {
    std::vector<cplx> v(grid.size());
    const cplx rot = expi(p.phase);
    for (std::size_t k = 0; k < grid.size(); ++k) v[k] = rot * soliton(p.z, t, grid.x(k) + p.shift);
    return GridField(grid, std::move(v));
}

std::array<cplx, 2> fundamental_column1(const SpectralParam& p, double x) {
    const cplx z = p.z(), zb = std::conj(z);
    const double eta = p.eta(), xi = p.xi();
    const double ax = std::abs(x);
    const double r2 = std::exp(-4.0 * eta * ax);
    const cplx em = expi(-xi * x), ep = expi(xi * x);
    if (x >= 0.0) {
        return {em * std::exp(-3.0 * eta * x) / (z + zb * r2), ep * std::exp(-eta * x) / (zb + z * r2)};
    }
    return {em * std::exp(eta * x) / (z * r2 + zb), ep * std::exp(3.0 * eta * x) / (zb * r2 + z)};
}

Mat2 fundamental_matrix(const SpectralParam& p, double x) {
    const cplx z = p.z(), zb = std::conj(z);
    const double eta = p.eta(), xi = p.xi();
    if (eta * std::abs(x) > kGrowthLimit) {
        fail(ErrorKind::Overflow, "fundamental_matrix: growing column overflows for |x| eta > 700");
    }
    const auto c1 = fundamental_column1(p, x);
    const cplx z2 = p.z2();
    const double mod2 = std::norm(z);
    const double r2 = std::exp(-4.0 * eta * std::abs(x));
    const cplx em = expi(-xi * x), ep = expi(xi * x);
    const cplx lin_p = 4.0 * z2 * eta * x + xi;
    const cplx lin_m = -4.0 * z2 * eta * x + xi;
    cplx phi12, phi22;
    if (x >= 0.0) {
        phi12 = em * (lin_p * std::exp(-3.0 * eta * x) + mod2 * std::exp(eta * x)) / (z + zb * r2);
        phi22 = -ep * (lin_m * std::exp(-eta * x) + mod2 * std::exp(-5.0 * eta * x)) / (zb + z * r2);
    } else {
        phi12 = em * (lin_p * std::exp(eta * x) + mod2 * std::exp(5.0 * eta * x)) / (z * r2 + zb);
        phi22 = -ep * (lin_m * std::exp(3.0 * eta * x) + mod2 * std::exp(-eta * x)) / (zb * r2 + z);
    }
    return {c1[0], phi12, c1[1], phi22};
}

VectorField fundamental_column1_field(const SpectralParam& z, const Grid& grid) {
    std::vector<cplx> a(grid.size()), b(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto c = fundamental_column1(z, grid.x(k));
        a[k] = c[0];
        b[k] = c[1];
    }
    return VectorField(grid, std::move(a), std::move(b));
}

}  // namespace dnls
