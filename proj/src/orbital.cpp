#include <cmath>
#include <numbers>
#include <random>

#include "dnls/backlund.hpp"
#include "dnls/error.hpp"
#include "dnls/harness.hpp"
#include "fft.hpp"

namespace dnls {

OrbitalFit orbital_distance(const GridField& q, const SpectralParam& z1, double t) {
    const Grid& g = q.grid();
    const std::size_t n = g.size();
    const double h = g.spacing();
    const GridField psi = soliton_field(z1, t, g);

    // <q, psi(. + a)> = (h/N) sum_j qhat_j conj(psihat_j) e^{-i k_j a}.
    const auto qh = detail::fft(q.values());
    const auto ph = detail::fft(psi.values());
    std::vector<cplx> prod(n);
    for (std::size_t j = 0; j < n; ++j) prod[j] = qh[j] * std::conj(ph[j]);
    const double scale = h / static_cast<double>(n);

    // Coarse scan over a = m h in one transform: entry m of FFT(prod) is the sum at shift m h.
    const auto corr = detail::fft(prod);
    double best_abs = -1.0, best_shift = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const long long sm = m < n / 2 ? static_cast<long long>(m) : static_cast<long long>(m) - static_cast<long long>(n);
        const double a = static_cast<double>(sm) * h;
        const double v = std::abs(corr[m]);
        const bool better = v > best_abs * (1.0 + 1e-13);
        const bool tie = !better && v >= best_abs * (1.0 - 1e-13) && std::abs(a) < std::abs(best_shift);
        if (better || tie) {
            best_abs = v;
            best_shift = a;
        }
    }

    auto overlap = [&](double a) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ka = g.wavenumber(j) * a;
            s += prod[j] * cplx(std::cos(ka), -std::sin(ka));
        }
        return scale * s;
    };

    // Golden-section maximization of |<q, psi_a>| on [a* - h, a* + h].
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_shift - h, hi = best_shift + h;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = std::abs(overlap(x1)), f2 = std::abs(overlap(x2));
    while (hi - lo > 1e-8) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = std::abs(overlap(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = std::abs(overlap(x2));
        }
    }
    // |<q, psi_a>| is flat at its maximum, so the search above only pins a to
    // about sqrt(machine eps). Polish with secant steps on the derivative
    // Re(conj(c) c'), whose root is a simple zero.
    auto slope = [&](double x) {
        cplx c = 0.0, dc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double k = g.wavenumber(j);
            const cplx term = prod[j] * cplx(std::cos(k * x), -std::sin(k * x));
            c += term;
            dc += cplx(0.0, -k) * term;
        }
        return (std::conj(c) * dc).real();
    };
    double a = 0.5 * (lo + hi);
    {
        double x0 = a - 1e-6, x1 = a + 1e-6;
        double g0 = slope(x0), g1 = slope(x1);
        for (int it = 0; it < 8 && g1 != g0; ++it) {
            const double x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
            if (!std::isfinite(x2) || std::abs(x2 - a) > h) break;
            x0 = x1;
            g0 = g1;
            x1 = x2;
            g1 = slope(x1);
            if (std::abs(x1 - x0) < 1e-14) break;
        }
        if (std::abs(x1 - a) <= h && std::abs(overlap(x1)) >= std::abs(overlap(a)) * (1.0 - 1e-15)) a = x1;
    }
    const double b = wrap_phase(std::arg(overlap(a)));
    // Evaluate the distance directly; the expanded form loses digits to cancellation.
    const double d = l2_norm(q - translate_phase(psi, a, b));
    return {d, a, b};
}

PerturbationShape parse_shape(const std::string& name) {
    if (name == "sech" || name == "sech-modulated") return PerturbationShape::Sech;
    if (name == "gaussian") return PerturbationShape::Gaussian;
    if (name == "random" || name == "random-bandlimited") return PerturbationShape::RandomBandlimited;
    fail(ErrorKind::Config, "unknown perturbation shape '" + name + "'");
}

std::string to_string(PerturbationShape shape) {
    switch (shape) {
        case PerturbationShape::Sech: return "sech";
        case PerturbationShape::Gaussian: return "gaussian";
        case PerturbationShape::RandomBandlimited: return "random";
    }
    return "sech";
}

GridField make_perturbation(const PerturbationConfig& p, const Grid& grid) {
    if (!(p.epsilon >= 0.0) || !std::isfinite(p.epsilon)) {
        fail(ErrorKind::InvalidArgument, "perturbation amplitude must be finite and >= 0");
    }
    const std::size_t n = grid.size();
    std::vector<cplx> v(n);
    switch (p.shape) {
        case PerturbationShape::Sech:
            for (std::size_t k = 0; k < n; ++k) {
                const double x = grid.x(k);
                v[k] = p.epsilon / std::cosh(x) * cplx(std::cos(x), std::sin(x));
            }
            break;
        case PerturbationShape::Gaussian:
            for (std::size_t k = 0; k < n; ++k) {
                const double x = grid.x(k);
                v[k] = p.epsilon * std::exp(-0.5 * x * x) * cplx(std::cos(x), std::sin(x));
            }
            break;
        case PerturbationShape::RandomBandlimited: {
            std::mt19937_64 rng(p.seed);
            std::normal_distribution<double> normal(0.0, 1.0);
            const double kmax = 2.0;
            const int modes = static_cast<int>(std::floor(kmax * grid.length() / (2.0 * std::numbers::pi)));
            std::vector<std::pair<double, cplx>> coeffs;
            for (int m = -modes; m <= modes; ++m) {
                const double re = normal(rng), im = normal(rng);
                coeffs.emplace_back(2.0 * std::numbers::pi * m / grid.length(), cplx(re, im));
            }
            for (std::size_t k = 0; k < n; ++k) {
                const double x = grid.x(k);
                cplx s = 0.0;
                for (const auto& [kk, c] : coeffs) s += c * cplx(std::cos(kk * x), std::sin(kk * x));
                v[k] = s * std::exp(-x * x / 32.0);
            }
            const double norm = l2_norm(GridField(grid, v));
            const double target = std::sqrt(2.0) * p.epsilon;
            for (auto& c : v) c *= norm > 0.0 ? target / norm : 0.0;
            break;
        }
    }
    return GridField(grid, std::move(v));
}

}  // namespace dnls
