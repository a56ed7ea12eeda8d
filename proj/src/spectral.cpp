#include "dnls/spectral.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "dnls/error.hpp"

namespace dnls {

namespace {

const cplx I{0.0, 1.0};

using Vec2 = std::array<cplx, 2>;

// Shooting system for the Jost-normalized variables. From the left,
// m = e^{i z^2 x} Phi solves m' = [[0, zq], [-z conj q, 2 i z^2]] m; from
// the right, m = e^{-i z^2 x} Phi solves m' = [[-2 i z^2, zq], [-z conj q, 0]] m.
struct Shooter {
    cplx z, z2;
    bool from_right;

    Vec2 rhs(cplx q, const Vec2& m) const {
        const cplx zq = z * q, zqb = -z * std::conj(q);
        if (from_right) return {-2.0 * I * z2 * m[0] + zq * m[1], zqb * m[0]};
        return {zq * m[1], zqb * m[0] + 2.0 * I * z2 * m[1]};
    }

    Vec2 rk4(const Vec2& m, cplx qa, cplx qm, cplx qb, double step) const {
        auto axpy = [](const Vec2& a, double s, const Vec2& b) { return Vec2{a[0] + s * b[0], a[1] + s * b[1]}; };
        const Vec2 k1 = rhs(qa, m);
        const Vec2 k2 = rhs(qm, axpy(m, step / 2, k1));
        const Vec2 k3 = rhs(qm, axpy(m, step / 2, k2));
        const Vec2 k4 = rhs(qb, axpy(m, step, k3));
        return {m[0] + step / 6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                m[1] + step / 6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
    }
};

struct ShootingRun {
    std::vector<Vec2> left;   // indices 0..mid
    std::vector<Vec2> right;  // indices mid..N (stored at offset i - mid)
    cplx evans;
};

// q sampled at x_i + j h / (2s), j = 0 .. 2s-1.
std::vector<std::vector<cplx>> substep_samples(const GridField& q, int s) {
    std::vector<std::vector<cplx>> out(2 * s);
    const double h = q.grid().spacing();
    out[0].assign(q.values().begin(), q.values().end());
    for (int j = 1; j < 2 * s; ++j) out[j] = shifted_samples(q, j * h / (2.0 * s));
    return out;
}

ShootingRun shoot(const std::vector<std::vector<cplx>>& qs, std::size_t n, double h, cplx z, bool keep) {
    const int s = static_cast<int>(qs.size() / 2);
    const std::size_t mid = n / 2;
    const double hs = h / s;
    auto sample = [&](int j, std::size_t i) -> cplx {
        if (j == 2 * s) return qs[0][(i + 1) % n];
        return qs[j][i % n];
    };

    ShootingRun run;
    Shooter left{z, z * z, false};
    Vec2 m{1.0, 0.0};
    if (keep) run.left.push_back(m);
    for (std::size_t i = 0; i < mid; ++i) {
        for (int j = 0; j < s; ++j) m = left.rk4(m, sample(2 * j, i), sample(2 * j + 1, i), sample(2 * j + 2, i), hs);
        if (keep) run.left.push_back(m);
    }
    const Vec2 ml = m;

    Shooter right{z, z * z, true};
    m = {0.0, 1.0};
    if (keep) run.right.assign(n - mid + 1, Vec2{});
    if (keep) run.right[n - mid] = m;
    for (std::size_t i = n; i-- > mid;) {
        for (int j = s - 1; j >= 0; --j) {
            m = right.rk4(m, sample(2 * j + 2, i), sample(2 * j + 1, i), sample(2 * j, i), -hs);
        }
        if (keep) run.right[i - mid] = m;
    }
    run.evans = ml[0] * m[1] - ml[1] * m[0];
    return run;
}

}  // namespace

LinearizedOperator LinearizedOperator::at_soliton(const SpectralParam& z, const Grid& grid) {
    return {z, soliton_field(z, 0.0, grid)};
}

VectorField LinearizedOperator::apply(const VectorField& w) const {
    require_same_grid(w.grid(), potential.grid(), "LinearizedOperator::apply");
    const GridField d1 = spectral_derivative(w.component(1), 1);
    const GridField d2 = spectral_derivative(w.component(2), 1);
    const cplx zz = z.z(), iz2 = I * z.z2();
    const std::size_t n = w.size();
    std::vector<cplx> a(n), b(n);
    auto w1 = w.comp1(), w2 = w.comp2();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx p = potential[k];
        a[k] = d1[k] + iz2 * w1[k] - zz * p * w2[k];
        b[k] = -d2[k] + iz2 * w2[k] - zz * std::conj(p) * w1[k];
    }
    return VectorField(w.grid(), std::move(a), std::move(b));
}

cplx evans_function(const GridField& q, cplx z, int substeps) {
    if (substeps < 1) fail(ErrorKind::InvalidArgument, "evans_function: substeps must be >= 1");
    const auto qs = substep_samples(q, substeps);
    return shoot(qs, q.size(), q.grid().spacing(), z, false).evans;
}

EigenResult find_eigenvalue(const GridField& q0, const SpectralParam& z_guess, const EigenOptions& opts) {
    if (opts.substeps < 1) fail(ErrorKind::InvalidArgument, "find_eigenvalue: substeps must be >= 1");
    const auto qs = substep_samples(q0, opts.substeps);
    const std::size_t n = q0.size();
    const double h = q0.grid().spacing();
    auto E = [&](cplx z) { return shoot(qs, n, h, z, false).evans; };

    const cplx guess = z_guess.z();
    cplx za = guess, zb = guess * (1.0 + 1e-4);
    cplx ea = E(za), eb = E(zb);
    int it = 0;
    while (std::abs(eb) >= opts.tol) {
        if (++it > opts.max_iterations) {
            std::ostringstream os;
            os << "find_eigenvalue: no convergence in " << opts.max_iterations << " secant iterations (|E| = "
               << std::abs(eb) << ")";
            fail(ErrorKind::NoConvergence, os.str());
        }
        const cplx de = eb - ea;
        if (std::abs(de) <= 1e-14 * std::max(std::abs(eb), 1e-300)) {
            fail(ErrorKind::NoEigenvalue, "find_eigenvalue: Evans function is flat near the guess (no eigenvalue)");
        }
        const cplx zc = zb - eb * (zb - za) / de;
        if (!std::isfinite(zc.real()) || !std::isfinite(zc.imag()) || std::abs(zc - guess) > std::abs(guess)) {
            fail(ErrorKind::NoEigenvalue, "find_eigenvalue: secant iterates left the neighbourhood of the guess");
        }
        za = zb;
        ea = eb;
        zb = zc;
        eb = E(zb);
    }
    if ((zb * zb).imag() <= 0.0) {
        fail(ErrorKind::OutsideValidity, "find_eigenvalue: converged to Im z^2 <= 0; perturbation too large");
    }
    const SpectralParam z1(zb);
    const auto run = shoot(qs, n, h, z1.z(), true);

    // Match the right solution to the left one at x = 0 and undo the Jost normalization.
    const std::size_t mid = n / 2;
    const Vec2& l = run.left[mid];
    const Vec2& r = run.right[0];
    const cplx c = std::abs(r[0]) > std::abs(r[1]) ? l[0] / r[0] : l[1] / r[1];
    const Grid& g = q0.grid();
    const cplx z2 = z1.z2();
    std::vector<cplx> p1(n), p2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.x(i);
        if (i <= mid) {
            const cplx f = std::exp(-I * z2 * x);
            p1[i] = f * run.left[i][0];
            p2[i] = f * run.left[i][1];
        } else {
            const cplx f = c * std::exp(I * z2 * x);
            p1[i] = f * run.right[i - mid][0];
            p2[i] = f * run.right[i - mid][1];
        }
    }
    VectorField phi = normalize_eigenvector(VectorField(g, std::move(p1), std::move(p2)), z1);
    return {z1, std::move(phi), std::abs(eb), it};
}

VectorField normalize_eigenvector(const VectorField& phi, const SpectralParam& z1) {
    const VectorField ref = fundamental_column1_field(z1, phi.grid());
    const cplx proj = inner(phi, ref);
    const double nref = l2_norm(ref);
    if (std::abs(proj) <= 1e-12 * l2_norm(phi) * nref) {
        fail(ErrorKind::Degenerate, "normalize_eigenvector: eigenvector is orthogonal to the soliton column");
    }
    return (nref * nref / proj) * phi;
}

VectorField solve_inhomogeneous(const VectorField& hv, const SpectralParam& z1) {
    const Grid& g = hv.grid();
    const std::size_t n = g.size();
    const double dx = g.spacing();

    const VectorField col = fundamental_column1_field(z1, g);
    const double ncol = l2_norm(col);
    {
        // Solvability: h must be orthogonal to sigma1 conj(Phi1).
        cplx s = 0.0;
        auto h1 = hv.comp1(), h2 = hv.comp2(), u1 = col.comp1(), u2 = col.comp2();
        for (std::size_t k = 0; k < n; ++k) s += h1[k] * u2[k] + h2[k] * u1[k];
        s *= dx;
        const double nh = l2_norm(hv);
        if (std::abs(s) > 1e-8 * nh * ncol) {
            std::ostringstream os;
            os << "solve_inhomogeneous: right-hand side not orthogonal to the cokernel (|<h, sigma1 conj Phi1>| = "
               << std::abs(s) << ")";
            fail(ErrorKind::Solvability, os.str());
        }
        if (nh == 0.0) return VectorField(g, std::vector<cplx>(n), std::vector<cplx>(n));
    }

    // Samples at nodes (index 0..N, the last one wrapping h) and at cell midpoints.
    const auto hm1 = shifted_samples(hv.component(1), dx / 2);
    const auto hm2 = shifted_samples(hv.component(2), dx / 2);
    std::vector<Mat2> phi_node(n + 1), phi_mid(n);
    for (std::size_t k = 0; k <= n; ++k) phi_node[k] = fundamental_matrix(z1, g.x(0) + k * dx);
    for (std::size_t k = 0; k < n; ++k) phi_mid[k] = fundamental_matrix(z1, g.x(k) + 0.5 * dx);
    auto h1 = [&](std::size_t k) { return hv.comp1()[k % n]; };
    auto h2 = [&](std::size_t k) { return hv.comp2()[k % n]; };

    // Integrands: A = Phi22 h1, B = Phi12 h2, G = Phi21 h1 + Phi11 h2 (all divided by det below).
    auto cell = [&](auto node, auto mid) {
        std::vector<cplx> c(n);
        for (std::size_t k = 0; k < n; ++k) c[k] = dx / 6.0 * (node(k) + 4.0 * mid(k) + node(k + 1));
        return c;
    };
    const auto cA = cell([&](std::size_t k) { return phi_node[k][3] * h1(k); },
                         [&](std::size_t k) { return phi_mid[k][3] * hm1[k]; });
    const auto cB = cell([&](std::size_t k) { return phi_node[k][1] * h2(k); },
                         [&](std::size_t k) { return phi_mid[k][1] * hm2[k]; });
    const auto cG = cell([&](std::size_t k) { return phi_node[k][2] * h1(k) + phi_node[k][0] * h2(k); },
                         [&](std::size_t k) { return phi_mid[k][2] * hm1[k] + phi_mid[k][0] * hm2[k]; });

    // Prefix sums from the left and suffix sums from the right.
    auto from_left = [&](const std::vector<cplx>& c) {
        std::vector<cplx> s(n);
        for (std::size_t k = 1; k < n; ++k) s[k] = s[k - 1] + c[k - 1];
        return s;
    };
    auto to_right = [&](const std::vector<cplx>& c) {
        std::vector<cplx> s(n);
        cplx acc = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            acc += c[k];
            s[k] = acc;
        }
        return s;
    };
    const auto LB = from_left(cB), RA = to_right(cA), LG = from_left(cG), RG = to_right(cG);

    const double det = -1.0;
    std::vector<cplx> w1(n), w2(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Mat2& P = phi_node[k];
        const cplx y1 = (-RA[k] + LB[k]) / det;
        const cplx y2 = -(g.x(k) >= 0.0 ? -RG[k] : LG[k]) / det;
        w1[k] = P[0] * y1 + P[1] * y2;
        w2[k] = P[2] * y1 + P[3] * y2;
    }
    VectorField w(g, std::move(w1), std::move(w2));
    const cplx c = -inner(w, col) / (ncol * ncol);
    return w + c * col;
}

}  // namespace dnls
