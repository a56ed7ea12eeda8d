#include "dnls/jost.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <sstream>

#include "dnls/error.hpp"
#include "dnls/lax.hpp"

namespace dnls {

namespace {

const cplx I{0.0, 1.0};
constexpr int kMaxPicard = 100;

using Weights = std::array<cplx, 4>;

// w_j = int_0^h e^{c (h - s)} l_j(s) ds for the Lagrange basis on nodes offs * h.
Weights kernel_weights(cplx c, double h, std::array<int, 4> offs) {
    Weights w{};
    for (int j = 0; j < 4; ++j) {
        auto basis = [&](double s) {
            double l = 1.0;
            for (int m = 0; m < 4; ++m) {
                if (m != j) l *= (s - offs[m] * h) / ((offs[j] - offs[m]) * h);
            }
            return l;
        };
        using Gauss = boost::math::quadrature::gauss<double, 20>;
        const double re = Gauss::integrate([&](double s) { return (std::exp(c * (h - s)) * basis(s)).real(); }, 0.0, h);
        const double im = Gauss::integrate([&](double s) { return (std::exp(c * (h - s)) * basis(s)).imag(); }, 0.0, h);
        w[j] = {re, im};
    }
    return w;
}

// Cumulative product integration I(x_k) = int_{x_0}^{x_k} e^{c (x_k - s)} f(s) ds on a uniform grid.
class Cumulative {
public:
    Cumulative(cplx c, double h)
        : decay_(std::exp(c * h)),
          first_(kernel_weights(c, h, {0, 1, 2, 3})),
          inner_(kernel_weights(c, h, {-1, 0, 1, 2})),
          last_(kernel_weights(c, h, {-2, -1, 0, 1})) {}

    void apply(const std::vector<cplx>& f, std::vector<cplx>& out) const {
        const std::size_t m = f.size();
        out.assign(m, 0.0);
        for (std::size_t k = 0; k + 1 < m; ++k) {
            cplx v;
            if (k == 0) {
                v = first_[0] * f[0] + first_[1] * f[1] + first_[2] * f[2] + first_[3] * f[3];
            } else if (k + 2 == m) {
                v = last_[0] * f[k - 2] + last_[1] * f[k - 1] + last_[2] * f[k] + last_[3] * f[k + 1];
            } else {
                v = inner_[0] * f[k - 1] + inner_[1] * f[k] + inner_[2] * f[k + 1] + inner_[3] * f[k + 2];
            }
            out[k + 1] = decay_ * out[k] + v;
        }
    }

private:
    cplx decay_;
    Weights first_, inner_, last_;
};

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

struct ColumnSolve {
    std::vector<cplx> top, bottom;  // (mu_1j, mu_2j) on the sweep grid
    int iterations = 0;
    double contraction = 0.0;
};

// Solves, on a sweep grid with q given as `q`, the pair
//   d = sign * int e^{c(x-s)} z g(q) e ds,  e = 1 + int z g'(q) d ds
// where the roles of q and conj q are chosen by the caller through qa (multiplies e) and qb (multiplies d).
ColumnSolve picard(const std::vector<cplx>& qa, const std::vector<cplx>& qb, cplx z, double sign, cplx c, double h,
                   double tol) {
    const std::size_t m = qa.size();
    const Cumulative osc(c, h), flat(0.0, h);
    ColumnSolve out;
    std::vector<cplx> e(m, 1.0), d(m, 0.0), ne(m), nd(m), f(m), tmp;
    double prev = 0.0;
    for (int it = 0;; ++it) {
        if (it >= kMaxPicard) {
            fail(ErrorKind::NoConvergence, "jost: Volterra iteration did not converge in 100 sweeps");
        }
        for (std::size_t k = 0; k < m; ++k) f[k] = z * qa[k] * e[k];
        osc.apply(f, tmp);
        for (std::size_t k = 0; k < m; ++k) nd[k] = sign * tmp[k];
        for (std::size_t k = 0; k < m; ++k) f[k] = z * qb[k] * nd[k];
        flat.apply(f, tmp);
        for (std::size_t k = 0; k < m; ++k) ne[k] = 1.0 + tmp[k];
        const double diff = std::max(max_diff(ne, e), max_diff(nd, d));
        e.swap(ne);
        d.swap(nd);
        if (prev > 0.0 && diff > 10.0 * tol) {
            const double ratio = diff / prev;
            out.contraction = std::max(out.contraction, ratio);
            if (ratio >= 1.0) {
                std::ostringstream os;
                os << "jost: Volterra map is not contracting (ratio " << ratio << "); potential too large";
                fail(ErrorKind::Contraction, os.str());
            }
        }
        prev = diff;
        if (diff < tol) {
            out.iterations = it;
            break;
        }
    }
    out.top = std::move(e);
    out.bottom = std::move(d);
    return out;
}

}  // namespace

double jost_boundary_error(const MatrixField& mu, const SpectralParam& z, double t) {
    const std::size_t n = mu.size();
    const cplx w = 2.0 * I * z.z4() * t;
    const cplx s1 = std::exp(w), s2 = std::exp(-w);  // undo e^{-2iz^4 t} and e^{2iz^4 t}
    const double e1 = std::max(std::abs(mu.m11()[0] * s1 - 1.0), std::abs(mu.m21()[0] * s1));
    const double e2 = std::max(std::abs(mu.m12()[n - 1] * s2), std::abs(mu.m22()[n - 1] * s2 - 1.0));
    return std::max(e1, e2);
}

JostSolution jost_initial(const GridField& q, const SpectralParam& z, double tol) {
    if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "jost_initial: tol must be positive");
    const Grid& g = q.grid();
    const std::size_t n = g.size();
    const double h = g.spacing();
    const cplx zz = z.z(), c = 2.0 * I * z.z2();

    // First column from the left: mu_21 = -int e^{c(x-s)} z conj(q) mu_11, mu_11 = 1 + int z q mu_21.
    std::vector<cplx> q_fwd(q.values().begin(), q.values().end()), qb_fwd(n);
    for (std::size_t k = 0; k < n; ++k) qb_fwd[k] = std::conj(q_fwd[k]);
    const auto col1 = picard(qb_fwd, q_fwd, zz, -1.0, c, h, tol);

    // Second column from the right, swept in y = -x starting at x = L/2 (periodic image of x_0).
    std::vector<cplx> q_rev(n + 1), qb_rev(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        q_rev[k] = q[(n - k) % n];
        qb_rev[k] = std::conj(q_rev[k]);
    }
    const auto col2 = picard(q_rev, qb_rev, zz, -1.0, c, h, tol);

    std::vector<cplx> m12(n), m22(n);
    for (std::size_t j = 0; j < n; ++j) {
        m12[j] = col2.bottom[n - j];
        m22[j] = col2.top[n - j];
    }
    JostSolution out{0.0, MatrixField(g, col1.top, std::move(m12), col1.bottom, std::move(m22)),
                     std::max(col1.contraction, col2.contraction), 0.0, std::max(col1.iterations, col2.iterations)};
    out.boundary_error = jost_boundary_error(out.mu, z, 0.0);
    return out;
}

JostSolution jost_at(const GridField& q, const SpectralParam& z, double t, double tol) {
    JostSolution s = jost_initial(q, z, tol);
    if (t == 0.0) return s;
    const cplx w = -2.0 * I * z.z4() * t;
    const cplx a = std::exp(w), b = std::exp(-w);
    auto scale = [](std::span<const cplx> v, cplx f) {
        std::vector<cplx> o(v.begin(), v.end());
        for (auto& x : o) x *= f;
        return o;
    };
    const auto& m = s.mu;
    s.mu = MatrixField(m.grid(), scale(m.m11(), a), scale(m.m12(), b), scale(m.m21(), a), scale(m.m22(), b));
    s.t = t;
    s.boundary_error = jost_boundary_error(s.mu, z, t);
    return s;
}

double jost_x_residual(const MatrixField& mu, const GridField& q, const SpectralParam& z) {
    require_same_grid(mu.grid(), q.grid(), "jost_x_residual");
    const Grid& g = q.grid();
    const std::size_t n = g.size();
    auto d = [&](std::span<const cplx> s) { return spectral_derivative(GridField(g, {s.begin(), s.end()}), 1); };
    const GridField d11 = d(mu.m11()), d12 = d(mu.m12()), d21 = d(mu.m21()), d22 = d(mu.m22());
    const cplx zz = z.z(), w = 2.0 * I * z.z2();
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        s1 = std::max({s1, std::abs(mu.m11()[k]), std::abs(mu.m21()[k])});
        s2 = std::max({s2, std::abs(mu.m12()[k]), std::abs(mu.m22()[k])});
    }
    double r1 = 0.0, r2 = 0.0;
    const double edge = 0.25 * g.length();
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(g.x(k)) > edge) continue;
        const cplx qk = q[k], qb = std::conj(qk);
        const cplx e11 = d11[k] - zz * qk * mu.m21()[k];
        const cplx e21 = d21[k] - (w * mu.m21()[k] - zz * qb * mu.m11()[k]);
        const cplx e12 = d12[k] - (-w * mu.m12()[k] + zz * qk * mu.m22()[k]);
        const cplx e22 = d22[k] + zz * qb * mu.m12()[k];
        r1 = std::max({r1, std::abs(e11), std::abs(e21)});
        r2 = std::max({r2, std::abs(e12), std::abs(e22)});
    }
    return std::max(r1 / s1, r2 / s2);
}

JostEvolver::JostEvolver(const JostSolution& initial, const SpectralParam& z, JostEvolveOptions opts)
    : z_(z), opts_(opts), grid_(initial.mu.grid()), t_(initial.t),
      m11_(initial.mu.m11().begin(), initial.mu.m11().end()),
      m12_(initial.mu.m12().begin(), initial.mu.m12().end()),
      m21_(initial.mu.m21().begin(), initial.mu.m21().end()),
      m22_(initial.mu.m22().begin(), initial.mu.m22().end()) {}

MatrixField JostEvolver::mu() const { return MatrixField(grid_, m11_, m12_, m21_, m22_); }

void JostEvolver::advance(const GridField& qa, const GridField& qm, const GridField& qb, double step) {
    const auto Ta = build_t(qa, z_).entries, Tm = build_t(qm, z_).entries, Tb = build_t(qb, z_).entries;
    const std::size_t n = grid_.size();
    using M = std::array<cplx, 4>;
    auto mul = [](const MatrixField& T, std::size_t k, const M& m) {
        const cplx a = T.m11()[k], b = T.m12()[k], c = T.m21()[k], d = T.m22()[k];
        return M{a * m[0] + b * m[2], a * m[1] + b * m[3], c * m[0] + d * m[2], c * m[1] + d * m[3]};
    };
    auto axpy = [](const M& a, double s, const M& b) {
        return M{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2], a[3] + s * b[3]};
    };
    for (std::size_t k = 0; k < n; ++k) {
        const M m{m11_[k], m12_[k], m21_[k], m22_[k]};
        const M k1 = mul(Ta, k, m);
        const M k2 = mul(Tm, k, axpy(m, step / 2, k1));
        const M k3 = mul(Tm, k, axpy(m, step / 2, k2));
        const M k4 = mul(Tb, k, axpy(m, step, k3));
        m11_[k] += step / 6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        m12_[k] += step / 6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        m21_[k] += step / 6 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
        m22_[k] += step / 6 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]);
    }
    t_ += step;
}

JostCheck JostEvolver::checkpoint(const GridField& q_now) {
    require_same_grid(q_now.grid(), grid_, "JostEvolver::checkpoint");
    const MatrixField evolved = mu();
    JostCheck out{JostSolution{t_, evolved, 0.0, 0.0, 0}, 0.0, 0.0};
    out.x_residual = jost_x_residual(evolved, q_now, z_);
    out.solution.boundary_error = jost_boundary_error(evolved, z_, t_);

    std::ostringstream os;
    if (!(out.x_residual < 10.0 * opts_.tol)) {
        os << "jost_evolve: x-equation residual " << out.x_residual << " at t = " << t_ << " exceeds "
           << 10.0 * opts_.tol;
        fail(ErrorKind::ResidualCheck, os.str());
    }
    if (!(out.solution.boundary_error < opts_.boundary_tol)) {
        os << "jost_evolve: boundary drift " << out.solution.boundary_error << " at t = " << t_;
        fail(ErrorKind::BoundaryDrift, os.str());
    }

    // Compare each evolved column with the fresh Volterra column after the best scalar fit.
    const JostSolution fresh = jost_initial(q_now, z_, opts_.volterra_tol);
    out.solution.contraction_norm = fresh.contraction_norm;
    out.solution.iterations = fresh.iterations;
    const std::size_t n = grid_.size();
    auto fit = [&](std::vector<cplx>& e1, std::vector<cplx>& e2, std::span<const cplx> f1,
                   std::span<const cplx> f2) {
        cplx num = 0.0;
        double den = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            num += e1[k] * std::conj(f1[k]) + e2[k] * std::conj(f2[k]);
            den += std::norm(f1[k]) + std::norm(f2[k]);
        }
        const cplx s = num / den;
        double diff = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            diff = std::max({diff, std::abs(e1[k] - s * f1[k]), std::abs(e2[k] - s * f2[k])});
            scale = std::max({scale, std::abs(s * f1[k]), std::abs(s * f2[k])});
        }
        if (opts_.resync) {
            for (std::size_t k = 0; k < n; ++k) {
                e1[k] = s * f1[k];
                e2[k] = s * f2[k];
            }
        }
        return diff / scale;
    };
    out.mismatch = std::max(fit(m11_, m21_, fresh.mu.m11(), fresh.mu.m21()),
                            fit(m12_, m22_, fresh.mu.m12(), fresh.mu.m22()));
    if (!(out.mismatch < opts_.mismatch_tol)) {
        os << "jost_evolve: evolved and fresh Jost columns disagree by " << out.mismatch << " at t = " << t_;
        fail(ErrorKind::ResidualCheck, os.str());
    }
    return out;
}

std::vector<JostCheck> jost_evolve(const std::vector<Snapshot>& series, const JostSolution& mu0,
                                   const SpectralParam& z, double dt, const JostEvolveOptions& opts) {
    if (series.empty()) fail(ErrorKind::InvalidArgument, "jost_evolve: empty series");
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (std::abs(series[i].t - series[i - 1].t - dt) > 1e-9 * std::max(1.0, std::abs(series[i].t))) {
            fail(ErrorKind::InvalidArgument, "jost_evolve: series spacing does not match dt");
        }
    }
    JostEvolver ev(mu0, z, opts);
    std::vector<JostCheck> out;
    out.push_back(ev.checkpoint(series[0].q));
    const std::size_t m = series.size();
    for (std::size_t i = 0; i + 1 < m; ++i) {
        // Midpoint slice from a cubic (or lower-order, for short series) interpolant in time.
        std::vector<std::pair<std::size_t, double>> st;
        if (m >= 4) {
            if (i == 0) st = {{0, 5.0 / 16}, {1, 15.0 / 16}, {2, -5.0 / 16}, {3, 1.0 / 16}};
            else if (i + 2 == m) st = {{i - 2, 1.0 / 16}, {i - 1, -5.0 / 16}, {i, 15.0 / 16}, {i + 1, 5.0 / 16}};
            else st = {{i - 1, -1.0 / 16}, {i, 9.0 / 16}, {i + 1, 9.0 / 16}, {i + 2, -1.0 / 16}};
        } else if (m == 3) {
            if (i == 0) st = {{0, 3.0 / 8}, {1, 6.0 / 8}, {2, -1.0 / 8}};
            else st = {{0, -1.0 / 8}, {1, 6.0 / 8}, {2, 3.0 / 8}};
        } else {
            st = {{0, 0.5}, {1, 0.5}};
        }
        const Grid& g = series[i].q.grid();
        std::vector<cplx> mid(g.size());
        for (const auto& [idx, w] : st) {
            for (std::size_t k = 0; k < g.size(); ++k) mid[k] += w * series[idx].q[k];
        }
        ev.advance(series[i].q, GridField(g, std::move(mid)), series[i + 1].q, dt);
        out.push_back(ev.checkpoint(series[i + 1].q));
    }
    return out;
}

}  // namespace dnls
