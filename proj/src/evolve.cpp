#include "dnls/evolve.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dnls/error.hpp"
#include "fft.hpp"

namespace dnls {

double EvolverConfig::step_guidance(const Grid& grid) const {
    const double s = grid.length() / (std::numbers::pi * static_cast<double>(grid.size()));
    return 0.5 * s * s;
}

void EvolverConfig::validate(const Grid& grid) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorKind::InvalidArgument, "evolver: dt must be positive");
    if (!(T > 0.0) || !std::isfinite(T)) fail(ErrorKind::InvalidArgument, "evolver: T must be positive");
    if (store_every < 1) fail(ErrorKind::InvalidArgument, "evolver: store_every must be >= 1");
    if (enforce_step_guidance && dt > step_guidance(grid)) {
        std::ostringstream os;
        os << "evolver: dt = " << dt << " exceeds the step guidance " << step_guidance(grid);
        fail(ErrorKind::InvalidArgument, os.str());
    }
}

Evolver::Evolver(const GridField& q0, EvolverConfig cfg, double t0)
    : grid_(q0.grid()), cfg_(cfg), t0_(t0) {
    // Negative dt is allowed here for backward stepping; validate the magnitude.
    EvolverConfig check = cfg_;
    check.dt = std::abs(cfg_.dt);
    check.validate(grid_);

    const std::size_t n = grid_.size();
    spec_ = detail::fft(q0.values());
    half_.resize(n);
    dk_.resize(n);
    const double cutoff = (2.0 / 3.0) * grid_.max_wavenumber();
    for (std::size_t j = 0; j < n; ++j) {
        const double k = grid_.wavenumber(j);
        const double ph = -k * k * cfg_.dt / 2.0;
        half_[j] = {std::cos(ph), std::sin(ph)};
        const bool drop = (j == n / 2) || (cfg_.dealias && std::abs(k) > cutoff);
        dk_[j] = drop ? cplx(0.0) : cplx(0.0, -k);
    }
    for (auto* v : {&a_, &b_, &c_, &d_, &tmp_, &phys_}) v->resize(n);
}

void Evolver::nonlinear(const std::vector<cplx>& spec, std::vector<cplx>& out) {
    const auto& fft = detail::Fft::of(spec.size());
    fft.inverse(spec, phys_);
    for (auto& v : phys_) v *= std::norm(v);
    fft.forward(phys_, out);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] *= dk_[j];
}

void Evolver::step() {
    const std::size_t n = spec_.size();
    const double dt = cfg_.dt;
    const auto& E = half_;

    nonlinear(spec_, a_);
    for (std::size_t j = 0; j < n; ++j) tmp_[j] = E[j] * (spec_[j] + 0.5 * dt * a_[j]);
    nonlinear(tmp_, b_);
    for (std::size_t j = 0; j < n; ++j) tmp_[j] = E[j] * spec_[j] + 0.5 * dt * b_[j];
    nonlinear(tmp_, c_);
    for (std::size_t j = 0; j < n; ++j) tmp_[j] = E[j] * (E[j] * spec_[j] + dt * c_[j]);
    nonlinear(tmp_, d_);

    bool finite = true;
    for (std::size_t j = 0; j < n; ++j) {
        const cplx e = E[j], e2 = e * e;
        spec_[j] = e2 * spec_[j] + (dt / 6.0) * (e2 * a_[j] + 2.0 * e * (b_[j] + c_[j]) + d_[j]);
        finite = finite && std::isfinite(spec_[j].real()) && std::isfinite(spec_[j].imag());
    }
    ++steps_;
    if (!finite) {
        std::ostringstream os;
        os << "evolver: NaN/Inf detected at t = " << time();
        fail(ErrorKind::NonFinite, os.str());
    }
}

void Evolver::advance(long n) {
    for (long i = 0; i < n; ++i) step();
}

GridField Evolver::state() const { return GridField(grid_, detail::ifft(spec_)); }

GridField step(const GridField& q, const EvolverConfig& cfg) {
    Evolver ev(q, cfg);
    ev.step();
    return ev.state();
}

std::vector<Snapshot> evolve(const GridField& q0, const EvolverConfig& cfg) {
    Evolver ev(q0, cfg);
    const long total = std::lround(cfg.T / cfg.dt);
    std::vector<Snapshot> out;
    out.push_back({0.0, q0});
    for (long s = 1; s <= total; ++s) {
        ev.step();
        if (s % cfg.store_every == 0 || s == total) out.push_back({ev.time(), ev.state()});
    }
    return out;
}

ConservedTriple conserved(const GridField& q) {
    const GridField qx = spectral_derivative(q, 1);
    const double h = q.grid().spacing();
    const cplx I{0.0, 1.0};
    cplx m = 0.0, e = 0.0, p = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const cplx v = q[k], vx = qx[k];
        const double a2 = std::norm(v);
        const cplx cur = std::conj(vx) * v - vx * std::conj(v);
        m += a2;
        e += I * cur + a2 * a2;
        p += std::norm(vx) + 0.75 * I * a2 * cur + 0.5 * a2 * a2 * a2;
    }
    m *= h;
    e *= -0.5 * h;
    p *= h;
    for (const cplx& c : {m, e, p}) {
        if (std::abs(c.imag()) > 1e-10 * std::max(1.0, std::abs(c.real()))) {
            fail(ErrorKind::NonFinite, "conserved: integrand has a non-negligible imaginary part");
        }
    }
    return {m.real(), e.real(), p.real()};
}

GridField rescale(const GridField& q, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(ErrorKind::InvalidArgument, "rescale: lambda must be > 0");
    const Grid g(q.grid().length() / lambda, q.grid().size());
    // lambda * x'_k coincides with x_k, so the samples carry over with the sqrt(lambda) weight.
    const double s = std::sqrt(lambda);
    std::vector<cplx> v(q.values().begin(), q.values().end());
    for (auto& c : v) c *= s;
    GridField out(g, std::move(v));
    const double n0 = l2_norm(q), n1 = l2_norm(out);
    if (std::abs(n0 - n1) > 1e-10 * std::max(1.0, n0)) fail(ErrorKind::NonFinite, "rescale: L2 norm not preserved");
    return out;
}

}  // namespace dnls
