#pragma once

#include <vector>

#include "dnls/field.hpp"

namespace dnls {

struct EvolverConfig {
    double dt = 1e-4;
    double T = 1.0;
    bool dealias = true;
    int store_every = 1;
    /// When set, construction rejects dt above the explicit-scheme guidance
    /// 0.5 (L / (pi N))^2. Off by default: the linear part is integrated exactly.
    bool enforce_step_guidance = false;

    void validate(const Grid& grid) const;
    double step_guidance(const Grid& grid) const;
};

struct ConservedTriple {
    double mass = 0.0;
    double energy = 0.0;
    double momentum = 0.0;
};

/// Integrating-factor RK4 (Lawson) for i q_t + q_xx + i (|q|^2 q)_x = 0.
/// The state is held in Fourier space between steps.
class Evolver {
public:
    Evolver(const GridField& q0, EvolverConfig cfg, double t0 = 0.0);

    void step();
    /// Advance by n steps.
    void advance(long n);
    GridField state() const;
    double time() const noexcept { return t0_ + static_cast<double>(steps_) * cfg_.dt; }
    long steps() const noexcept { return steps_; }
    const EvolverConfig& config() const noexcept { return cfg_; }
    const Grid& grid() const noexcept { return grid_; }

private:
    void nonlinear(const std::vector<cplx>& spec, std::vector<cplx>& out);

    Grid grid_;
    EvolverConfig cfg_;
    double t0_;
    long steps_ = 0;
    std::vector<cplx> spec_;
    std::vector<cplx> half_;  // e^{-i k^2 dt / 2}
    std::vector<cplx> dk_;    // -i k, masked when dealiasing
    std::vector<cplx> a_, b_, c_, d_, tmp_, phys_;
};

/// One IFRK4 step of size cfg.dt.
GridField step(const GridField& q, const EvolverConfig& cfg);

/// Snapshot of an evolution.
struct Snapshot {
    double t;
    GridField q;
};

/// Evolve to cfg.T, returning the initial field and every store_every-th step.
std::vector<Snapshot> evolve(const GridField& q0, const EvolverConfig& cfg);

ConservedTriple conserved(const GridField& q);

/// q_lambda(x) = sqrt(lambda) q(lambda x) on the grid of length L / lambda.
GridField rescale(const GridField& q, double lambda);

}  // namespace dnls
