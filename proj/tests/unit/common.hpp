#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "dnls/field.hpp"
#include "dnls/soliton.hpp"

namespace testing {

using dnls::cplx;
using dnls::Grid;
using dnls::GridField;
using dnls::SpectralParam;
using dnls::VectorField;

inline const cplx kZ0{1.0, 0.5};

template <class F>
GridField sample(const Grid& g, F&& f) {
    std::vector<cplx> v(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) v[k] = f(g.x(k));
    return GridField(g, std::move(v));
}

inline double max_diff(const GridField& a, const GridField& b) { return dnls::max_abs(a - b); }

inline double max_diff(const VectorField& a, const VectorField& b) {
    return std::max(dnls::max_abs(a.component(1) - b.component(1)), dnls::max_abs(a.component(2) - b.component(2)));
}

inline double l2_diff(const GridField& a, const GridField& b) { return dnls::l2_norm(a - b); }

// Smooth, decaying random field: a few Gaussian bumps with random complex weights.
inline GridField random_bumps(const Grid& g, unsigned seed, double amplitude = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::pair<double, cplx>> bumps;
    for (int i = 0; i < 4; ++i) bumps.emplace_back(4.0 * u(rng), cplx(u(rng), u(rng)));
    const double k = 2.0 * u(rng);
    return sample(g, [&](double x) {
        cplx s = 0.0;
        for (auto& [c, w] : bumps) s += w * std::exp(-(x - c) * (x - c));
        return amplitude * s * std::exp(cplx(0.0, k * x));
    });
}

inline GridField perturbed_soliton(const Grid& g, double eps) {
    const GridField psi = dnls::soliton_field(SpectralParam(kZ0), 0.0, g);
    return psi + sample(g, [&](double x) { return eps / std::cosh(x) * std::exp(cplx(0.0, x)); });
}

}  // namespace testing
