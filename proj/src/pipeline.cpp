#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "dnls/backlund.hpp"
#include "dnls/error.hpp"
#include "dnls/harness.hpp"
#include "dnls/lax.hpp"
#include "dnls/spectral.hpp"

namespace dnls {

namespace {

const cplx I{0.0, 1.0};

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const PipelineError&) {
        throw;
    } catch (const Error& e) {
        throw PipelineError(name, e);
    }
}

double relative_drift(double now, double start, bool mass) {
    return std::abs(now - start) / (mass ? std::max(std::abs(start), 1e-300) : std::abs(start) + 1.0);
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double jost_deviation(const MatrixField& mu, const SpectralParam& z, double t, bool normalized) {
    const cplx w = -2.0 * I * z.z4() * t;
    const cplx e1 = std::exp(w);
    const double s1 = normalized ? std::abs(e1) : 1.0;
    const double s2 = normalized ? std::abs(std::exp(-w)) : 1.0;
    double sup = 0.0, l2 = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
        sup = std::max(sup, std::abs(mu.m11()[k] - e1));
        l2 += std::norm(mu.m12()[k]);
    }
    return sup / s1 + std::sqrt(mu.grid().spacing() * l2) / s2;
}

}  // namespace

StabilityRecord run_pipeline(const ExperimentConfig& cfg) {
    const auto started = std::chrono::steady_clock::now();
    stage("config", [&] {
        cfg.validate();
        return 0;
    });

    const Grid grid(cfg.L, cfg.N);
    const SpectralParam z0(cfg.z0);
    const GridField psi0 = soliton_field(z0, 0.0, grid);
    const GridField q0 = psi0 + make_perturbation(cfg.perturbation, grid);

    StabilityRecord rec;
    rec.z0 = z0.z();
    rec.epsilon = cfg.perturbation.epsilon;
    rec.perturbation_norm = l2_norm(q0 - psi0);

    const EigenResult eig = stage("eigenvalue", [&] {
        return find_eigenvalue(q0, z0, {cfg.eigen_tol, 50, cfg.shooting_substeps});
    });
    const SpectralParam z1 = eig.z1;
    rec.z1 = z1.z();
    rec.eigen_shift = std::abs(z1.z() - z0.z());
    rec.eigen_iterations = eig.iterations;
    rec.evans_residual = eig.evans_residual;
    rec.eigenvector_deviation = l2_norm(eig.eigenvector - fundamental_column1_field(z1, grid));

    const DownTransform down = stage("bt_down", [&] { return bt_down(q0, eig); });
    rec.q1_norm0 = l2_norm(down.q1);
    rec.down_ratio = down.ratio;

    const JostSolution jost0 = stage("jost_initial", [&] { return jost_initial(down.q1, z1, cfg.volterra_tol); });
    rec.jost_contraction = jost0.contraction_norm;
    rec.coefficients = stage("match_coefficients", [&] { return match_coefficients(down.phi1, jost0.mu, z1); });
    rec.prediction = predict_modulation(rec.coefficients, z1);

    stage("round_trip", [&] {
        const GridField back = bt_up(down.q1, jost0.mu, rec.coefficients, z1).q;
        rec.round_trip_error = l2_norm(back - q0);
        if (!(rec.round_trip_error < cfg.round_trip_tol)) {
            std::ostringstream os;
            os << "||Q(0) - q0|| = " << rec.round_trip_error << " exceeds " << cfg.round_trip_tol;
            fail(ErrorKind::RoundTrip, os.str());
        }
        return 0;
    });

    // Co-evolution. Jost steps span two evolver steps so RK4 midpoints fall on exact slices.
    const double dt = cfg.evolver.dt;
    EvolverConfig ecfg = cfg.evolver;
    ecfg.T = cfg.T;
    const long sample_steps = std::lround(cfg.sample_interval / dt);
    const long total_steps = std::lround(cfg.T / dt);

    stage("evolve", [&] {
        Evolver small(down.q1, ecfg);
        Evolver direct(q0, ecfg);
        JostEvolver jost(jost0, z1, cfg.jost);

        // Slices of the direct run around each sample time feed the zero-curvature residual.
        std::map<long, GridField> window;
        {
            EvolverConfig back = ecfg;
            back.dt = -dt;
            Evolver rewind(q0, back);
            for (long s = 1; s <= 2; ++s) {
                rewind.step();
                window.emplace(-s, rewind.state());
            }
        }
        auto near_sample = [&](long n) {
            const long r = ((n % sample_steps) + sample_steps) % sample_steps;
            return r <= 2 || r >= sample_steps - 2;
        };

        ConservedTriple c0{};
        std::vector<GridField> q1_slices;  // q1 at the last jost step start, +1, +2
        q1_slices.push_back(down.q1);
        std::map<long, std::size_t> pending;  // sample step -> index in rec.samples

        auto record_sample = [&](long n, const GridField& q1_now, const GridField& q_direct) {
            const double t = static_cast<double>(n) * dt;
            StabilitySample s;
            s.t = t;
            const JostCheck chk = stage("jost_evolve", [&] { return jost.checkpoint(q1_now); });
            s.jost_boundary_error = chk.solution.boundary_error;
            s.jost_x_residual = chk.x_residual;
            s.jost_mismatch = chk.mismatch;
            const MatrixField mu = jost.mu();
            s.jost_deviation = jost_deviation(mu, z1, t, false);
            s.jost_deviation_normalized = jost_deviation(mu, z1, t, true);
            const GridField Q = stage("bt_up", [&] { return bt_up(q1_now, mu, rec.coefficients, z1).q; });
            const OrbitalFit fit = orbital_distance(Q, z1, t);
            s.d = fit.d;
            s.a = fit.a;
            s.b = fit.b;
            s.q1_norm = l2_norm(q1_now);
            s.up_proximity =
                l2_norm(Q - soliton_family({z1, rec.prediction.shift, rec.prediction.phase}, t, grid));
            s.control_mismatch = l2_norm(q_direct - Q);
            s.conserved = conserved(q_direct);
            if (n == 0) c0 = s.conserved;
            const double dm = relative_drift(s.conserved.mass, c0.mass, true);
            const double de = relative_drift(s.conserved.energy, c0.energy, false);
            const double dp = relative_drift(s.conserved.momentum, c0.momentum, false);
            rec.max_drift_mass = std::max(rec.max_drift_mass, dm);
            rec.max_drift_energy = std::max(rec.max_drift_energy, de);
            rec.max_drift_momentum = std::max(rec.max_drift_momentum, dp);
            if (std::max({dm, de, dp}) >= cfg.conservation_tol) {
                std::ostringstream os;
                os << "conserved-quantity drift (M " << dm << ", E " << de << ", P " << dp << ") at t = " << t;
                throw PipelineError("conservation", Error(ErrorKind::ConservationDrift, os.str()));
            }
            pending[n] = rec.samples.size();
            rec.samples.push_back(s);
        };

        auto finish_residuals = [&](long n_center) {
            auto it = pending.find(n_center);
            if (it == pending.end()) return;
            StabilitySample& s = rec.samples[it->second];
            const GridField wide[3] = {window.at(n_center - 2), window.at(n_center), window.at(n_center + 2)};
            const GridField narrow[3] = {window.at(n_center - 1), window.at(n_center), window.at(n_center + 1)};
            s.residual = zero_curvature_residual(wide, 2.0 * dt, z1);
            s.residual_half = zero_curvature_residual(narrow, dt, z1);
            pending.erase(it);
            for (auto w = window.begin(); w != window.end();) {
                w = w->first <= n_center + 2 - 4 ? window.erase(w) : std::next(w);
            }
        };

        window.emplace(0, q0);
        record_sample(0, down.q1, q0);
        for (long n = 1; n <= total_steps + 2; ++n) {
            direct.step();
            if (near_sample(n)) window.emplace(n, direct.state());
            if (n <= total_steps) {
                small.step();
                q1_slices.push_back(small.state());
                if (q1_slices.size() == 3) {
                    jost.advance(q1_slices[0], q1_slices[1], q1_slices[2], 2.0 * dt);
                    q1_slices.erase(q1_slices.begin(), q1_slices.begin() + 2);
                }
                if (n % sample_steps == 0) record_sample(n, q1_slices.back(), window.at(n));
            }
            if (n >= 2) finish_residuals(n - 2);
        }
        return 0;
    });

    std::vector<double> ratios;
    for (const auto& s : rec.samples) {
        rec.sup_distance = std::max(rec.sup_distance, s.d);
        rec.max_control_mismatch = std::max(rec.max_control_mismatch, s.control_mismatch);
        rec.max_residual = std::max(rec.max_residual, s.residual);
        if (s.residual_half > 0.0) ratios.push_back(s.residual / s.residual_half);
        if (s.q1_norm > 0.0) {
            rec.jost_constant = std::max(rec.jost_constant, s.jost_deviation / s.q1_norm);
            rec.jost_constant_normalized =
                std::max(rec.jost_constant_normalized, s.jost_deviation_normalized / s.q1_norm);
            rec.up_constant = std::max(rec.up_constant, s.up_proximity / s.q1_norm);
        }
    }
    rec.residual_ratio = median(ratios);
    rec.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return rec;
}

double fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 2) fail(ErrorKind::InvalidArgument, "loglog_slope: need two positive data points");
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i] / n;
        my += ly[i] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (!(sxx > 0.0)) fail(ErrorKind::InvalidArgument, "loglog_slope: abscissae are all equal");
    return sxy / sxx;
}

SweepResult sweep(const std::vector<ExperimentConfig>& cfgs, unsigned threads) {
    if (cfgs.empty()) fail(ErrorKind::InvalidArgument, "sweep: empty configuration list");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    SweepResult out;
    out.entries.resize(cfgs.size());
    auto run_one = [&](std::size_t i) {
        SweepEntry& e = out.entries[i];
        e.config = cfgs[i];
        try {
            e.record = run_pipeline(cfgs[i]);
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
    };
    for (std::size_t start = 0; start < cfgs.size(); start += threads) {
        std::vector<std::future<void>> batch;
        const std::size_t stop = std::min(cfgs.size(), start + threads);
        for (std::size_t i = start; i < stop; ++i) batch.push_back(std::async(std::launch::async, run_one, i));
        for (auto& f : batch) f.get();
    }

    std::vector<double> eps, sup, shift;
    for (const auto& e : out.entries) {
        if (!e.record) continue;
        ++out.summary.succeeded;
        eps.push_back(e.record->epsilon);
        sup.push_back(e.record->sup_distance);
        shift.push_back(e.record->eigen_shift);
    }
    out.summary.fitted_c = fit_through_origin(eps, sup);
    auto slope_or_nan = [](const std::vector<double>& x, const std::vector<double>& y) {
        try {
            return loglog_slope(x, y);
        } catch (const Error&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    out.summary.loglog_slope = slope_or_nan(eps, sup);
    out.summary.eigen_c = fit_through_origin(eps, shift);
    out.summary.eigen_slope = slope_or_nan(eps, shift);
    return out;
}

}  // namespace dnls
