#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dnls/backlund.hpp"
#include "dnls/evolve.hpp"
#include "dnls/field.hpp"
#include "dnls/jost.hpp"
#include "dnls/soliton.hpp"

namespace dnls {

struct OrbitalFit {
    double d = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// inf over (a, b) of || q - e^{ib} psi^{z1}(t, . + a) ||_2. The coarse scan
/// over shifts a = m h uses one cross-correlation FFT; golden-section search
/// then refines a to 1e-8. b is returned in (-pi, pi].
OrbitalFit orbital_distance(const GridField& q, const SpectralParam& z1, double t);

enum class PerturbationShape { Sech, Gaussian, RandomBandlimited };

PerturbationShape parse_shape(const std::string& name);
std::string to_string(PerturbationShape shape);

struct PerturbationConfig {
    PerturbationShape shape = PerturbationShape::Sech;
    double epsilon = 1e-3;
    std::uint64_t seed = 1;
};

/// epsilon * sech(x) e^{ix}, epsilon * e^{-x^2/2} e^{ix}, or a seeded smooth
/// random field (Fourier modes with |k| <= 2 under a Gaussian window of width
/// 4, scaled to the L2 norm of sech) times epsilon.
GridField make_perturbation(const PerturbationConfig& p, const Grid& grid);

struct ExperimentConfig {
    cplx z0{1.0, 0.5};
    double L = 320.0;
    std::size_t N = 8192;
    EvolverConfig evolver{};
    PerturbationConfig perturbation{};
    double T = 5.0;
    double sample_interval = 0.1;
    double eigen_tol = 1e-12;
    int shooting_substeps = 8;
    double volterra_tol = 1e-13;
    JostEvolveOptions jost{};
    double round_trip_tol = 1e-7;
    double conservation_tol = 1e-6;

    void validate() const;
};

/// Reads the sectioned key = value format ([grid], [evolver], [perturbation],
/// [experiment], optional [sweep]). Missing keys keep their defaults.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in);
/// Epsilons listed under [sweep] epsilons = a, b, c (empty if absent).
std::vector<double> load_sweep_epsilons(const std::string& path);
/// [sweep] threads (0 if absent).
unsigned load_sweep_threads(const std::string& path);
/// Default configuration as commented text (documents every key).
std::string default_config_text();

struct StabilitySample {
    double t = 0.0;
    double d = 0.0;
    double a = 0.0;
    double b = 0.0;
    ConservedTriple conserved{};
    /// Zero-curvature residual of the direct run with centred spacing 2 dt and dt.
    double residual = 0.0;
    double residual_half = 0.0;
    double q1_norm = 0.0;
    /// ||mu_11 - e^{-2iz^4 t}||_inf + ||mu_12||_2 as written, and the same with
    /// each column divided by its asymptotic phase factor.
    double jost_deviation = 0.0;
    double jost_deviation_normalized = 0.0;
    double jost_boundary_error = 0.0;
    double jost_x_residual = 0.0;
    double jost_mismatch = 0.0;
    /// || Q(t) - e^{i phase} psi^{z1}(t, . + shift) ||_2 at the predicted modulation.
    double up_proximity = 0.0;
    /// || q_direct(t) - Q(t) ||_2.
    double control_mismatch = 0.0;
};

struct StabilityRecord {
    cplx z0{};
    cplx z1{};
    double epsilon = 0.0;
    double eigen_shift = 0.0;  ///< |z1 - z0|
    int eigen_iterations = 0;
    double evans_residual = 0.0;
    double perturbation_norm = 0.0;  ///< || q0 - psi^{z0}_0 ||
    double q1_norm0 = 0.0;           ///< || q0^(1) ||
    double down_ratio = 0.0;
    double eigenvector_deviation = 0.0;  ///< || Phi - Phi^{z1}_1 ||
    Coefficients coefficients{};
    ModulationPrediction prediction{};
    double round_trip_error = 0.0;
    double jost_contraction = 0.0;
    std::vector<StabilitySample> samples;

    double sup_distance = 0.0;
    double max_control_mismatch = 0.0;
    double max_residual = 0.0;
    double residual_ratio = 0.0;  ///< median over samples of residual / residual_half
    double jost_constant = 0.0;   ///< sup_t jost_deviation / q1_norm
    double jost_constant_normalized = 0.0;  ///< same with jost_deviation_normalized
    double up_constant = 0.0;     ///< sup_t up_proximity / q1_norm
    double max_drift_mass = 0.0, max_drift_energy = 0.0, max_drift_momentum = 0.0;
    double runtime_seconds = 0.0;
};

StabilityRecord run_pipeline(const ExperimentConfig& cfg);

struct SweepEntry {
    ExperimentConfig config;
    std::optional<StabilityRecord> record;
    std::string error;  ///< set when the run failed
};

struct SweepSummary {
    std::size_t succeeded = 0;
    /// Least squares through the origin of sup_t d against epsilon.
    double fitted_c = 0.0;
    /// Slope of log sup_t d against log epsilon.
    double loglog_slope = 0.0;
    /// Same two fits for |z1 - z0|.
    double eigen_c = 0.0;
    double eigen_slope = 0.0;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    SweepSummary summary;
};

/// Runs the pipelines concurrently (at most `threads` at a time, 0 = hardware
/// concurrency). Per-run errors are collected rather than thrown.
SweepResult sweep(const std::vector<ExperimentConfig>& cfgs, unsigned threads = 0);

/// Least squares through the origin and log-log slope of y against x.
double fit_through_origin(const std::vector<double>& x, const std::vector<double>& y);
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

std::string to_json(const StabilityRecord& r, int indent = 2);
std::string to_json(const SweepResult& r, int indent = 2);
/// CSV time series t,d,a,b,M,E,P,residual.
void write_csv(std::ostream& os, const StabilityRecord& r);

}  // namespace dnls
