#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dnls/error.hpp"
#include "dnls/harness.hpp"

namespace dnls {

namespace pt = boost::property_tree;

namespace {

template <class T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
    if (!tree.get_optional<std::string>(key)) return fallback;
    try {
        return tree.get<T>(key);
    } catch (const pt::ptree_error&) {
        fail(ErrorKind::Config, "config key '" + key + "': cannot parse '" + tree.get<std::string>(key) + "'");
    }
}

bool get_bool(const pt::ptree& tree, const std::string& key, bool fallback) {
    const auto v = tree.get_optional<std::string>(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    fail(ErrorKind::Config, "config key '" + key + "': expected a boolean, got '" + *v + "'");
}

void check_keys(const pt::ptree& tree) {
    static const std::map<std::string, std::vector<std::string>> known = {
        {"grid", {"L", "N"}},
        {"evolver", {"dt", "dealias", "enforce_step_guidance"}},
        {"perturbation", {"shape", "epsilon", "seed"}},
        {"experiment",
         {"z0_re", "z0_im", "T", "sample_interval", "eigen_tol", "shooting_substeps", "volterra_tol", "jost_tol",
          "boundary_tol", "mismatch_tol", "round_trip_tol", "conservation_tol"}},
        {"sweep", {"epsilons", "threads"}},
    };
    for (const auto& [section, body] : tree) {
        auto it = known.find(section);
        if (it == known.end()) fail(ErrorKind::Config, "unknown config section [" + section + "]");
        for (const auto& [key, value] : body) {
            (void)value;
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
                fail(ErrorKind::Config, "unknown config key '" + key + "' in [" + section + "]");
            }
        }
    }
}

pt::ptree read_tree(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        fail(ErrorKind::Config, std::string("config parse error: ") + e.what());
    }
    check_keys(tree);
    return tree;
}

pt::ptree read_tree_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open config " + path);
    return read_tree(in);
}

ExperimentConfig from_tree(const pt::ptree& t) {
    ExperimentConfig c;
    c.L = get(t, "grid.L", c.L);
    c.N = get(t, "grid.N", c.N);
    c.evolver.dt = get(t, "evolver.dt", c.evolver.dt);
    c.evolver.dealias = get_bool(t, "evolver.dealias", c.evolver.dealias);
    c.evolver.enforce_step_guidance = get_bool(t, "evolver.enforce_step_guidance", c.evolver.enforce_step_guidance);
    c.perturbation.shape = parse_shape(get<std::string>(t, "perturbation.shape", to_string(c.perturbation.shape)));
    c.perturbation.epsilon = get(t, "perturbation.epsilon", c.perturbation.epsilon);
    c.perturbation.seed = get(t, "perturbation.seed", c.perturbation.seed);
    c.z0 = {get(t, "experiment.z0_re", c.z0.real()), get(t, "experiment.z0_im", c.z0.imag())};
    c.T = get(t, "experiment.T", c.T);
    c.sample_interval = get(t, "experiment.sample_interval", c.sample_interval);
    c.eigen_tol = get(t, "experiment.eigen_tol", c.eigen_tol);
    c.shooting_substeps = get(t, "experiment.shooting_substeps", c.shooting_substeps);
    c.volterra_tol = get(t, "experiment.volterra_tol", c.volterra_tol);
    c.jost.tol = get(t, "experiment.jost_tol", c.jost.tol);
    c.jost.boundary_tol = get(t, "experiment.boundary_tol", c.jost.boundary_tol);
    c.jost.mismatch_tol = get(t, "experiment.mismatch_tol", c.jost.mismatch_tol);
    c.round_trip_tol = get(t, "experiment.round_trip_tol", c.round_trip_tol);
    c.conservation_tol = get(t, "experiment.conservation_tol", c.conservation_tol);
    c.evolver.T = c.T;
    c.validate();
    return c;
}

}  // namespace

void ExperimentConfig::validate() const {
    const SpectralParam z(z0);
    (void)z;
    if (!(perturbation.epsilon >= 0.0)) fail(ErrorKind::Config, "perturbation.epsilon must be >= 0");
    if (!(T > 0.0)) fail(ErrorKind::Config, "experiment.T must be positive");
    if (!(sample_interval > 0.0)) fail(ErrorKind::Config, "experiment.sample_interval must be positive");
    const Grid grid(L, N);
    EvolverConfig ev = evolver;
    ev.T = T;
    ev.validate(grid);
    const double steps = sample_interval / evolver.dt;
    const long rounded = std::lround(steps);
    if (std::abs(steps - rounded) > 1e-9 * steps || rounded % 2 != 0) {
        fail(ErrorKind::Config, "sample_interval must be an even multiple of dt");
    }
    const double samples = T / sample_interval;
    if (std::abs(samples - std::round(samples)) > 1e-9 * samples) {
        fail(ErrorKind::Config, "T must be a multiple of sample_interval");
    }
    if (shooting_substeps < 1) fail(ErrorKind::Config, "shooting_substeps must be >= 1");
}

ExperimentConfig parse_config(std::istream& in) { return from_tree(read_tree(in)); }

ExperimentConfig load_config(const std::string& path) { return from_tree(read_tree_file(path)); }

std::vector<double> load_sweep_epsilons(const std::string& path) {
    const auto tree = read_tree_file(path);
    std::vector<double> out;
    const auto text = tree.get_optional<std::string>("sweep.epsilons");
    if (!text) return out;
    std::stringstream ss(*text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            fail(ErrorKind::Config, "sweep.epsilons: cannot parse '" + item + "'");
        }
    }
    return out;
}

unsigned load_sweep_threads(const std::string& path) {
    const auto tree = read_tree_file(path);
    const int n = get(tree, "sweep.threads", 0);
    if (n < 0) fail(ErrorKind::Config, "sweep.threads must be >= 0");
    return static_cast<unsigned>(n);
}

std::string default_config_text() {
    return R"(# Stability experiment configuration. Every key is optional.

[grid]
# Domain length; the grid covers [-L/2, L/2).
L = 320
# Number of points (power of two).
N = 8192

[evolver]
# Time step of the integrating-factor RK4 scheme.
dt = 1e-4
# Apply the 2/3-rule to the nonlinear term.
dealias = true
# Reject dt above 0.5 (L / (pi N))^2.
enforce_step_guidance = false

[perturbation]
# sech | gaussian | random
shape = sech
# Amplitude of the perturbation added to the soliton.
epsilon = 1e-3
# Seed for the random shape.
seed = 1

[experiment]
# Soliton spectral parameter z0.
z0_re = 1.0
z0_im = 0.5
# Horizon and spacing of recorded samples (an even multiple of dt).
T = 5
sample_interval = 0.1
# Secant tolerance on |E(z1)| and RK4 substeps per cell for shooting.
eigen_tol = 1e-12
shooting_substeps = 8
# Picard tolerance of the Volterra solver.
volterra_tol = 1e-13
# Jost checks: x-residual bound is 10 * jost_tol.
jost_tol = 1e-6
boundary_tol = 1e-6
mismatch_tol = 1e-5
# Hard limits of the run.
round_trip_tol = 1e-7
conservation_tol = 1e-6

[sweep]
# Amplitudes used by the sweep subcommand.
epsilons = 1e-3, 5e-4, 2.5e-4
# Concurrent runs (0 = hardware concurrency).
threads = 0
)";
}

}  // namespace dnls
