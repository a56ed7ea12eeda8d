// Command-line front end: closed-form fields, evolution, eigenvalues,
// Bäcklund transforms and the stability experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "dnls/backlund.hpp"
#include "dnls/error.hpp"
#include "dnls/evolve.hpp"
#include "dnls/harness.hpp"
#include "dnls/io.hpp"
#include "dnls/jost.hpp"
#include "dnls/soliton.hpp"
#include "dnls/spectral.hpp"

namespace {

struct ZArgs {
    double re = 1.0;
    double im = 0.5;
    void add(CLI::App* app, const std::string& what) {
        app->add_option("--z-re", re, "Real part of " + what)->capture_default_str();
        app->add_option("--z-im", im, "Imaginary part of " + what)->capture_default_str();
    }
    dnls::SpectralParam param() const { return dnls::SpectralParam({re, im}); }
};

template <class F>
void emit(const std::string& path, const F& field, double t) {
    if (path.empty() || path == "-") {
        dnls::write_field(std::cout, field, t);
    } else {
        dnls::save(path, field, t);
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) dnls::fail(dnls::ErrorKind::Io, "cannot open " + path);
    out << text << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DNLS soliton toolkit"};
    app.require_subcommand(1);

    // soliton
    auto* sol = app.add_subcommand("soliton", "Write the closed-form soliton e^{ib} psi^z(t, x + a)");
    ZArgs sol_z;
    sol_z.add(sol, "z");
    double sol_t = 0.0, sol_L = 80.0, sol_shift = 0.0, sol_phase = 0.0;
    std::size_t sol_N = 4096;
    std::string sol_out;
    sol->add_option("--t", sol_t, "Time")->capture_default_str();
    sol->add_option("--L", sol_L, "Domain length")->capture_default_str();
    sol->add_option("--N", sol_N, "Grid points")->capture_default_str();
    sol->add_option("--shift", sol_shift, "Shift a")->capture_default_str();
    sol->add_option("--phase", sol_phase, "Phase b")->capture_default_str();
    sol->add_option("-o,--output", sol_out, "Output file (stdout if omitted)");

    // evolve
    auto* evo = app.add_subcommand("evolve", "Time-step a field file with the IFRK4 scheme");
    std::string evo_in, evo_prefix, evo_out;
    dnls::EvolverConfig evo_cfg;
    bool evo_no_dealias = false;
    evo->add_option("-i,--input", evo_in, "Input field file")->required();
    evo->add_option("--dt", evo_cfg.dt, "Time step")->capture_default_str();
    evo->add_option("--T", evo_cfg.T, "Duration")->capture_default_str();
    evo->add_option("--store-every", evo_cfg.store_every, "Snapshot interval in steps")->capture_default_str();
    evo->add_flag("--no-dealias", evo_no_dealias, "Disable the 2/3 rule");
    evo->add_option("--snapshot-prefix", evo_prefix, "Write snapshots as <prefix>_<index>.dat");
    evo->add_option("-o,--output", evo_out, "Final field file (stdout if omitted)");

    // spectrum
    auto* spec = app.add_subcommand("spectrum", "Locate the discrete eigenvalue near a guess");
    std::string spec_in, spec_vec;
    ZArgs spec_z;
    spec_z.add(spec, "the initial guess");
    dnls::EigenOptions spec_opts;
    spec->add_option("-i,--input", spec_in, "Input field file")->required();
    spec->add_option("--tol", spec_opts.tol, "Tolerance on |E(z1)|")->capture_default_str();
    spec->add_option("--substeps", spec_opts.substeps, "RK4 substeps per cell")->capture_default_str();
    spec->add_option("--eigenvector", spec_vec, "Write the normalized eigenvector here");

    // bt
    auto* bt = app.add_subcommand("bt", "Bäcklund transforms on field files");
    bt->require_subcommand(1);
    auto* bt_fwd = bt->add_subcommand("forward", "Apply the transform to (q, Phi) at z");
    std::string fwd_q, fwd_phi, fwd_out, fwd_phi_out;
    ZArgs fwd_z;
    fwd_z.add(bt_fwd, "z");
    bt_fwd->add_option("-i,--input", fwd_q, "Potential q")->required();
    bt_fwd->add_option("--phi", fwd_phi, "Eigenvector file (two complex columns)")->required();
    bt_fwd->add_option("-o,--output", fwd_out, "New potential");
    bt_fwd->add_option("--phi-out", fwd_phi_out, "Pushed-forward eigenvector");

    auto* bt_dn = bt->add_subcommand("down", "Eigenvalue, down-transform, Jost matrix and coefficients");
    std::string dn_q, dn_out, dn_phi_out, dn_mu_out, dn_json;
    ZArgs dn_z;
    dn_z.add(bt_dn, "the eigenvalue guess");
    bt_dn->add_option("-i,--input", dn_q, "Perturbed soliton q0")->required();
    bt_dn->add_option("-o,--output", dn_out, "Small field q0^(1)");
    bt_dn->add_option("--phi-out", dn_phi_out, "Eigenvector Phi^(1)");
    bt_dn->add_option("--jost-out", dn_mu_out, "Jost matrix of q0^(1)");
    bt_dn->add_option("--json", dn_json, "Eigenvalue and coefficients as JSON (stdout if omitted)");

    auto* bt_upc = bt->add_subcommand("up", "Rebuild Q from a small field and superposition weights");
    std::string up_q, up_mu, up_out;
    ZArgs up_z;
    up_z.add(bt_upc, "z1");
    dnls::Coefficients up_c;
    bt_upc->add_option("-i,--input", up_q, "Small field q^(1)(t)")->required();
    bt_upc->add_option("--jost", up_mu, "Jost matrix file (computed from the field when omitted)");
    bt_upc->add_option("--a1", up_c.a1)->capture_default_str();
    bt_upc->add_option("--b1", up_c.b1)->capture_default_str();
    bt_upc->add_option("--a2", up_c.a2)->capture_default_str();
    bt_upc->add_option("--b2", up_c.b2)->capture_default_str();
    bt_upc->add_option("-o,--output", up_out, "Output Q");

    // pipeline / sweep / config
    auto* pipe = app.add_subcommand("pipeline", "Run one stability experiment");
    std::string pipe_cfg, pipe_json, pipe_csv;
    pipe->add_option("-c,--config", pipe_cfg, "Config file (defaults if omitted)");
    pipe->add_option("--json", pipe_json, "StabilityRecord JSON (stdout if omitted)");
    pipe->add_option("--csv", pipe_csv, "Time series t,d,a,b,M,E,P,residual");

    auto* swp = app.add_subcommand("sweep", "Run the experiment over several amplitudes");
    std::string swp_cfg, swp_json;
    std::vector<double> swp_eps;
    unsigned swp_threads = 0;
    swp->add_option("-c,--config", swp_cfg, "Config file");
    swp->add_option("--epsilons", swp_eps, "Amplitudes (overrides [sweep] epsilons)");
    swp->add_option("--threads", swp_threads, "Concurrent runs (0 = all cores)");
    swp->add_option("--json", swp_json, "Output JSON (stdout if omitted)");

    auto* cfgc = app.add_subcommand("config", "Print the default configuration with documentation");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sol) {
            const dnls::Grid grid(sol_L, sol_N);
            emit(sol_out, dnls::soliton_family({sol_z.param(), sol_shift, sol_phase}, sol_t, grid), sol_t);
        } else if (*evo) {
            evo_cfg.dealias = !evo_no_dealias;
            const auto in = dnls::load_grid_field(evo_in);
            const auto snaps = dnls::evolve(in.field, evo_cfg);
            const auto c0 = dnls::conserved(in.field);
            std::fprintf(stderr, "t M E P\n");
            for (std::size_t i = 0; i < snaps.size(); ++i) {
                const auto c = dnls::conserved(snaps[i].q);
                std::fprintf(stderr, "%.6f %.15g %.15g %.15g\n", in.t + snaps[i].t, c.mass, c.energy, c.momentum);
                if (!evo_prefix.empty()) {
                    dnls::save(evo_prefix + "_" + std::to_string(i) + ".dat", snaps[i].q, in.t + snaps[i].t);
                }
            }
            const auto c1 = dnls::conserved(snaps.back().q);
            std::fprintf(stderr, "relative mass drift %.3e\n", std::abs(c1.mass - c0.mass) / std::max(c0.mass, 1e-300));
            emit(evo_out, snaps.back().q, in.t + snaps.back().t);
        } else if (*spec) {
            const auto in = dnls::load_grid_field(spec_in);
            const auto eig = dnls::find_eigenvalue(in.field, spec_z.param(), spec_opts);
            nlohmann::json j = {{"z1", {{"re", eig.z1.z().real()}, {"im", eig.z1.z().imag()}}},
                                {"xi", eig.z1.xi()},
                                {"eta", eig.z1.eta()},
                                {"evans_residual", eig.evans_residual},
                                {"iterations", eig.iterations}};
            std::cout << j.dump(2) << '\n';
            if (!spec_vec.empty()) dnls::save(spec_vec, eig.eigenvector, in.t);
        } else if (*bt_fwd) {
            const auto q = dnls::load_grid_field(fwd_q);
            const auto phi = dnls::load_vector_field(fwd_phi);
            const auto out = dnls::bt_forward({q.field, phi.field, fwd_z.param()});
            emit(fwd_out, out.q, q.t);
            if (!fwd_phi_out.empty()) dnls::save(fwd_phi_out, out.phi, q.t);
        } else if (*bt_dn) {
            const auto q = dnls::load_grid_field(dn_q);
            const auto eig = dnls::find_eigenvalue(q.field, dn_z.param());
            const auto down = dnls::bt_down(q.field, eig);
            const auto jost = dnls::jost_initial(down.q1, eig.z1);
            const auto coeffs = dnls::match_coefficients(down.phi1, jost.mu, eig.z1);
            const auto pred = dnls::predict_modulation(coeffs, eig.z1);
            if (!dn_out.empty()) dnls::save(dn_out, down.q1, q.t);
            if (!dn_phi_out.empty()) dnls::save(dn_phi_out, down.phi1, q.t);
            if (!dn_mu_out.empty()) dnls::save(dn_mu_out, jost.mu, q.t);
            nlohmann::json j = {{"z1", {{"re", eig.z1.z().real()}, {"im", eig.z1.z().imag()}}},
                                {"q1_norm", dnls::l2_norm(down.q1)},
                                {"ratio", down.ratio},
                                {"a1", coeffs.a1},
                                {"b1", coeffs.b1},
                                {"a2", coeffs.a2},
                                {"b2", coeffs.b2},
                                {"fit_residual", coeffs.fit_residual},
                                {"shift", pred.shift},
                                {"phase", pred.phase}};
            write_text(dn_json, j.dump(2));
        } else if (*bt_upc) {
            const auto q = dnls::load_grid_field(up_q);
            const dnls::SpectralParam z = up_z.param();
            const dnls::MatrixField mu =
                up_mu.empty() ? dnls::jost_at(q.field, z, q.t).mu : dnls::load_matrix_field(up_mu).field;
            emit(up_out, dnls::bt_up(q.field, mu, up_c, z).q, q.t);
        } else if (*pipe) {
            const auto cfg = pipe_cfg.empty() ? dnls::ExperimentConfig{} : dnls::load_config(pipe_cfg);
            const auto rec = dnls::run_pipeline(cfg);
            write_text(pipe_json, dnls::to_json(rec));
            if (!pipe_csv.empty()) {
                std::ofstream out(pipe_csv);
                if (!out) dnls::fail(dnls::ErrorKind::Io, "cannot open " + pipe_csv);
                dnls::write_csv(out, rec);
            }
        } else if (*swp) {
            const auto base = swp_cfg.empty() ? dnls::ExperimentConfig{} : dnls::load_config(swp_cfg);
            if (swp_eps.empty() && !swp_cfg.empty()) swp_eps = dnls::load_sweep_epsilons(swp_cfg);
            if (swp_eps.empty()) swp_eps = {1e-3, 5e-4, 2.5e-4};
            if (swp->count("--threads") == 0 && !swp_cfg.empty()) swp_threads = dnls::load_sweep_threads(swp_cfg);
            std::vector<dnls::ExperimentConfig> cfgs;
            for (double e : swp_eps) {
                auto c = base;
                c.perturbation.epsilon = e;
                cfgs.push_back(c);
            }
            const auto res = dnls::sweep(cfgs, swp_threads);
            write_text(swp_json, dnls::to_json(res));
            if (res.summary.succeeded != res.entries.size()) return 1;
        } else if (*cfgc) {
            std::cout << dnls::default_config_text();
        }
    } catch (const dnls::Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", dnls::to_string(e.kind()), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
