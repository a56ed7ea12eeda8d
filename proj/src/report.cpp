#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "dnls/harness.hpp"

namespace dnls {

namespace {

using nlohmann::json;

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json record_json(const StabilityRecord& r) {
    json samples = json::array();
    for (const auto& s : r.samples) {
        samples.push_back({
            {"t", s.t},
            {"d", s.d},
            {"a", s.a},
            {"b", s.b},
            {"M", s.conserved.mass},
            {"E", s.conserved.energy},
            {"P", s.conserved.momentum},
            {"residual", s.residual},
            {"residual_half_dt", s.residual_half},
            {"q1_norm", s.q1_norm},
            {"jost_deviation", s.jost_deviation},
            {"jost_deviation_normalized", s.jost_deviation_normalized},
            {"jost_boundary_error", s.jost_boundary_error},
            {"jost_x_residual", s.jost_x_residual},
            {"jost_mismatch", s.jost_mismatch},
            {"up_proximity", s.up_proximity},
            {"control_mismatch", s.control_mismatch},
        });
    }
    return {
        {"z0", complex_json(r.z0)},
        {"z1", complex_json(r.z1)},
        {"epsilon", r.epsilon},
        {"eigen_shift", r.eigen_shift},
        {"eigen_iterations", r.eigen_iterations},
        {"evans_residual", r.evans_residual},
        {"perturbation_norm", r.perturbation_norm},
        {"q1_norm0", r.q1_norm0},
        {"down_ratio", r.down_ratio},
        {"eigenvector_deviation", r.eigenvector_deviation},
        {"coefficients",
         {{"a1", r.coefficients.a1},
          {"b1", r.coefficients.b1},
          {"a2", r.coefficients.a2},
          {"b2", r.coefficients.b2},
          {"fit_residual", r.coefficients.fit_residual}}},
        {"prediction", {{"shift", r.prediction.shift}, {"phase", r.prediction.phase}}},
        {"round_trip_error", r.round_trip_error},
        {"jost_contraction", r.jost_contraction},
        {"sup_distance", r.sup_distance},
        {"max_control_mismatch", r.max_control_mismatch},
        {"max_residual", r.max_residual},
        {"residual_ratio", r.residual_ratio},
        {"jost_constant", r.jost_constant},
        {"jost_constant_normalized", r.jost_constant_normalized},
        {"up_constant", r.up_constant},
        {"max_drift", {{"M", r.max_drift_mass}, {"E", r.max_drift_energy}, {"P", r.max_drift_momentum}}},
        {"runtime_seconds", r.runtime_seconds},
        {"samples", samples},
    };
}

}  // namespace

std::string to_json(const StabilityRecord& r, int indent) { return record_json(r).dump(indent); }

std::string to_json(const SweepResult& r, int indent) {
    json runs = json::array();
    for (const auto& e : r.entries) {
        json entry = {{"epsilon", e.config.perturbation.epsilon},
                      {"shape", to_string(e.config.perturbation.shape)},
                      {"seed", e.config.perturbation.seed}};
        if (e.record) entry["record"] = record_json(*e.record);
        else entry["error"] = e.error;
        runs.push_back(std::move(entry));
    }
    json out = {{"runs", runs},
                {"summary",
                 {{"succeeded", r.summary.succeeded},
                  {"fitted_c", r.summary.fitted_c},
                  {"loglog_slope", r.summary.loglog_slope},
                  {"eigen_c", r.summary.eigen_c},
                  {"eigen_slope", r.summary.eigen_slope}}}};
    return out.dump(indent);
}

void write_csv(std::ostream& os, const StabilityRecord& r) {
    os << "t,d,a,b,M,E,P,residual\n";
    char buf[256];
    for (const auto& s : r.samples) {
        std::snprintf(buf, sizeof buf, "%.6f,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.d, s.a, s.b,
                      s.conserved.mass, s.conserved.energy, s.conserved.momentum, s.residual);
        os << buf;
    }
}

}  // namespace dnls
