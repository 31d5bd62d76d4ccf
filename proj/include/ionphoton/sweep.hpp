#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ionphoton/config.hpp"
#include "ionphoton/correlations.hpp"

namespace ionphoton {

struct SweepSpec {
    std::vector<double> omega_values;  // rad/us, drive peak Rabi per column
    std::vector<double> delta_values;  // rad/us, signed drive detuning per row
    SchemeConfig base;
    bool want_visibility = true;
    bool want_g2 = false;
    int correlation_n = 96;
    int workers = 1;
    int batch = 64;
    IntegratorOptions integrator;
    double gamma_ref = 0.0;  // axis unit used by the config layer, informational
};

struct SweepCell {
    int omega_index = 0;
    int delta_index = 0;
    double omega = 0.0;
    double delta = 0.0;
    double p_emit = 0.0;
    double visibility = 0.0;
    double g2_zero = 0.0;
    bool ok = false;
    std::string error;
};

struct SweepResult {
    std::vector<double> omega_values, delta_values;
    std::vector<SweepCell> cells;  // sorted by (omega_index, delta_index)

    const SweepCell& at(int omega_index, int delta_index) const;
};

/// Runs every (omega, delta) cell through dynamics + correlations + HOM.
/// Per-cell failures are recorded, never fatal. When progress_path is
/// non-empty, finished cells are appended there as JSON lines and a rerun
/// resumes from them (incomplete trailing lines are discarded).
SweepResult run_sweep(const SweepSpec& spec, const std::string& progress_path = "");

/// `omega_rad_per_us, delta_rad_per_us, p_emit, visibility, status`
void write_sweep_csv(std::ostream& out, const SweepResult& result);

SweepSpec sweep_spec_from_tree(const ConfigTree& tree);

struct DominancePoint {
    double threshold = 0.0;       // visibility threshold
    double best_a = 0.0;          // max P_emit among cells of sweep A with V >= threshold
    double best_b = 0.0;
    bool feasible_a = false;
    bool feasible_b = false;
    bool counterexample = false;  // A strictly beats B where both feasible
};

/// Scans visibility thresholds and compares the efficiency envelopes of two
/// sweeps (A = first argument, conventionally SD; B = second, DD). A
/// counterexample marks a threshold where A's envelope exceeds B's.
std::vector<DominancePoint> dominance_report(const SweepResult& a, const SweepResult& b,
                                             int n_thresholds = 21);

}  // namespace ionphoton
