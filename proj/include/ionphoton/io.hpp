#pragma once

#include <string>
#include <vector>

#include "ionphoton/config.hpp"
#include "ionphoton/correlations.hpp"
#include "ionphoton/dynamics.hpp"
#include "ionphoton/hom.hpp"

namespace ionphoton {

struct RunManifest {
    std::string tool_version;
    std::string command;
    std::uint64_t config_hash = 0;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;
    double abs_tol = 0.0;
    double rel_tol = 0.0;
    std::vector<std::string> calibration;
};

std::string tool_version();

void write_manifest(const std::string& dir, const RunManifest& manifest);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Normalized temporal profile: flux / integral(flux), one row per grid point.
void write_profile_csv(const std::string& path, const std::vector<double>& times,
                       const std::vector<double>& flux);

/// Coordinate-list export: `i, j, re, im` for G1 and `i, j, value` for G2,
/// plus a sidecar metadata JSON (grid times, config hash).
void write_correlation_grid(const std::string& dir, const CorrelationGrid& grid,
                            std::uint64_t config_hash);

void write_density_csv(const std::string& path, const CoincidenceDensity& density,
                       bool parallel);

/// `tau_us, c_par, c_perp, err_par, err_perp`
void write_histogram_csv(const std::string& path, const CoincidenceHistogram& hist);

/// `T_us, visibility, coincidence_probability`
void write_window_curve_csv(const std::string& path, const std::vector<WindowPoint>& points);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ionphoton
