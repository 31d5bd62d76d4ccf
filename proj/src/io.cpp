#include "ionphoton/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ionphoton {

std::string tool_version() { return "0.1.0"; }

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file " + path);
    return out;
}

}  // namespace

void write_manifest(const std::string& dir, const RunManifest& manifest) {
    nlohmann::json j;
    j["tool_version"] = manifest.tool_version;
    j["command"] = manifest.command;
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(manifest.config_hash));
    j["config_hash"] = hash;
    j["inputs"] = manifest.inputs;
    j["outputs"] = manifest.outputs;
    j["wall_seconds"] = manifest.wall_seconds;
    j["tolerances"] = {{"abs_tol", manifest.abs_tol}, {"rel_tol", manifest.rel_tol}};
    j["calibration"] = manifest.calibration;
    auto out = open_out((std::filesystem::path(dir) / "manifest.json").string());
    out << j.dump(2) << "\n";
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    auto out = open_out(path);
    out << "t_us,pop_S_m12,pop_S_p12,pop_P_m12,pop_P_p12,pop_D_m32,pop_D_m12,"
           "pop_D_p12,pop_D_p32,n_sigma_plus,n_sigma_minus,flux_per_us\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << fmt(traj.times[k]);
        for (double p : traj.populations[k]) out << "," << fmt(p);
        for (std::size_t m = 0; m < 2; ++m)
            out << ","
                << fmt(m < traj.mode_occupation.size() ? traj.mode_occupation[m][k] : 0.0);
        out << "," << fmt(traj.flux[k]) << "\n";
    }
}

void write_profile_csv(const std::string& path, const std::vector<double>& times,
                       const std::vector<double>& flux) {
    double integral = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i)
        integral += 0.5 * (flux[i] + flux[i - 1]) * (times[i] - times[i - 1]);
    auto out = open_out(path);
    out << "t_us,probability_density_per_us\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        out << fmt(times[i]) << "," << fmt(integral > 0 ? flux[i] / integral : 0.0) << "\n";
}

void write_correlation_grid(const std::string& dir, const CorrelationGrid& grid,
                            std::uint64_t config_hash) {
    const std::filesystem::path base(dir);
    if (grid.has_g1) {
        auto out = open_out((base / "g1.csv").string());
        out << "i,j,re,im\n";
        for (int i = 0; i < grid.n; ++i)
            for (int j = 0; j < grid.n; ++j) {
                const cplx v = grid.g1_at(i, j);
                out << i << "," << j << "," << fmt(v.real()) << "," << fmt(v.imag()) << "\n";
            }
    }
    if (grid.has_g2) {
        auto out = open_out((base / "g2.csv").string());
        out << "i,j,value\n";
        for (int i = 0; i < grid.n; ++i)
            for (int j = 0; j < grid.n; ++j)
                out << i << "," << j << "," << fmt(grid.g2_at(i, j)) << "\n";
    }
    nlohmann::json meta;
    meta["times_us"] = grid.times;
    meta["n"] = grid.n;
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash));
    meta["config_hash"] = hash;
    meta["kappa_rad_per_us"] = grid.kappa;
    meta["outcoupling_fraction"] = grid.outcoupling;
    auto out = open_out((base / "grid_meta.json").string());
    out << meta.dump(2) << "\n";
}

void write_density_csv(const std::string& path, const CoincidenceDensity& density,
                       bool parallel) {
    auto out = open_out(path);
    out << "i,j,value\n";
    const auto& p = parallel ? density.p_par : density.p_perp;
    for (int i = 0; i < density.n; ++i)
        for (int j = 0; j < density.n; ++j)
            out << i << "," << j << "," << fmt(p[static_cast<std::size_t>(i) * density.n + j])
                << "\n";
}

void write_histogram_csv(const std::string& path, const CoincidenceHistogram& hist) {
    auto out = open_out(path);
    out << "tau_us,c_par,c_perp,err_par,err_perp\n";
    for (std::size_t b = 0; b < hist.n_bins(); ++b) {
        const double mid = 0.5 * (hist.bin_edges[b] + hist.bin_edges[b + 1]);
        out << fmt(mid) << "," << fmt(hist.counts_par[b]) << "," << fmt(hist.counts_perp[b])
            << "," << fmt(hist.err_par[b]) << "," << fmt(hist.err_perp[b]) << "\n";
    }
}

void write_window_curve_csv(const std::string& path, const std::vector<WindowPoint>& points) {
    auto out = open_out(path);
    out << "T_us,visibility,coincidence_probability\n";
    for (const auto& p : points)
        out << fmt(p.T) << "," << fmt(p.visibility) << "," << fmt(p.coincidence_probability)
            << "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
}

}  // namespace ionphoton
