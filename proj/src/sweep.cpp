#include "ionphoton/sweep.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ionphoton/hom.hpp"
#include "ionphoton/units.hpp"

namespace ionphoton {

const SweepCell& SweepResult::at(int omega_index, int delta_index) const {
    const std::size_t idx = static_cast<std::size_t>(omega_index) * delta_values.size() +
                            static_cast<std::size_t>(delta_index);
    return cells.at(idx);
}

namespace {

SweepCell compute_cell(const SweepSpec& spec, int i, int j) {
    SweepCell cell;
    cell.omega_index = i;
    cell.delta_index = j;
    cell.omega = spec.omega_values[static_cast<std::size_t>(i)];
    cell.delta = spec.delta_values[static_cast<std::size_t>(j)];
    try {
        SchemeConfig cfg = spec.base;
        cfg.params.drive.peak_rabi = cell.omega;
        cfg.params.drive.detuning = cell.delta;

        EvolveOptions eopts;
        eopts.integrator = spec.integrator;
        eopts.threads = 1;
        eopts.check_positivity = false;
        cell.p_emit = run_scheme(cfg, eopts).p_emit;

        if (spec.want_visibility || spec.want_g2) {
            CorrelationOptions copts;
            copts.integrator = spec.integrator;
            copts.threads = 1;
            copts.batch = spec.batch;
            copts.want_g1 = spec.want_visibility;
            copts.want_g2 = true;
            const CorrelationGrid grid = compute_correlations(cfg, spec.correlation_n, copts);
            if (spec.want_visibility) {
                const CoincidenceDensity dens = coincidence_density(grid, 0.0);
                cell.visibility = visibility(dens, 2.0 * cfg.window);
            }
            if (spec.want_g2) cell.g2_zero = hbt_g2_zero(grid);
        }
        cell.ok = true;
    } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
    }
    return cell;
}

nlohmann::json cell_to_json(const SweepCell& c) {
    nlohmann::json j;
    j["i"] = c.omega_index;
    j["j"] = c.delta_index;
    j["omega"] = c.omega;
    j["delta"] = c.delta;
    j["p_emit"] = c.p_emit;
    j["visibility"] = c.visibility;
    j["g2_zero"] = c.g2_zero;
    j["status"] = c.ok ? "ok" : "failed";
    if (!c.ok) j["error"] = c.error;
    return j;
}

bool cell_from_json_line(const std::string& line, SweepCell& c) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return false;
    if (!j.contains("i") || !j.contains("j") || !j.contains("status")) return false;
    c.omega_index = j["i"].get<int>();
    c.delta_index = j["j"].get<int>();
    c.omega = j.value("omega", 0.0);
    c.delta = j.value("delta", 0.0);
    c.p_emit = j.value("p_emit", 0.0);
    c.visibility = j.value("visibility", 0.0);
    c.g2_zero = j.value("g2_zero", 0.0);
    c.ok = j["status"] == "ok";
    c.error = j.value("error", "");
    return true;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const std::string& progress_path) {
    if (spec.omega_values.empty() || spec.delta_values.empty())
        throw ConfigError("sweep grids must be non-empty");
    for (std::size_t k = 1; k < spec.omega_values.size(); ++k)
        if (spec.omega_values[k] <= spec.omega_values[k - 1])
            throw ConfigError("omega_values must be strictly increasing");
    for (std::size_t k = 1; k < spec.delta_values.size(); ++k)
        if (spec.delta_values[k] <= spec.delta_values[k - 1])
            throw ConfigError("delta_values must be strictly increasing");

    const int n_omega = static_cast<int>(spec.omega_values.size());
    const int n_delta = static_cast<int>(spec.delta_values.size());
    const int n_cells = n_omega * n_delta;

    SweepResult result;
    result.omega_values = spec.omega_values;
    result.delta_values = spec.delta_values;
    result.cells.resize(static_cast<std::size_t>(n_cells));
    std::vector<char> done(static_cast<std::size_t>(n_cells), 0);

    // Resume: accept complete, matching records from a previous run.
    if (!progress_path.empty()) {
        std::ifstream in(progress_path);
        std::string line;
        while (in && std::getline(in, line)) {
            SweepCell c;
            if (!cell_from_json_line(line, c)) continue;
            if (c.omega_index < 0 || c.omega_index >= n_omega || c.delta_index < 0 ||
                c.delta_index >= n_delta)
                continue;
            if (std::abs(c.omega - spec.omega_values[static_cast<std::size_t>(c.omega_index)]) >
                    1e-9 ||
                std::abs(c.delta - spec.delta_values[static_cast<std::size_t>(c.delta_index)]) >
                    1e-9)
                continue;
            const std::size_t idx =
                static_cast<std::size_t>(c.omega_index) * n_delta + c.delta_index;
            result.cells[idx] = c;
            done[idx] = 1;
        }
    }

    std::ofstream progress;
    std::mutex progress_mutex;
    if (!progress_path.empty()) {
        progress.open(progress_path, std::ios::app);
        if (!progress) throw ConfigError("cannot write progress file " + progress_path);
    }

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int idx = next.fetch_add(1);
            if (idx >= n_cells) return;
            if (done[static_cast<std::size_t>(idx)]) continue;
            const int i = idx / n_delta;
            const int j = idx % n_delta;
            SweepCell cell = compute_cell(spec, i, j);
            result.cells[static_cast<std::size_t>(idx)] = cell;
            if (progress.is_open()) {
                std::lock_guard lock(progress_mutex);
                progress << cell_to_json(cell).dump() << "\n";
                progress.flush();
            }
        }
    };

    const int n_workers = std::max(1, spec.workers);
    std::vector<std::thread> threads;
    for (int w = 0; w + 1 < n_workers; ++w) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "omega_rad_per_us,delta_rad_per_us,p_emit,visibility,status\n";
    char buf[40];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    for (const auto& c : result.cells)
        out << fmt(c.omega) << "," << fmt(c.delta) << "," << fmt(c.p_emit) << ","
            << fmt(c.visibility) << "," << (c.ok ? "ok" : "failed") << "\n";
}

SweepSpec sweep_spec_from_tree(const ConfigTree& tree) {
    SweepSpec spec;
    spec.base = scheme_config_from_tree(tree, "base.");

    const std::string units = tree.str_or("sweep.units", "gamma_ref");
    double scale;
    if (units == "gamma_ref") {
        spec.gamma_ref = tree.number_or("sweep.gamma_ref_rad_per_us",
                                        spec.base.params.gamma_SP + spec.base.params.gamma_DP);
        scale = spec.gamma_ref;
    } else if (units == "mhz_2pi") {
        scale = two_pi;
    } else if (units == "rad_per_us") {
        scale = 1.0;
    } else {
        throw ConfigError("sweep.units must be gamma_ref, mhz_2pi or rad_per_us");
    }

    for (double v : tree.number_array("sweep.omega_values"))
        spec.omega_values.push_back(v * scale);
    for (double v : tree.number_array("sweep.delta_values"))
        spec.delta_values.push_back(v * scale);

    const auto observables =
        tree.string_array_or("sweep.observables", {"p_emit", "visibility"});
    spec.want_visibility = false;
    spec.want_g2 = false;
    for (const auto& o : observables) {
        if (o == "visibility") spec.want_visibility = true;
        else if (o == "g2_zero") spec.want_g2 = true;
        else if (o != "p_emit")
            throw ConfigError("unknown sweep observable `" + o + "`");
    }
    spec.correlation_n = static_cast<int>(tree.number_or("sweep.correlation_n", 96));
    spec.workers = static_cast<int>(tree.number_or("sweep.workers", 1));
    spec.batch = static_cast<int>(tree.number_or("sweep.batch", 64));
    const double abs_tol = tree.number_or("sweep.abs_tol", spec.integrator.abs_tol);
    const double rel_tol = tree.number_or("sweep.rel_tol", spec.integrator.rel_tol);
    spec.integrator.abs_tol = abs_tol;
    spec.integrator.rel_tol = rel_tol;
    return spec;
}

std::vector<DominancePoint> dominance_report(const SweepResult& a, const SweepResult& b,
                                             int n_thresholds) {
    std::vector<DominancePoint> report;
    for (int k = 0; k < n_thresholds; ++k) {
        DominancePoint p;
        p.threshold = static_cast<double>(k) / (n_thresholds - 1);
        for (const auto& c : a.cells)
            if (c.ok && c.visibility >= p.threshold) {
                p.best_a = std::max(p.best_a, c.p_emit);
                p.feasible_a = true;
            }
        for (const auto& c : b.cells)
            if (c.ok && c.visibility >= p.threshold) {
                p.best_b = std::max(p.best_b, c.p_emit);
                p.feasible_b = true;
            }
        p.counterexample = p.feasible_a && p.feasible_b && p.best_a > p.best_b;
        report.push_back(p);
    }
    return report;
}

}  // namespace ionphoton
