#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ionphoton/clickstream.hpp"
#include "ionphoton/io.hpp"
#include "ionphoton/sweep.hpp"
#include "ionphoton/units.hpp"

namespace fs = std::filesystem;
using namespace ionphoton;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

RunManifest make_manifest(const std::string& command, std::uint64_t config_hash,
                          const IntegratorOptions& iopts,
                          const std::vector<std::string>& calibration) {
    RunManifest m;
    m.tool_version = tool_version();
    m.command = command;
    m.config_hash = config_hash;
    m.abs_tol = iopts.abs_tol;
    m.rel_tol = iopts.rel_tol;
    m.calibration = calibration;
    return m;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir);
}

int cmd_photon(const std::string& config_path, const std::string& out_dir, bool dry_run,
               int threads) {
    Timer timer;
    const SchemeConfig cfg = scheme_config_from_tree(load_config_file(config_path));
    const std::string canonical = canonical_config_string(cfg);
    if (dry_run) {
        std::cout << canonical;
        return 0;
    }
    ensure_dir(out_dir);

    EvolveOptions opts;
    opts.threads = threads;
    const PhotonRecord rec = run_scheme(cfg, opts);

    write_trajectory_csv((fs::path(out_dir) / "trajectory.csv").string(), rec.trajectory);
    write_profile_csv((fs::path(out_dir) / "profile.csv").string(), rec.times, rec.flux);

    nlohmann::json summary;
    summary["p_emit"] = rec.p_emit;
    summary["trace_drift"] = rec.trajectory.trace_drift;
    summary["hermiticity_defect"] = rec.trajectory.hermiticity_defect;
    summary["min_eigenvalue"] = rec.trajectory.min_eigenvalue;
    nlohmann::json pops;
    for (const Level& lvl : all_levels())
        pops[level_name(lvl)] =
            rec.final_populations[static_cast<std::size_t>(level_index(lvl))];
    summary["final_populations"] = pops;
    write_text_file((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");

    RunManifest manifest = make_manifest("photon", fnv1a64(canonical), opts.integrator,
                                         calibration_notes(cfg));
    manifest.inputs = {config_path};
    manifest.outputs = {"trajectory.csv", "profile.csv", "summary.json"};
    manifest.wall_seconds = timer.seconds();
    write_manifest(out_dir, manifest);
    std::cout << "p_emit = " << rec.p_emit << "\n";
    return 0;
}

int cmd_hom(const std::string& config_path, const std::string& out_dir, double phi_deg,
            double window_T, int grid_n, int threads, int batch) {
    Timer timer;
    const SchemeConfig cfg = scheme_config_from_tree(load_config_file(config_path));
    const std::string canonical = canonical_config_string(cfg);
    ensure_dir(out_dir);

    CorrelationOptions opts;
    opts.threads = threads;
    opts.batch = batch;
    const CorrelationGrid grid = compute_correlations(cfg, grid_n, opts);
    const double phi = phi_deg * std::numbers::pi / 180.0;
    const CoincidenceDensity density = coincidence_density(grid, phi);
    const double T = window_T > 0 ? window_T : 2.0 * cfg.window;

    const std::uint64_t hash = fnv1a64(canonical);
    write_correlation_grid(out_dir, grid, hash);
    write_density_csv((fs::path(out_dir) / "density_par.csv").string(), density, true);
    write_density_csv((fs::path(out_dir) / "density_perp.csv").string(), density, false);
    // 75 ns bins by default, widened when a coarse grid cannot support them
    const double grid_dt = cfg.window / (grid_n - 1);
    const double bin_width = std::max(0.075, 2.0 * grid_dt);
    const CoincidenceHistogram hist = tau_histogram(density, bin_width, cfg.window);
    write_histogram_csv((fs::path(out_dir) / "histogram.csv").string(), hist);

    std::vector<double> t_values;
    for (double t = 0.15; t < T; t += 0.15) t_values.push_back(t);
    t_values.push_back(T);
    write_window_curve_csv((fs::path(out_dir) / "window_curve.csv").string(),
                           windowed_visibility_curve(density, t_values));

    nlohmann::json vis;
    vis["phi_deg"] = phi_deg;
    vis["T_us"] = T;
    vis["visibility"] = visibility(density, T);
    vis["g2_zero"] = hbt_g2_zero(grid);
    vis["p_emit_from_grid"] = emission_probability(grid, cfg.params.cavity);
    vis["grid_n"] = grid_n;
    if (grid.coarse) vis["warning"] = "grid too coarse for HOM assembly (n < 64)";
    write_text_file((fs::path(out_dir) / "visibility.json").string(), vis.dump(2) + "\n");

    RunManifest manifest =
        make_manifest("hom", hash, opts.integrator, calibration_notes(cfg));
    manifest.inputs = {config_path};
    manifest.outputs = {"g1.csv", "g2.csv", "grid_meta.json", "density_par.csv",
                        "density_perp.csv", "histogram.csv", "window_curve.csv",
                        "visibility.json"};
    manifest.wall_seconds = timer.seconds();
    write_manifest(out_dir, manifest);
    std::cout << "visibility = " << vis["visibility"] << "\n";
    return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_dir, int workers,
              bool resume) {
    Timer timer;
    const ConfigTree tree = load_config_file(spec_path);
    SweepSpec spec = sweep_spec_from_tree(tree);
    if (workers > 0) spec.workers = workers;
    ensure_dir(out_dir);

    const std::string progress = (fs::path(out_dir) / "progress.jsonl").string();
    if (!resume) {
        std::error_code ec;
        fs::remove(progress, ec);
    }
    const SweepResult result = run_sweep(spec, progress);

    std::ofstream csv((fs::path(out_dir) / "sweep.csv").string());
    write_sweep_csv(csv, result);

    const std::string canonical = canonical_config_string(spec.base);
    nlohmann::json summary;
    summary["omega_values_rad_per_us"] = result.omega_values;
    summary["delta_values_rad_per_us"] = result.delta_values;
    summary["cells"] = result.cells.size();
    long failed = 0;
    for (const auto& c : result.cells) failed += c.ok ? 0 : 1;
    summary["failed_cells"] = failed;
    summary["wall_seconds"] = timer.seconds();
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical)));
    summary["config_hash"] = hash;
    write_text_file((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");

    RunManifest manifest = make_manifest("sweep", fnv1a64(canonical), spec.integrator,
                                         calibration_notes(spec.base));
    manifest.inputs = {spec_path};
    manifest.outputs = {"sweep.csv", "summary.json", "progress.jsonl"};
    manifest.wall_seconds = timer.seconds();
    write_manifest(out_dir, manifest);
    std::cout << "cells = " << result.cells.size() << ", failed = " << failed << "\n";
    return failed == static_cast<long>(result.cells.size()) ? 3 : 0;
}

int cmd_analyze(const std::string& mode, const std::vector<std::string>& streams,
                const std::string& out_dir, double bin_us, double range_us, double window_T,
                double slot_us) {
    Timer timer;
    ensure_dir(out_dir);
    nlohmann::json result;
    std::vector<std::string> outputs;

    if (mode == "profile") {
        if (streams.size() != 1)
            throw ConfigError("profile mode takes exactly one stream");
        const EventStream stream = parse_events_file(streams[0]);
        const PhaseProfile profile = fold_profile(stream, bin_us > 0 ? bin_us : 0.020);
        std::ofstream out((fs::path(out_dir) / "profile.csv").string());
        out << "t_us,probability_density_per_us\n";
        for (std::size_t b = 0; b < profile.density.size(); ++b) {
            const double mid = 0.5 * (profile.bin_edges[b] + profile.bin_edges[b + 1]);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", mid, profile.density[b]);
            out << buf;
        }
        result["events"] = profile.total_events;
        result["cycle_period_us"] = stream.cycle_period_us;
        outputs = {"profile.csv"};
    } else if (mode == "hbt") {
        if (streams.size() != 1) throw ConfigError("hbt mode takes exactly one stream");
        const EventStream stream = parse_events_file(streams[0]);
        const HbtResult hbt = hbt_g2(stream, slot_us);
        result["g2_zero"] = hbt.g2_zero;
        result["sigma"] = hbt.sigma;
        result["pairs"] = hbt.pairs;
        result["singles"] = {hbt.singles_1, hbt.singles_2};
        result["windows"] = hbt.windows;
    } else if (mode == "hom") {
        if (streams.size() != 2)
            throw ConfigError("hom mode takes parallel and perpendicular streams");
        const EventStream par = parse_events_file(streams[0]);
        const EventStream perp = parse_events_file(streams[1]);
        const double bw = bin_us > 0 ? bin_us : 0.075;
        const double range = range_us > 0 ? range_us : slot_us;
        const CoincidenceHistogram h_par = cross_correlate(par, bw, range, slot_us);
        const CoincidenceHistogram h_perp = cross_correlate(perp, bw, range, slot_us);
        CoincidenceHistogram merged = h_par;
        merged.counts_perp = h_perp.counts_par;
        merged.err_perp = h_perp.err_par;
        write_histogram_csv((fs::path(out_dir) / "histogram.csv").string(), merged);
        const double T = window_T > 0 ? window_T : 2.0 * slot_us;
        const DataVisibility v =
            data_visibility(h_par, h_perp, T, static_cast<double>(cycle_count(par)),
                            static_cast<double>(cycle_count(perp)));
        result["visibility"] = v.visibility;
        result["sigma"] = v.sigma;
        result["coincidences_par"] = v.coincidences_par;
        result["coincidences_perp"] = v.coincidences_perp;
        result["T_us"] = T;
        outputs = {"histogram.csv"};
    } else {
        throw ConfigError("mode must be hom, hbt or profile");
    }

    write_text_file((fs::path(out_dir) / "result.json").string(), result.dump(2) + "\n");
    outputs.push_back("result.json");

    std::string hash_base = mode;
    for (const auto& s : streams) hash_base += "|" + s;
    RunManifest manifest = make_manifest("analyze-" + mode, fnv1a64(hash_base), {}, {});
    manifest.inputs = streams;
    manifest.outputs = outputs;
    manifest.wall_seconds = timer.seconds();
    write_manifest(out_dir, manifest);
    std::cout << result.dump(2) << "\n";
    return 0;
}

// Reads a density exported by cmd_hom (density_*.csv + grid_meta.json).
CoincidenceDensity load_density_dir(const std::string& dir) {
    const auto meta =
        nlohmann::json::parse(read_text_file((fs::path(dir) / "grid_meta.json").string()));
    CoincidenceDensity density;
    density.times = meta["times_us"].get<std::vector<double>>();
    density.n = meta["n"].get<int>();
    density.p_par.assign(static_cast<std::size_t>(density.n) * density.n, 0.0);
    density.p_perp = density.p_par;
    for (bool parallel : {true, false}) {
        const std::string path =
            (fs::path(dir) / (parallel ? "density_par.csv" : "density_perp.csv")).string();
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open " + path);
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            int i, j;
            double v;
            if (std::sscanf(line.c_str(), "%d,%d,%lf", &i, &j, &v) != 3)
                throw ConfigError("malformed density row in " + path);
            auto& p = parallel ? density.p_par : density.p_perp;
            p[static_cast<std::size_t>(i) * density.n + j] = v;
        }
    }
    return density;
}

int cmd_synth(const std::string& in_dir, const std::string& out_path, const std::string& mode,
              long n_events, double efficiency, double background_rate, std::uint64_t seed) {
    SynthSpec spec;
    spec.efficiency = efficiency;
    spec.background_rate = background_rate;
    spec.seed = seed;

    EventStream stream;
    if (mode == "par" || mode == "perp") {
        const CoincidenceDensity density = load_density_dir(in_dir);
        spec.window_us = density.times.back();
        stream = synth_from_density(density, mode == "par", n_events, spec);
    } else if (mode == "profile") {
        std::ifstream in((fs::path(in_dir) / "profile.csv").string());
        if (!in) throw ConfigError("cannot open profile.csv in " + in_dir);
        std::string line;
        std::getline(in, line);
        std::vector<double> times, flux;
        while (std::getline(in, line)) {
            double t, f;
            if (std::sscanf(line.c_str(), "%lf,%lf", &t, &f) != 2)
                throw ConfigError("malformed profile row");
            times.push_back(t);
            flux.push_back(f);
        }
        stream = synth_from_flux(times, flux, n_events, spec);
    } else {
        throw ConfigError("synth mode must be par, perp or profile");
    }
    write_events_file(out_path, stream);
    std::cout << "events = " << stream.events.size() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ion-cavity single photon source simulator and analyzer"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    bool dry_run = false;
    int threads = 2;

    auto* photon = app.add_subcommand("photon", "master-equation run: populations, flux, P_emit");
    photon->add_option("config", config_path, "run config (TOML)")->required();
    photon->add_option("-o,--out", out_dir, "output directory");
    photon->add_flag("--dry-run", dry_run, "validate and print the resolved config");
    photon->add_option("--threads", threads, "worker threads");

    double phi_deg = 0.0, window_T = 0.0;
    int grid_n = 128, batch = 64;
    auto* hom = app.add_subcommand("hom", "two-photon interference observables");
    hom->add_option("config", config_path, "run config (TOML)")->required();
    hom->add_option("-o,--out", out_dir, "output directory");
    hom->add_option("--phi", phi_deg, "polarization mismatch angle, degrees");
    hom->add_option("--window", window_T,
                    "visibility window T in us (default 2x generation window)");
    hom->add_option("--grid-n", grid_n, "correlation grid size");
    hom->add_option("--threads", threads, "worker threads");
    hom->add_option("--batch", batch, "regression seeds per lockstep pass");

    int workers = 0;
    bool resume = false;
    auto* sweep = app.add_subcommand("sweep", "(Omega, Delta) grid of P_emit and visibility");
    sweep->add_option("spec", config_path, "sweep spec (TOML)")->required();
    sweep->add_option("-o,--out", out_dir, "output directory");
    sweep->add_option("--workers", workers, "parallel cell workers");
    sweep->add_flag("--resume", resume, "reuse finished cells from progress.jsonl");

    std::string mode;
    std::vector<std::string> streams;
    double bin_us = 0.0, range_us = 0.0, slot_us = 2.5;
    auto* analyze = app.add_subcommand("analyze", "timestamp stream analysis");
    analyze->add_option("--mode", mode, "hom | hbt | profile")->required();
    analyze->add_option("streams", streams, "stream file(s); hom takes par then perp")
        ->required();
    analyze->add_option("-o,--out", out_dir, "output directory");
    analyze->add_option("--bin-us", bin_us, "histogram bin width, us");
    analyze->add_option("--range-us", range_us, "histogram tau range, us");
    analyze->add_option("--window", window_T, "visibility window T, us");
    analyze->add_option("--slot-us", slot_us, "photon slot length within each cycle, us");

    std::string synth_mode = "par", stream_out = "stream.csv";
    long n_events = 100000;
    double efficiency = 1.0, background_rate = 0.0;
    std::uint64_t seed = 1;
    auto* synth = app.add_subcommand("synth", "synthesize click streams from simulated outputs");
    synth->add_option("dir", config_path, "hom or photon output directory")->required();
    synth->add_option("-o,--out", stream_out, "output stream file");
    synth->add_option("--mode", synth_mode, "par | perp | profile");
    synth->add_option("--events", n_events, "source pairs (par/perp) or photons (profile)");
    synth->add_option("--efficiency", efficiency, "per-photon detection efficiency");
    synth->add_option("--background", background_rate, "background rate per us per detector");
    synth->add_option("--seed", seed, "PRNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (photon->parsed()) return cmd_photon(config_path, out_dir, dry_run, threads);
        if (hom->parsed())
            return cmd_hom(config_path, out_dir, phi_deg, window_T, grid_n, threads, batch);
        if (sweep->parsed()) return cmd_sweep(config_path, out_dir, workers, resume);
        if (analyze->parsed())
            return cmd_analyze(mode, streams, out_dir, bin_us, range_us, window_T, slot_us);
        if (synth->parsed())
            return cmd_synth(config_path, stream_out, synth_mode, n_events, efficiency,
                             background_rate, seed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
