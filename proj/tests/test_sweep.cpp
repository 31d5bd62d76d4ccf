#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ionphoton/hom.hpp"
#include "ionphoton/sweep.hpp"
#include "ionphoton/units.hpp"

using namespace ionphoton;

namespace {

// Small, fast sweep base: single detected mode, short grid.
SchemeConfig small_base() {
    SchemeConfig cfg = sd_paper_config();
    cfg.params.cavity.polarizations = {Polarization::SigmaPlus};
    cfg.params.cavity.fock_cutoffs = {2};
    cfg.t_grid = {0.0, 2.5, 64};
    return cfg;
}

SweepSpec small_spec() {
    SweepSpec spec;
    spec.base = small_base();
    spec.omega_values = {angular_from_mhz(8.0), angular_from_mhz(11.0)};
    spec.delta_values = {-angular_from_mhz(30.0), -angular_from_mhz(24.0)};
    spec.correlation_n = 16;
    spec.workers = 1;
    return spec;
}

std::string csv_of(const SweepResult& result) {
    std::ostringstream out;
    write_sweep_csv(out, result);
    return out.str();
}

}  // namespace

TEST_CASE("1x1 sweep reproduces the direct pipeline bit for bit") {
    SweepSpec spec = small_spec();
    spec.omega_values = {angular_from_mhz(11.0)};
    spec.delta_values = {-angular_from_mhz(24.0)};
    const SweepResult result = run_sweep(spec);
    REQUIRE(result.cells.size() == 1);
    REQUIRE(result.cells[0].ok);

    SchemeConfig cfg = spec.base;
    cfg.params.drive.peak_rabi = spec.omega_values[0];
    cfg.params.drive.detuning = spec.delta_values[0];
    EvolveOptions eopts;
    eopts.threads = 1;
    eopts.check_positivity = false;
    const double p_direct = run_scheme(cfg, eopts).p_emit;
    CorrelationOptions copts;
    copts.threads = 1;
    copts.batch = spec.batch;
    const CorrelationGrid grid = compute_correlations(cfg, spec.correlation_n, copts);
    const double v_direct = visibility(coincidence_density(grid, 0.0), 2.0 * cfg.window);

    CHECK(result.cells[0].p_emit == p_direct);
    CHECK(result.cells[0].visibility == v_direct);
}

TEST_CASE("zero drive gives zero emission across the detuning axis") {
    SweepSpec spec = small_spec();
    spec.omega_values = {1e-12};
    spec.want_visibility = false;
    const SweepResult result = run_sweep(spec);
    for (const auto& cell : result.cells) {
        REQUIRE(cell.ok);
        CHECK(cell.p_emit < 1e-12);
    }
}

TEST_CASE("per-cell failures are recorded, not fatal") {
    SweepSpec spec = small_spec();
    spec.integrator.max_steps = 4;  // force integrator failures
    const SweepResult result = run_sweep(spec);
    CHECK(result.cells.size() == 4);
    for (const auto& cell : result.cells) {
        CHECK_FALSE(cell.ok);
        CHECK(cell.error.find("integrator failure") != std::string::npos);
    }
    const std::string csv = csv_of(result);
    CHECK(csv.find("failed") != std::string::npos);
}

TEST_CASE("worker count does not change the result") {
    SweepSpec spec = small_spec();
    spec.want_visibility = false;  // keep it quick; p_emit per cell
    const std::string csv1 = csv_of(run_sweep(spec));
    spec.workers = 2;
    const std::string csv2 = csv_of(run_sweep(spec));
    CHECK(csv1 == csv2);
}

TEST_CASE("interrupted sweeps resume to the identical result") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ionphoton_sweep_test";
    fs::create_directories(dir);
    const std::string progress = (dir / "progress.jsonl").string();
    std::error_code ec;
    fs::remove(progress, ec);

    SweepSpec spec = small_spec();
    spec.want_visibility = false;
    const SweepResult full = run_sweep(spec, progress);
    const std::string reference = csv_of(full);

    // Simulate a crash: keep the first finished record plus a torn line.
    std::ifstream in(progress);
    std::string first_line;
    std::getline(in, first_line);
    in.close();
    std::ofstream out(progress, std::ios::trunc);
    out << first_line << "\n" << R"({"i":1,"j":0,"p_em)";
    out.close();

    const SweepResult resumed = run_sweep(spec, progress);
    CHECK(csv_of(resumed) == reference);

    fs::remove_all(dir, ec);
}

TEST_CASE("dominance report") {
    SweepSpec spec = small_spec();
    spec.correlation_n = 16;
    const SweepResult result = run_sweep(spec);

    SUBCASE("a sweep never dominates itself") {
        const auto report = dominance_report(result, result, 11);
        for (const auto& p : report) {
            CHECK_FALSE(p.counterexample);
            if (p.feasible_a) CHECK(p.best_a == p.best_b);
        }
    }

    SUBCASE("thresholds above the best visibility are reported infeasible") {
        const auto report = dominance_report(result, result, 11);
        double v_max = 0.0;
        for (const auto& c : result.cells) v_max = std::max(v_max, c.visibility);
        for (const auto& p : report)
            if (p.threshold > v_max) {
                CHECK_FALSE(p.feasible_a);
                CHECK_FALSE(p.counterexample);
            }
    }
}

TEST_CASE("sweep spec parsing from TOML") {
    const std::string text = R"(
[sweep]
units = "mhz_2pi"
omega_values = [8.0, 11.0]
delta_values = [-30.0, -24.0]
observables = ["p_emit", "visibility"]
correlation_n = 16
workers = 2

[base]
units = "mhz_2pi"
initial_state = "S12:-1/2"
target_state = "D32:+3/2"

[base.params]
scheme = "SD"

[base.params.drive]
peak_rabi = 11.0
)";
    const SweepSpec spec = sweep_spec_from_tree(parse_toml(text));
    CHECK(spec.omega_values.size() == 2);
    CHECK(spec.omega_values[1] == doctest::Approx(angular_from_mhz(11.0)));
    CHECK(spec.delta_values[0] == doctest::Approx(-angular_from_mhz(30.0)));
    CHECK(spec.want_visibility);
    CHECK_FALSE(spec.want_g2);
    CHECK(spec.workers == 2);

    SUBCASE("gamma_ref units") {
        const std::string text2 = R"(
[sweep]
omega_values = [0.5]
delta_values = [1.0]

[base]
units = "mhz_2pi"
[base.params]
scheme = "DD"
[base.params.drive]
peak_rabi = 5.5
)";
        const SweepSpec s2 = sweep_spec_from_tree(parse_toml(text2));
        const double gamma_ref = s2.base.params.gamma_SP + s2.base.params.gamma_DP;
        CHECK(s2.omega_values[0] == doctest::Approx(0.5 * gamma_ref));
        CHECK(s2.delta_values[0] == doctest::Approx(gamma_ref));
    }
}
