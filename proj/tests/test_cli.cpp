#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ionphoton/io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string cli = IONPHOTON_CLI_PATH;
const std::string source_dir = IONPHOTON_SOURCE_DIR;

struct CliResult {
    int exit_code = 0;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const fs::path out_file = fs::temp_directory_path() / "ionphoton_cli_out.txt";
    const std::string command = cli + " " + args + " > " + out_file.string() + " 2>&1";
    const int status = std::system(command.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    std::error_code ec;
    fs::remove_all(dir, ec);
    fs::create_directories(dir);
    return dir;
}

// Shared fast config: small grid, single detected mode.
std::string small_config_text(const std::string& extra = "") {
    return R"(
units = "mhz_2pi"
[t_grid]
n_points = 64
[params]
scheme = "SD"
B = 2.0
[params.cavity]
polarizations = ["sigma_plus"]
fock_cutoffs = [2]
[params.drive]
peak_rabi = 11.0
detuning = -24.0
width_convention = "intensity_fwhm"
coupling = "uniform"
)" + extra;
}

}  // namespace

TEST_CASE("photon command") {
    const fs::path dir = temp_dir("ionphoton_cli_photon");
    const fs::path cfg = dir / "run.toml";
    std::ofstream(cfg) << small_config_text();

    SUBCASE("dry run validates and prints the resolved config, writes nothing") {
        const CliResult r = run_cli("photon " + cfg.string() + " --dry-run -o " +
                                    (dir / "none").string());
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("scheme=SD") != std::string::npos);
        CHECK_FALSE(fs::exists(dir / "none"));
    }

    SUBCASE("missing required field names the field and exits 2") {
        const fs::path bad = dir / "bad.toml";
        std::ofstream(bad) << "[params]\nscheme = \"SD\"\n";
        const CliResult r = run_cli("photon " + bad.string());
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("drive.peak_rabi") != std::string::npos);
    }

    SUBCASE("shipped preset reproduces the expected emission probability") {
        const fs::path out = dir / "out";
        const CliResult r = run_cli("photon " + source_dir + "/configs/sd_paper.toml -o " +
                                    out.string() + " --threads 2");
        CHECK(r.exit_code == 0);
        const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
        const double p_emit = summary["p_emit"].get<double>();
        CHECK(p_emit > 0.015);
        CHECK(p_emit < 0.021);
        CHECK(fs::exists(out / "trajectory.csv"));
        CHECK(fs::exists(out / "profile.csv"));
        CHECK(fs::exists(out / "manifest.json"));
        const std::string header = slurp(out / "trajectory.csv").substr(0, 120);
        CHECK(header.find("t_us,pop_S_m12") == 0);
        const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
        CHECK(manifest["calibration"].size() > 0);
    }

    SUBCASE("identical runs are idempotent") {
        const fs::path out1 = dir / "rep1";
        const fs::path out2 = dir / "rep2";
        CHECK(run_cli("photon " + cfg.string() + " -o " + out1.string()).exit_code == 0);
        CHECK(run_cli("photon " + cfg.string() + " -o " + out2.string()).exit_code == 0);
        CHECK(slurp(out1 / "trajectory.csv") == slurp(out2 / "trajectory.csv"));
        const auto m1 = nlohmann::json::parse(slurp(out1 / "manifest.json"));
        const auto m2 = nlohmann::json::parse(slurp(out2 / "manifest.json"));
        CHECK(m1["config_hash"] == m2["config_hash"]);
    }
}

TEST_CASE("hom command and polarization mismatch scaling") {
    const fs::path dir = temp_dir("ionphoton_cli_hom");
    const fs::path cfg = dir / "run.toml";
    std::ofstream(cfg) << small_config_text();

    const CliResult r0 = run_cli("hom " + cfg.string() + " -o " + (dir / "phi0").string() +
                                 " --grid-n 16 --threads 2");
    REQUIRE(r0.exit_code == 0);
    const auto v0 = nlohmann::json::parse(slurp(dir / "phi0" / "visibility.json"));

    const CliResult r90 = run_cli("hom " + cfg.string() + " -o " + (dir / "phi90").string() +
                                  " --grid-n 16 --threads 2 --phi 90");
    REQUIRE(r90.exit_code == 0);
    const auto v90 = nlohmann::json::parse(slurp(dir / "phi90" / "visibility.json"));
    CHECK(std::abs(v90["visibility"].get<double>()) < 1e-9);

    const CliResult r12 = run_cli("hom " + cfg.string() + " -o " + (dir / "phi12").string() +
                                  " --grid-n 16 --threads 2 --phi 12");
    REQUIRE(r12.exit_code == 0);
    const auto v12 = nlohmann::json::parse(slurp(dir / "phi12" / "visibility.json"));
    // for this source G2 = 0, so the dip scales exactly as cos^2(phi)
    const double c2 = std::pow(std::cos(12.0 * std::numbers::pi / 180.0), 2);
    CHECK(v12["visibility"].get<double>() ==
          doctest::Approx(c2 * v0["visibility"].get<double>()).epsilon(1e-9));

    CHECK(fs::exists(dir / "phi0" / "g1.csv"));
    CHECK(fs::exists(dir / "phi0" / "g2.csv"));
    CHECK(fs::exists(dir / "phi0" / "histogram.csv"));
    CHECK(fs::exists(dir / "phi0" / "window_curve.csv"));
    const std::string hist_header = slurp(dir / "phi0" / "histogram.csv").substr(0, 60);
    CHECK(hist_header.find("tau_us,c_par,c_perp,err_par,err_perp") == 0);
}

TEST_CASE("sweep command: 1x1 consistency, workers, resume") {
    const fs::path dir = temp_dir("ionphoton_cli_sweep");
    const fs::path spec = dir / "sweep.toml";
    std::ofstream(spec) << R"(
[sweep]
units = "mhz_2pi"
omega_values = [11.0]
delta_values = [-24.0]
correlation_n = 16
workers = 1

[base]
units = "mhz_2pi"
[base.t_grid]
n_points = 64
[base.params]
scheme = "SD"
B = 2.0
[base.params.cavity]
polarizations = ["sigma_plus"]
fock_cutoffs = [2]
[base.params.drive]
peak_rabi = 11.0
detuning = -24.0
width_convention = "intensity_fwhm"
coupling = "uniform"
)";

    const CliResult r = run_cli("sweep " + spec.string() + " -o " + (dir / "out1").string());
    REQUIRE(r.exit_code == 0);
    const std::string csv1 = slurp(dir / "out1" / "sweep.csv");

    // matches the hom + photon pipeline values at the same config
    const fs::path cfg = dir / "run.toml";
    std::ofstream(cfg) << small_config_text();
    REQUIRE(run_cli("photon " + cfg.string() + " -o " + (dir / "p").string() + " --threads 1")
                .exit_code == 0);
    REQUIRE(run_cli("hom " + cfg.string() + " -o " + (dir / "h").string() +
                    " --grid-n 16 --threads 1")
                .exit_code == 0);
    const auto summary = nlohmann::json::parse(slurp(dir / "p" / "summary.json"));
    const auto vis = nlohmann::json::parse(slurp(dir / "h" / "visibility.json"));

    std::istringstream csv(csv1);
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    double omega, delta, p_emit, visibility;
    char status[16];
    REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf,%lf,%15s", &omega, &delta, &p_emit,
                        &visibility, status) == 5);
    CHECK(p_emit == doctest::Approx(summary["p_emit"].get<double>()).epsilon(1e-12));
    CHECK(visibility == doctest::Approx(vis["visibility"].get<double>()).epsilon(1e-12));

    SUBCASE("worker count leaves the CSV unchanged") {
        const CliResult r2 =
            run_cli("sweep " + spec.string() + " -o " + (dir / "out2").string() + " --workers 2");
        REQUIRE(r2.exit_code == 0);
        CHECK(slurp(dir / "out2" / "sweep.csv") == csv1);
    }

    SUBCASE("resume from the finished progress file") {
        const CliResult r3 = run_cli("sweep " + spec.string() + " -o " + (dir / "out1").string() +
                                     " --resume");
        REQUIRE(r3.exit_code == 0);
        CHECK(slurp(dir / "out1" / "sweep.csv") == csv1);
    }
}

TEST_CASE("synth and analyze round trip at smoke scale") {
    const fs::path dir = temp_dir("ionphoton_cli_analyze");
    const fs::path cfg = dir / "run.toml";
    std::ofstream(cfg) << small_config_text();
    REQUIRE(run_cli("hom " + cfg.string() + " -o " + (dir / "h").string() +
                    " --grid-n 16 --threads 2")
                .exit_code == 0);

    REQUIRE(run_cli("synth " + (dir / "h").string() + " --mode par --events 40000 " +
                    "--efficiency 0.25 --seed 5 -o " + (dir / "par.csv").string())
                .exit_code == 0);
    REQUIRE(run_cli("synth " + (dir / "h").string() + " --mode perp --events 40000 " +
                    "--efficiency 0.25 --seed 6 -o " + (dir / "perp.csv").string())
                .exit_code == 0);

    const CliResult r = run_cli("analyze --mode hom " + (dir / "par.csv").string() + " " +
                                (dir / "perp.csv").string() + " -o " + (dir / "a").string());
    REQUIRE(r.exit_code == 0);
    const auto result = nlohmann::json::parse(slurp(dir / "a" / "result.json"));
    CHECK(result["coincidences_perp"].get<double>() > 100);
    CHECK(fs::exists(dir / "a" / "histogram.csv"));

    SUBCASE("hbt mode on a pair-free stream reports zero with a bound") {
        const fs::path lone = dir / "lone.csv";
        std::ofstream out(lone);
        out << "channel,timestamp_ps\n";
        for (int k = 0; k < 20; ++k)
            out << (k % 2 ? 1 : 2) << "," << 2 * 7380000LL * k + 500000 << "\n";
        out.close();
        const CliResult rh = run_cli("analyze --mode hbt " + lone.string() + " -o " +
                                     (dir / "hbt").string());
        REQUIRE(rh.exit_code == 0);
        const auto res = nlohmann::json::parse(slurp(dir / "hbt" / "result.json"));
        CHECK(res["g2_zero"].get<double>() == 0.0);
        CHECK(res["sigma"].get<double>() > 0.0);
    }

    SUBCASE("profile mode emits the simulated profile schema") {
        REQUIRE(run_cli("photon " + cfg.string() + " -o " + (dir / "p").string()).exit_code == 0);
        REQUIRE(run_cli("synth " + (dir / "p").string() + " --mode profile --events 50000 -o " +
                        (dir / "prof.csv").string())
                    .exit_code == 0);
        const CliResult rp = run_cli("analyze --mode profile " + (dir / "prof.csv").string() +
                                     " -o " + (dir / "fold").string() + " --bin-us 0.02");
        REQUIRE(rp.exit_code == 0);
        const std::string sim = slurp(dir / "p" / "profile.csv");
        const std::string data = slurp(dir / "fold" / "profile.csv");
        CHECK(sim.substr(0, sim.find('\n')) == data.substr(0, data.find('\n')));
    }
}
