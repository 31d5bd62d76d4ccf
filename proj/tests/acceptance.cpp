// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit status is nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "ionphoton/clickstream.hpp"
#include "ionphoton/hom.hpp"
#include "ionphoton/sweep.hpp"
#include "ionphoton/units.hpp"
#include "oracles.hpp"

using namespace ionphoton;

namespace {

int failures = 0;

void report(int criterion, const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                label.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

struct SchemeRun {
    PhotonRecord photon;
    CorrelationGrid grid;
    CoincidenceDensity density;
    double visibility_T5 = 0.0;
    double g1_sq_integral = 0.0;
};

double g1_square_integral(const CorrelationGrid& grid) {
    const int n = grid.n;
    const double dt = (grid.times.back() - grid.times.front()) / (n - 1);
    auto w = [&](int i) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; };
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            acc += w(i) * w(j) * std::norm(grid.g1_at(i, j)) * dt * dt;
    return acc;
}

SchemeRun run_pipeline(const SchemeConfig& cfg, int n, const IntegratorOptions& iopts) {
    SchemeRun run;
    EvolveOptions eopts;
    eopts.integrator = iopts;
    eopts.threads = 2;
    run.photon = run_scheme(cfg, eopts);
    CorrelationOptions copts;
    copts.integrator = iopts;
    copts.threads = 2;
    run.grid = compute_correlations(cfg, n, copts);
    run.density = coincidence_density(run.grid, 0.0);
    run.visibility_T5 = visibility(run.density, 2.0 * cfg.window);
    run.g1_sq_integral = g1_square_integral(run.grid);
    return run;
}

}  // namespace

int main() {
    const auto t_start = std::chrono::steady_clock::now();
    const SchemeConfig sd = sd_paper_config();
    const SchemeConfig dd = dd_paper_config();
    const IntegratorOptions default_tols;

    std::printf("== preset pipelines (grid n=128, default tolerances) ==\n");
    const SchemeRun sd_run = run_pipeline(sd, 128, default_tols);
    const SchemeRun dd_run = run_pipeline(dd, 128, default_tols);

    // 1. SD emission probability 1.8% +- 0.3 pp
    report(1, "SD emission probability",
           std::abs(sd_run.photon.p_emit - 0.018) <= 0.003,
           fmt("P_emit = %.4f%%, target 1.8%% +- 0.3pp", 100 * sd_run.photon.p_emit));

    // 2. DD emission probability 0.75% +- 0.15 pp (ideal preparation)
    report(2, "DD emission probability",
           std::abs(dd_run.photon.p_emit - 0.0075) <= 0.0015,
           fmt("P_emit = %.4f%%, target 0.75%% +- 0.15pp", 100 * dd_run.photon.p_emit));

    // 3. SD HOM visibility at phi=0, T=5us: 53.0% +- 3pp
    report(3, "SD HOM visibility", std::abs(sd_run.visibility_T5 - 0.530) <= 0.030,
           fmt("V = %.2f%%, target 53.0%% +- 3pp", 100 * sd_run.visibility_T5));

    // 4. DD HOM visibility at phi=0: 92.2% +- 3pp
    report(4, "DD HOM visibility", std::abs(dd_run.visibility_T5 - 0.922) <= 0.030,
           fmt("V = %.2f%%, target 92.2%% +- 3pp", 100 * dd_run.visibility_T5));

    // 5. SD histogram shape: deep central bin, wings above 0.5
    {
        const CoincidenceHistogram hist = tau_histogram(sd_run.density, 0.075, 2.5);
        double central = 0.0, wing_max = 0.0;
        for (std::size_t b = 0; b < hist.n_bins(); ++b) {
            if (hist.counts_perp[b] <= 0.0) continue;
            const double mid = 0.5 * (hist.bin_edges[b] + hist.bin_edges[b + 1]);
            const double ratio = hist.counts_par[b] / hist.counts_perp[b];
            if (std::abs(mid) < 0.075) central = std::max(central, ratio);
            if (std::abs(mid) >= 0.2 && std::abs(mid) <= 1.0)
                wing_max = std::max(wing_max, ratio);
        }
        report(5, "SD histogram wings", central < 0.2 && wing_max > 0.5,
               fmt("central ratio %.3f (<0.2), wing max %.3f (>0.5)", central, wing_max));
    }

    // 7. window filtering raises SD visibility by >= 10pp; retained
    //    coincidence probability nondecreasing in T
    {
        std::vector<double> t_values;
        for (double t = 0.15; t <= 5.0 + 1e-9; t += 0.15) t_values.push_back(t);
        const auto curve = windowed_visibility_curve(sd_run.density, t_values);
        bool nondecreasing = true;
        for (std::size_t k = 1; k < curve.size(); ++k)
            if (curve[k].coincidence_probability < curve[k - 1].coincidence_probability - 1e-12)
                nondecreasing = false;
        const double v_short = curve.front().visibility;
        const double v_full = sd_run.visibility_T5;
        report(7, "SD window filtering",
               (v_short - v_full) >= 0.10 && nondecreasing,
               fmt("V(0.15us) = %.2f%%, V(5us) = %.2f%%, coincidence prob %s", 100 * v_short,
                   100 * v_full, nondecreasing ? "nondecreasing" : "NOT monotone"));
    }

    // 8. master-equation invariants on both acceptance trajectories
    {
        const auto& a = sd_run.photon.trajectory;
        const auto& b = dd_run.photon.trajectory;
        const double drift = std::max(a.trace_drift, b.trace_drift);
        const double herm = std::max(a.hermiticity_defect, b.hermiticity_defect);
        const double eig = std::min(a.min_eigenvalue, b.min_eigenvalue);
        report(8, "master-equation invariants",
               drift <= 1e-8 && herm <= 1e-9 && eig >= -1e-6,
               fmt("|Tr-1| <= %.1e, herm <= %.1e, min eig >= %.1e", drift, herm, eig));
    }

    // 9. analytic oracles: Rabi, Jaynes-Cummings, damped-cavity G1
    {
        bool pass = true;
        std::string detail;

        // two-level Rabi
        {
            SchemeConfig cfg;
            cfg.params.g0 = 0.0;
            cfg.params.gamma_SP = 1e-9;
            cfg.params.gamma_DP = 0.5e-9;
            cfg.params.B = 0.0;
            cfg.params.cavity.kappa = 1e-9;
            cfg.params.cavity.polarizations = {Polarization::SigmaMinus};
            cfg.params.cavity.fock_cutoffs = {1};
            cfg.params.drive.shape = PulseShape::Flat;
            cfg.params.drive.center = 5.0;
            cfg.params.drive.width = 10.0;
            cfg.params.drive.peak_rabi = angular_from_mhz(0.5);
            cfg.params.drive.polarization_amplitudes = {0.0, 1.0, 0.0};
            cfg.initial_state = {Term::S12, -1};
            cfg.target_state = {Term::D32, -3};
            cfg.window = 10.0;
            cfg.t_grid = {0.0, 10.0, 101};
            const double w =
                std::abs(dipole_weight({Term::P12, -1}, {Term::S12, -1}, Polarization::Pi));
            const double omega_eff = cfg.params.drive.peak_rabi * w;
            EvolveOptions opts;
            opts.check_positivity = false;
            const Trajectory traj = evolve(cfg, build_operators(cfg.params), opts);
            double worst = 0.0;
            for (std::size_t k = 0; k < traj.times.size(); ++k)
                worst = std::max(worst,
                                 std::abs(traj.populations[k][2] -
                                          std::pow(std::sin(0.5 * omega_eff * traj.times[k]), 2)));
            pass = pass && worst <= 1e-6;
            detail += fmt("Rabi dev %.1e", worst);
        }

        // Jaynes-Cummings vacuum Rabi period
        {
            SchemeConfig cfg;
            cfg.params.g0 = angular_from_mhz(0.8);
            cfg.params.gamma_SP = 1e-12;
            cfg.params.gamma_DP = 0.5e-12;
            cfg.params.B = 0.0;
            cfg.params.cavity.kappa = 1e-12;
            cfg.params.cavity.polarizations = {Polarization::SigmaMinus};
            cfg.params.cavity.fock_cutoffs = {1};
            cfg.params.drive.shape = PulseShape::Flat;
            cfg.params.drive.peak_rabi = 0.0;
            cfg.params.drive.width = 1.0;
            cfg.params.drive.polarization_amplitudes = {0.0, 1.0, 0.0};
            cfg.initial_state = {Term::S12, -1};
            cfg.target_state = {Term::D32, -3};
            const OperatorSet ops = build_operators(cfg.params);
            const auto parts = build_hamiltonian(cfg, ops);
            const auto liou = build_liouvillian(parts.h_static, parts.h_drive, ops.collapse_ops);
            std::vector<cplx> rho(liou.vec_dim(), 0.0);
            const int cav_dim = ops.dim / 8;
            const int p_idx = level_index({Term::P12, -1}) * cav_dim;
            rho[vec_index(p_idx, p_idx, ops.dim)] = 1.0;
            const double w = std::abs(
                dipole_weight({Term::P12, -1}, {Term::D32, -3}, Polarization::SigmaMinus));
            const double g_eff = cfg.params.g0 * w;
            const double period = std::numbers::pi / g_eff;  // population period
            std::vector<double> times{0.0, 0.25 * period, 0.5 * period, period, 2.0 * period};
            const auto samples = oracles::propagate_static(liou, rho, times);
            const auto proj = ops.level_projector(level_index({Term::P12, -1}));
            double worst = 0.0;
            for (std::size_t k = 0; k < times.size(); ++k) {
                const double pop = expectation(proj, samples[k], ops.dim).real();
                worst = std::max(worst, std::abs(pop - std::pow(std::cos(g_eff * times[k]), 2)));
            }
            pass = pass && worst <= 1e-6;
            detail += fmt(", JC dev %.1e", worst);
        }

        // damped-cavity G1 closed form
        {
            const double kappa = 1.0;
            const int levels = 3;
            std::vector<std::tuple<int, int, cplx>> at;
            for (int nn = 1; nn < levels; ++nn)
                at.emplace_back(nn - 1, nn, cplx(std::sqrt(static_cast<double>(nn)), 0.0));
            const CsrMatrix a = CsrMatrix::from_triplets(levels, levels, std::move(at));
            const auto liou = build_liouvillian(CsrMatrix::zero(levels, levels),
                                                CsrMatrix::zero(levels, levels),
                                                {a.scaled(std::sqrt(2.0 * kappa))});
            const int n = 16;
            std::vector<double> times;
            for (int i = 0; i < n; ++i) times.push_back(2.0 * i / (n - 1));
            std::vector<cplx> rho(liou.vec_dim(), 0.0);
            rho[vec_index(1, 1, levels)] = 1.0;
            const auto rho_samples = oracles::propagate_static(liou, rho, times);
            const CsrMatrix a_dag = a.adjoint();
            std::vector<RegressionSeed> seeds;
            for (int i = 0; i < n; ++i)
                seeds.push_back(
                    {i, left_multiply(a, rho_samples[static_cast<std::size_t>(i)], levels), &a_dag});
            const auto values = propagate_seeds(liou.gen, levels, [](double) { return 0.0; },
                                                times, std::move(seeds), {}, 1, 8);
            double worst_rel = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    const double expected = std::exp(-kappa * (times[i] + times[j]));
                    worst_rel = std::max(
                        worst_rel,
                        std::abs(values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].real() -
                                 expected) /
                            expected);
                }
            pass = pass && worst_rel <= 1e-5;
            detail += fmt(", G1 rel dev %.1e", worst_rel);
        }
        report(9, "analytic oracles", pass, detail);
    }

    // 10. HOM assembly vs explicit two-copy beam-splitter oracle:
    //     covered by the dedicated oracle tests in sim_tests (same formulas);
    //     here we re-verify the cheapest toy inline.
    {
        const int levels = 3;
        std::vector<std::tuple<int, int, cplx>> at;
        for (int nn = 1; nn < levels; ++nn)
            at.emplace_back(nn - 1, nn, cplx(std::sqrt(static_cast<double>(nn)), 0.0));
        const CsrMatrix a = CsrMatrix::from_triplets(levels, levels, std::move(at));
        const CsrMatrix h = CsrMatrix::zero(levels, levels);
        const CsrMatrix rho0 = CsrMatrix::from_triplets(
            levels, levels, {{1, 1, cplx(0.7, 0.0)}, {2, 2, cplx(0.3, 0.0)}});
        const auto liou = build_liouvillian(h, h, {a.scaled(std::sqrt(2.0))});

        const int n = 8;
        std::vector<double> times;
        for (int i = 0; i < n; ++i) times.push_back(2.0 * i / (n - 1));
        const auto rho_samples = oracles::propagate_static(liou, vectorize(rho0, levels), times);

        const CsrMatrix a_dag = a.adjoint();
        const CsrMatrix n_op = a.adjoint() * a;
        std::vector<RegressionSeed> seeds;
        for (int i = 0; i < n; ++i) {
            seeds.push_back(
                {i, left_multiply(a, rho_samples[static_cast<std::size_t>(i)], levels), &a_dag});
            seeds.push_back({i, sandwich(a, rho_samples[static_cast<std::size_t>(i)], levels), &n_op});
        }
        const auto values = propagate_seeds(liou.gen, levels, [](double) { return 0.0; }, times,
                                            std::move(seeds), {}, 1, 16);
        CorrelationGrid grid;
        grid.times = times;
        grid.n = n;
        grid.has_g1 = grid.has_g2 = true;
        grid.g1.assign(static_cast<std::size_t>(n) * n, 0.0);
        grid.g2.assign(static_cast<std::size_t>(n) * n, 0.0);
        grid.n_of_t.assign(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            const auto& r1 = values[static_cast<std::size_t>(2 * i)];
            const auto& r2 = values[static_cast<std::size_t>(2 * i + 1)];
            grid.n_of_t[static_cast<std::size_t>(i)] = r1[static_cast<std::size_t>(i)].real();
            for (int j = i; j < n; ++j) {
                grid.g1[static_cast<std::size_t>(j) * n + i] = r1[static_cast<std::size_t>(j)];
                grid.g1[static_cast<std::size_t>(i) * n + j] = std::conj(r1[static_cast<std::size_t>(j)]);
                grid.g2[static_cast<std::size_t>(i) * n + j] = r2[static_cast<std::size_t>(j)].real();
                grid.g2[static_cast<std::size_t>(j) * n + i] = r2[static_cast<std::size_t>(j)].real();
            }
        }
        const CoincidenceDensity assembled = coincidence_density(grid, 0.0);

        // explicit two copies + beam splitter
        const CsrMatrix id = CsrMatrix::identity(levels);
        const CsrMatrix h_ab = kron(h, id) + kron(id, h);
        std::vector<CsrMatrix> collapse{kron(a.scaled(std::sqrt(2.0)), id),
                                        kron(id, a.scaled(std::sqrt(2.0)))};
        const auto liou2 = build_liouvillian(h_ab, CsrMatrix::zero(levels * levels, levels * levels),
                                             collapse);
        const CsrMatrix aa = kron(a, id);
        const CsrMatrix bb = kron(id, a);
        const double r = 1.0 / std::sqrt(2.0);
        const CsrMatrix c_op = (aa + bb).scaled(r);
        const CsrMatrix d_op = (aa + bb.scaled(-1.0)).scaled(r);
        const CsrMatrix n_d = d_op.adjoint() * d_op;
        const auto rho2 = oracles::propagate_static(
            liou2, vectorize(kron(rho0, rho0), levels * levels), times);
        std::vector<RegressionSeed> seeds2;
        for (int i = 0; i < n; ++i)
            seeds2.push_back(
                {i, sandwich(c_op, rho2[static_cast<std::size_t>(i)], levels * levels), &n_d});
        const auto oracle = propagate_seeds(liou2.gen, levels * levels,
                                            [](double) { return 0.0; }, times, std::move(seeds2),
                                            {}, 1, 8);
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                worst = std::max(
                    worst, std::abs(assembled.par_at(i, j) -
                                    oracle[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].real()));
        report(10, "HOM assembly vs two-copy oracle", worst <= 1e-8,
               fmt("max deviation %.1e (three-source suite in sim_tests)", worst));
    }

    // 11. Clebsch-Gordan weights vs Wigner 3-j oracle
    {
        double worst = 0.0, worst_norm = 0.0;
        for (const Level& upper : all_levels()) {
            if (upper.term != Term::P12) continue;
            for (Term channel : {Term::S12, Term::D32}) {
                double sum = 0.0;
                for (const Level& lower : all_levels()) {
                    if (lower.term != channel) continue;
                    const int dm2 = lower.m2 - upper.m2;
                    if (std::abs(dm2) > 2) continue;
                    const double w =
                        dipole_weight(upper, lower, static_cast<Polarization>(dm2 / 2));
                    const int two_j_lower = channel == Term::S12 ? 1 : 3;
                    const double ref = oracles::cg_from_3j(two_j_lower, lower.m2, 2,
                                                           upper.m2 - lower.m2, 1, upper.m2);
                    worst = std::max(worst, std::abs(w - ref));
                    sum += w * w;
                }
                worst_norm = std::max(worst_norm, std::abs(sum - 1.0));
            }
        }
        report(11, "dipole weights vs 3-j oracle", worst <= 1e-12 && worst_norm <= 1e-12,
               fmt("max |w - oracle| = %.1e, |sum w^2 - 1| = %.1e", worst, worst_norm));
    }

    // 12. clickstream round trip at full experimental statistics (DD)
    {
        const double v_gen = dd_run.visibility_T5;
        SynthSpec spec;
        spec.efficiency = 0.004;
        spec.window_us = dd.window;
        spec.seed = 20260808;
        // event counts ~ 2 n eps: 4.7M parallel, 4.3M perpendicular
        const long n_par = static_cast<long>(4.7e6 / (2 * spec.efficiency));
        const long n_perp = static_cast<long>(4.3e6 / (2 * spec.efficiency));
        const EventStream s_par = synth_from_density(dd_run.density, true, n_par, spec);
        spec.seed = 20260809;
        const EventStream s_perp = synth_from_density(dd_run.density, false, n_perp, spec);

        const CoincidenceHistogram h_par = cross_correlate(s_par, 0.075, 2.5, dd.window);
        const CoincidenceHistogram h_perp = cross_correlate(s_perp, 0.075, 2.5, dd.window);
        const DataVisibility v = data_visibility(h_par, h_perp, 2.0 * dd.window,
                                                 static_cast<double>(cycle_count(s_par)),
                                                 static_cast<double>(cycle_count(s_perp)));
        long events = 0;
        for (const auto& e : s_par.events)
            if (e.channel != s_par.channel_map.sync) ++events;

        // determinism: regenerate a slice with the same seed
        spec.seed = 20260808;
        const EventStream s_par2 = synth_from_density(dd_run.density, true, n_par, spec);
        bool identical = s_par.events.size() == s_par2.events.size();
        if (identical)
            for (std::size_t k = 0; k < s_par.events.size(); ++k)
                if (s_par.events[k].t_ps != s_par2.events[k].t_ps ||
                    s_par.events[k].channel != s_par2.events[k].channel) {
                    identical = false;
                    break;
                }

        const double dev = std::abs(v.visibility - v_gen);
        report(12, "clickstream round trip",
               dev <= 3.0 * v.sigma && identical,
               fmt("V_rec = %.2f%% +- %.2f%%, V_gen = %.2f%% (|dev| = %.2f sigma), %ld events, "
                   "seed-deterministic: %s",
                   100 * v.visibility, 100 * v.sigma, 100 * v_gen, dev / v.sigma, events,
                   identical ? "yes" : "NO"));
    }

    // 13. convergence: halved tolerances and doubled grid move V by < 0.5pp
    {
        std::printf("== convergence reruns ==\n");
        IntegratorOptions tight = default_tols;
        tight.abs_tol *= 0.5;
        tight.rel_tol *= 0.5;
        const SchemeRun sd_tight = run_pipeline(sd, 128, tight);
        const SchemeRun dd_tight = run_pipeline(dd, 128, tight);
        const SchemeRun sd_fine = run_pipeline(sd, 256, default_tols);
        const SchemeRun dd_fine = run_pipeline(dd, 256, default_tols);

        const double dv_tol_sd = std::abs(sd_tight.visibility_T5 - sd_run.visibility_T5);
        const double dv_tol_dd = std::abs(dd_tight.visibility_T5 - dd_run.visibility_T5);
        const double dv_grid_sd = std::abs(sd_fine.visibility_T5 - sd_run.visibility_T5);
        const double dv_grid_dd = std::abs(dd_fine.visibility_T5 - dd_run.visibility_T5);
        const double g1_change =
            std::abs(sd_fine.g1_sq_integral - sd_run.g1_sq_integral) / sd_run.g1_sq_integral;
        const double dp_sd =
            std::abs(sd_tight.photon.p_emit - sd_run.photon.p_emit) / sd_run.photon.p_emit;

        const bool pass = dv_tol_sd < 0.005 && dv_tol_dd < 0.005 && dv_grid_sd < 0.005 &&
                          dv_grid_dd < 0.005 && g1_change < 0.005 && dp_sd < 1e-4;
        report(13, "convergence",
               pass,
               fmt("dV(tol/2) = %.3fpp/%.3fpp, dV(2n) = %.3fpp/%.3fpp, dInt|G1|^2 = %.2e, "
                   "dP_emit = %.1e rel",
                   100 * dv_tol_sd, 100 * dv_tol_dd, 100 * dv_grid_sd, 100 * dv_grid_dd,
                   g1_change, dp_sd));
    }

    // 6. dominance of the DD efficiency envelope on matched coarse sweeps
    {
        std::printf("== 9x9 sweeps ==\n");
        const std::string dir = std::string(IONPHOTON_SOURCE_DIR) + "/configs/";
        SweepSpec sd_spec = sweep_spec_from_tree(load_config_file(dir + "sweep_sd.toml"));
        SweepSpec dd_spec = sweep_spec_from_tree(load_config_file(dir + "sweep_dd.toml"));
        sd_spec.workers = 2;
        dd_spec.workers = 2;
        const SweepResult sd_sweep = run_sweep(sd_spec);
        const SweepResult dd_sweep = run_sweep(dd_spec);
        long failed = 0;
        for (const auto& c : sd_sweep.cells) failed += c.ok ? 0 : 1;
        for (const auto& c : dd_sweep.cells) failed += c.ok ? 0 : 1;

        const auto points = dominance_report(sd_sweep, dd_sweep, 21);
        bool dominated = true;
        int compared = 0;
        double crossover = 2.0;
        for (const auto& p : points)
            if (p.feasible_a && p.feasible_b) {
                ++compared;
                if (p.counterexample) dominated = false;
            }
        // lowest threshold above which DD dominance holds contiguously
        const auto fine = dominance_report(sd_sweep, dd_sweep, 201);
        for (auto it = fine.rbegin(); it != fine.rend(); ++it) {
            if (!(it->feasible_a && it->feasible_b)) continue;
            if (it->counterexample) break;
            crossover = it->threshold;
        }
        std::printf("    envelope detail: max P_emit %.3f%% (SD) vs %.3f%% (DD); DD leads "
                    "only above V ~ %.3f\n",
                    100 * [&] {
                        double m = 0;
                        for (const auto& c : sd_sweep.cells) m = std::max(m, c.p_emit);
                        return m;
                    }(),
                    100 * [&] {
                        double m = 0;
                        for (const auto& c : dd_sweep.cells) m = std::max(m, c.p_emit);
                        return m;
                    }(),
                    crossover <= 1.0 ? crossover : std::nan(""));
        report(6, "DD efficiency envelope dominates",
               dominated && compared > 0 && failed == 0,
               fmt("%d thresholds compared, %ld failed cells, counterexample: %s", compared,
                   failed, dominated ? "none" : "FOUND"));
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    std::printf("== acceptance finished in %.0f s: %s ==\n", wall,
                failures == 0 ? "all criteria PASS" : fmt("%d criteria FAILED", failures).c_str());
    return failures == 0 ? 0 : 1;
}
