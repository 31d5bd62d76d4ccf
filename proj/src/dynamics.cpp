#include "ionphoton/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "ionphoton/threading.hpp"

namespace ionphoton {

double pulse_envelope(double t, const DrivePulse& pulse) {
    switch (pulse.shape) {
        case PulseShape::Flat: {
            const double lo = pulse.center - 0.5 * pulse.width;
            const double hi = pulse.center + 0.5 * pulse.width;
            return (t >= lo && t <= hi) ? pulse.peak_rabi : 0.0;
        }
        case PulseShape::Gaussian: {
            constexpr double fwhm_to_sigma = 0.42466090014400953;  // 1 / (2 sqrt(2 ln 2))
            double sigma = pulse.width;
            switch (pulse.width_convention) {
                case WidthConvention::IntensitySigma: sigma = pulse.width * std::sqrt(2.0); break;
                case WidthConvention::IntensityFwhm:
                    sigma = pulse.width * fwhm_to_sigma * std::sqrt(2.0);
                    break;
                case WidthConvention::AmplitudeSigma: sigma = pulse.width; break;
                case WidthConvention::AmplitudeFwhm: sigma = pulse.width * fwhm_to_sigma; break;
            }
            const double u = (t - pulse.center) / sigma;
            return pulse.peak_rabi * std::exp(-0.5 * u * u);
        }
    }
    return 0.0;
}

namespace {

struct RamanPath {
    Level p_level;
    int mode;
    double strength;
};

// Enumerates (P sublevel, cavity mode) pairs that connect the initial state
// to the target through one drive component and one cavity photon.
std::vector<RamanPath> raman_paths(const SchemeConfig& cfg, const OperatorSet& ops) {
    std::vector<RamanPath> paths;
    const SystemParams& p = cfg.params;
    for (const Level& upper : all_levels()) {
        if (upper.term != Term::P12) continue;
        // Drive component reaching this P level from the initial state:
        // component q raises m by delta_m(q) on absorption.
        const int dm2 = upper.m2 - cfg.initial_state.m2;
        if (dm2 != -2 && dm2 != 0 && dm2 != 2) continue;
        const auto pol = static_cast<Polarization>(dm2 / 2);
        const cplx amp = p.drive.amplitude(pol);
        if (std::abs(amp) == 0.0) continue;
        const double w_drive =
            dipole_weight(upper, cfg.initial_state, static_cast<Polarization>(-dm2 / 2));
        for (std::size_t m = 0; m < ops.mode_polarizations.size(); ++m) {
            const Polarization q = ops.mode_polarizations[m];
            if (cfg.target_state.m2 != upper.m2 + 2 * delta_m(q)) continue;
            const double w_cav = dipole_weight(upper, cfg.target_state, q);
            paths.push_back({upper, static_cast<int>(m),
                             std::abs(amp) * std::abs(w_drive) * std::abs(w_cav)});
        }
    }
    return paths;
}

}  // namespace

HamiltonianParts build_hamiltonian(const SchemeConfig& cfg, const OperatorSet& ops) {
    const SystemParams& p = cfg.params;
    if (!is_valid_level(cfg.initial_state) || !is_valid_level(cfg.target_state))
        throw ConfigError("frame inconsistency: invalid initial or target state");
    if (cfg.initial_state.term == Term::P12)
        throw ConfigError("frame inconsistency: initial state may not be in P12");
    if (cfg.target_state.term != Term::D32)
        throw ConfigError("frame inconsistency: target state must be a D32 sublevel");

    const auto paths = raman_paths(cfg, ops);
    if (paths.empty())
        throw ConfigError("frame inconsistency: no drive+cavity path connects " +
                          level_name(cfg.initial_state) + " to " +
                          level_name(cfg.target_state));
    const RamanPath principal =
        *std::max_element(paths.begin(), paths.end(),
                          [](const RamanPath& a, const RamanPath& b) {
                              return a.strength < b.strength;
                          });

    FrameInfo frame;
    frame.detected_mode = principal.mode;
    frame.principal_p = principal.p_level;

    const double B = p.B;
    const double z_init = zeeman_shift(cfg.initial_state, B);
    const double z_target = zeeman_shift(cfg.target_state, B);
    const Term lowman = cfg.initial_state.term;

    frame.offset_S = lowman == Term::S12 ? -z_init : 0.0;
    frame.offset_D = lowman == Term::D32 ? -z_init : -z_target;
    frame.offset_P = p.drive.detuning_reference == DetuningReference::ZeemanShifted
                         ? -zeeman_shift(frame.principal_p, B) - p.drive.detuning
                         : -z_init - p.drive.detuning;
    // Cavity frequency follows the two-photon resonance for the selected pair;
    // cavity.detuning is an extra offset on top of that.
    frame.cavity_diag = -(z_target + frame.offset_D) + p.cavity.detuning;

    // Static part: frame diagonal + cavity coupling.
    std::vector<std::tuple<int, int, cplx>> diag;
    int cav_dim = 1;
    for (int c : ops.cutoffs) cav_dim *= c + 1;
    for (const Level& lvl : all_levels()) {
        const double e = zeeman_shift(lvl, B) + frame.term_offset(lvl.term);
        if (e == 0.0) continue;
        const int base = level_index(lvl) * cav_dim;
        for (int k = 0; k < cav_dim; ++k) diag.emplace_back(base + k, base + k, cplx(e, 0.0));
    }
    CsrMatrix h_static = CsrMatrix::from_triplets(ops.dim, ops.dim, std::move(diag));
    for (std::size_t m = 0; m < ops.mode_polarizations.size(); ++m)
        h_static = h_static + ops.number[m].scaled(frame.cavity_diag);

    for (std::size_t m = 0; m < ops.mode_polarizations.size(); ++m) {
        const Polarization q = ops.mode_polarizations[m];
        for (const Level& upper : all_levels()) {
            if (upper.term != Term::P12) continue;
            const Level lower{Term::D32, upper.m2 + 2 * delta_m(q)};
            if (!is_valid_level(lower)) continue;
            const double w = dipole_weight(upper, lower, q);
            const auto& sig = ops.sigma.at({level_index(upper), level_index(lower)});
            const CsrMatrix coupling = ops.a[m].adjoint() * sig;
            h_static = h_static + (coupling + coupling.adjoint()).scaled(p.g0 * w);
        }
    }

    // Drive part at unit envelope. A component q couples lower -> upper with
    // m_upper = m_lower + delta_m(q) (absorption); the transition label for
    // the weight lookup is the opposite sign.
    CsrMatrix h_drive = CsrMatrix::zero(ops.dim, ops.dim);
    for (const Polarization pol :
         {Polarization::SigmaMinus, Polarization::Pi, Polarization::SigmaPlus}) {
        const cplx amp = p.drive.amplitude(pol);
        if (std::abs(amp) == 0.0) continue;
        for (const Level& lower : all_levels()) {
            if (lower.term != lowman) continue;
            const Level upper{Term::P12, lower.m2 + 2 * delta_m(pol)};
            if (!is_valid_level(upper)) continue;
            const double w =
                dipole_weight(upper, lower, static_cast<Polarization>(-delta_m(pol)));
            const cplx element = p.drive.coupling == DriveCoupling::Uniform
                                     ? cplx(0.5, 0.0) * (amp / std::abs(amp))
                                     : cplx(0.5, 0.0) * amp * w;
            const auto& sig = ops.sigma.at({level_index(upper), level_index(lower)});
            h_drive = h_drive + sig.adjoint().scaled(element) +
                      sig.scaled(std::conj(element));
        }
    }

    return {std::move(h_static), std::move(h_drive), frame};
}

CsrMatrix hamiltonian_at(double t, const SchemeConfig& cfg, const HamiltonianParts& parts) {
    return parts.h_static + parts.h_drive.scaled(pulse_envelope(t, cfg.params.drive));
}

std::vector<cplx> initial_density(const SchemeConfig& cfg, const OperatorSet& ops) {
    std::vector<cplx> rho(static_cast<std::size_t>(ops.dim) * ops.dim, cplx(0.0, 0.0));
    int cav_dim = 1;
    for (int c : ops.cutoffs) cav_dim *= c + 1;

    const double f = cfg.params.prep_fidelity;
    std::vector<int> others;
    for (const Level& lvl : all_levels())
        if (lvl.term == cfg.initial_state.term && !(lvl == cfg.initial_state))
            others.push_back(level_index(lvl));

    const int init_idx = level_index(cfg.initial_state) * cav_dim;  // vacuum block
    rho[vec_index(init_idx, init_idx, ops.dim)] = f;
    if (!others.empty() && f < 1.0) {
        const double rest = (1.0 - f) / static_cast<double>(others.size());
        for (int lvl : others) {
            const int i = lvl * cav_dim;
            rho[vec_index(i, i, ops.dim)] = rest;
        }
    }
    return rho;
}

Trajectory evolve(const SchemeConfig& cfg, const OperatorSet& ops, const EvolveOptions& opts) {
    const auto parts = build_hamiltonian(cfg, ops);
    const auto liou = build_liouvillian(parts.h_static, parts.h_drive, ops.collapse_ops);
    const int d = ops.dim;
    const std::size_t n_vec = liou.vec_dim();

    if (cfg.t_grid.n_points < 2) throw ConfigError("t_grid.n_points must be >= 2");
    std::vector<double> times(static_cast<std::size_t>(cfg.t_grid.n_points));
    const double dt = (cfg.t_grid.t1 - cfg.t_grid.t0) / (cfg.t_grid.n_points - 1);
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = cfg.t_grid.t0 + dt * static_cast<double>(i);

    Trajectory traj;
    traj.times = times;
    traj.frame = parts.frame;
    traj.populations.resize(times.size());
    traj.mode_occupation.assign(ops.a.size(), std::vector<double>(times.size(), 0.0));
    traj.flux.assign(times.size(), 0.0);
    if (opts.store_states) traj.rho_samples.resize(times.size());

    const double kappa = cfg.params.cavity.kappa;
    const double out_frac = cfg.params.cavity.outcoupling_fraction;
    const DrivePulse drive = cfg.params.drive;
    const int cav_dim = d / 8;

    WorkerPool pool(opts.threads);
    const DualCsr& gen = liou.gen;
    auto rhs = [&](double t, const cplx* y, cplx* dy) {
        const double f = pulse_envelope(t, drive);
        pool.run([&](int chunk, int n_chunks) {
            const int r0 = static_cast<int>((static_cast<long>(gen.dim) * chunk) / n_chunks);
            const int r1 = static_cast<int>((static_cast<long>(gen.dim) * (chunk + 1)) / n_chunks);
            gen.apply_block(f, y, dy, 1, r0, r1);
        });
    };

    std::vector<cplx> rho = initial_density(cfg, ops);

    auto on_sample = [&](std::size_t k, double /*t*/, const cplx* y) {
        std::vector<cplx> rv(y, y + n_vec);
        const double tr_err = std::abs(trace_of_vec(rv, d) - 1.0);
        traj.trace_drift = std::max(traj.trace_drift, tr_err);
        traj.hermiticity_defect = std::max(traj.hermiticity_defect, hermiticity_defect(rv, d));
        for (const Level& lvl : all_levels()) {
            double pop = 0.0;
            const int base = level_index(lvl) * cav_dim;
            for (int j = 0; j < cav_dim; ++j)
                pop += rv[vec_index(base + j, base + j, d)].real();
            traj.populations[k][static_cast<std::size_t>(level_index(lvl))] = pop;
        }
        for (std::size_t m = 0; m < ops.number.size(); ++m)
            traj.mode_occupation[m][k] = expectation(ops.number[m], rv, d).real();
        traj.flux[k] = 2.0 * kappa * out_frac *
                       traj.mode_occupation[static_cast<std::size_t>(parts.frame.detected_mode)][k];
        if (opts.check_positivity) {
            const double lam = min_eigenvalue(rv, d);
            traj.min_eigenvalue = std::min(traj.min_eigenvalue, lam);
            if (lam < -1e-6)
                throw NumericsError("positivity violation: min eigenvalue " +
                                    std::to_string(lam));
        }
        if (opts.store_states) traj.rho_samples[k] = std::move(rv);
    };

    traj.stats = adaptive_integrate(n_vec, rhs, rho, times.front(), times.back(), times,
                                    on_sample, opts.integrator);
    if (traj.trace_drift > 1e-6)
        throw NumericsError("integrator failure: trace drift " +
                            std::to_string(traj.trace_drift));
    return traj;
}

PhotonRecord run_scheme(const SchemeConfig& cfg, const EvolveOptions& opts) {
    const OperatorSet ops = build_operators(cfg.params);
    Trajectory traj = evolve(cfg, ops, opts);

    PhotonRecord rec;
    rec.times = traj.times;
    rec.flux = traj.flux;
    double integral = 0.0;
    for (std::size_t i = 1; i < traj.times.size(); ++i)
        integral += 0.5 * (traj.flux[i] + traj.flux[i - 1]) * (traj.times[i] - traj.times[i - 1]);
    const double residual =
        traj.mode_occupation[static_cast<std::size_t>(traj.frame.detected_mode)].back() *
        cfg.params.cavity.outcoupling_fraction;
    rec.p_emit = integral + residual;
    rec.final_populations = traj.populations.back();
    rec.trajectory = std::move(traj);
    return rec;
}

}  // namespace ionphoton
