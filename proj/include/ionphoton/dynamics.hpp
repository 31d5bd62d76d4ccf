#pragma once

#include <array>

#include "ionphoton/integrate.hpp"
#include "ionphoton/master.hpp"
#include "ionphoton/operators.hpp"
#include "ionphoton/params.hpp"

namespace ionphoton {

/// Drive Rabi amplitude at time t. For the Gaussian shape, `width` is the
/// sigma of the intensity envelope by default (amplitude sigma = sqrt(2) *
/// width); for the flat shape the pulse spans [center - width/2, center + width/2].
double pulse_envelope(double t, const DrivePulse& pulse);

/// Rotating-frame bookkeeping: per-term diagonal offsets added to the Zeeman
/// shifts, the common cavity-mode diagonal, and the principal Raman path.
/// The frame is chosen so the bare two-photon resonance between the initial
/// and target states sits at zero.
struct FrameInfo {
    double offset_S = 0.0;
    double offset_P = 0.0;
    double offset_D = 0.0;
    double cavity_diag = 0.0;
    int detected_mode = 0;
    Level principal_p{Term::P12, +1};

    double term_offset(Term t) const {
        switch (t) {
            case Term::S12: return offset_S;
            case Term::P12: return offset_P;
            case Term::D32: return offset_D;
        }
        return 0.0;
    }
};

struct HamiltonianParts {
    CsrMatrix h_static;  // frame diagonal + cavity coupling
    CsrMatrix h_drive;   // laser coupling at unit envelope
    FrameInfo frame;
};

/// Builds H(t) = h_static + pulse_envelope(t) * h_drive in the two-photon
/// resonant rotating frame. Throws ConfigError("frame inconsistency ...")
/// when the scheme cannot be absorbed into a single static frame (initial
/// state in P12, target outside D32, or no drive+cavity path connecting
/// initial to target).
HamiltonianParts build_hamiltonian(const SchemeConfig& cfg, const OperatorSet& ops);

/// H at a given time, for inspection and tests.
CsrMatrix hamiltonian_at(double t, const SchemeConfig& cfg, const HamiltonianParts& parts);

struct EvolveOptions {
    IntegratorOptions integrator;
    bool store_states = false;     // keep vectorized rho at every grid point
    bool check_positivity = true;  // eigenvalue check at every sample
    int threads = 1;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::array<double, 8>> populations;      // per level, per sample
    std::vector<std::vector<double>> mode_occupation;    // [mode][sample]
    std::vector<double> flux;                            // detected mode, 1/us
    double trace_drift = 0.0;
    double hermiticity_defect = 0.0;
    double min_eigenvalue = 0.0;
    StepStats stats;
    FrameInfo frame;
    std::vector<std::vector<cplx>> rho_samples;  // filled when store_states
};

/// Initial density operator: prep_fidelity on the initial state, remainder
/// uniformly mixed over the other sublevels of the same term, cavity vacuum.
std::vector<cplx> initial_density(const SchemeConfig& cfg, const OperatorSet& ops);

/// Integrates the Lindblad master equation over cfg.t_grid.
Trajectory evolve(const SchemeConfig& cfg, const OperatorSet& ops,
                  const EvolveOptions& opts = {});

struct PhotonRecord {
    std::vector<double> times;
    std::vector<double> flux;  // 2 kappa * outcoupling * <n_detected>, 1/us
    double p_emit = 0.0;
    std::array<double, 8> final_populations{};
    Trajectory trajectory;
};

PhotonRecord run_scheme(const SchemeConfig& cfg, const EvolveOptions& opts = {});

}  // namespace ionphoton
