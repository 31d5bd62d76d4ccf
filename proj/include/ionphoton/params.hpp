#pragma once

#include <array>
#include <complex>
#include <vector>

#include "ionphoton/atom.hpp"

namespace ionphoton {

enum class Scheme { SD, DD };

enum class PulseShape { Gaussian, Flat };

/// How DrivePulse::width is interpreted for the Gaussian shape. The default
/// treats width as the standard deviation of the *intensity* envelope, so the
/// Rabi amplitude falls off with sigma = sqrt(2)*width; the FWHM variants
/// read it as a full width at half maximum instead.
enum class WidthConvention { IntensitySigma, IntensityFwhm, AmplitudeSigma, AmplitudeFwhm };

/// Whether the drive detuning is measured from the unshifted line center or
/// from the Zeeman-shifted line of the principal Raman path.
enum class DetuningReference { LineCenter, ZeemanShifted };

/// How drive matrix elements are formed. Dipole scales each channel by the
/// polarization amplitude times its Clebsch-Gordan factor; Uniform couples
/// every channel of a present polarization component at the bare Omega/2.
enum class DriveCoupling { Dipole, Uniform };

struct DrivePulse {
    PulseShape shape = PulseShape::Gaussian;
    double peak_rabi = 0.0;       // rad/us
    double center = 0.0;          // us
    double width = 0.0;           // us, see WidthConvention
    double detuning = 0.0;        // rad/us, sign: <0 red, >0 blue
    WidthConvention width_convention = WidthConvention::IntensitySigma;
    DetuningReference detuning_reference = DetuningReference::LineCenter;
    DriveCoupling coupling = DriveCoupling::Dipole;
    // Complex amplitudes for the sigma-, pi, sigma+ drive components, in that
    // order; |amps|^2 must sum to one. A component p couples lower -> upper
    // transitions with m_upper = m_lower + p (absorption convention).
    std::array<std::complex<double>, 3> polarization_amplitudes{0.0, 0.0, 0.0};

    std::complex<double> amplitude(Polarization p) const {
        return polarization_amplitudes[static_cast<std::size_t>(delta_m(p) + 1)];
    }
    void set_amplitude(Polarization p, std::complex<double> a) {
        polarization_amplitudes[static_cast<std::size_t>(delta_m(p) + 1)] = a;
    }
};

struct CavityModeConfig {
    // Mode polarization labels, in basis order. A mode with polarization q
    // couples P -> D transitions with m_D - m_P = delta_m(q).
    std::vector<Polarization> polarizations{Polarization::SigmaPlus,
                                            Polarization::SigmaMinus};
    std::vector<int> fock_cutoffs{2, 2};  // per mode, >= 1
    double kappa = 0.0;                   // field half-linewidth, rad/us
    double outcoupling_fraction = 1.0;    // photon fraction leaving via the output mirror
    double detuning = 0.0;  // rad/us, offset from the two-photon resonant frequency

    int cutoff(std::size_t mode) const { return fock_cutoffs.at(mode); }
    std::size_t n_modes() const { return polarizations.size(); }
};

struct SystemParams {
    double g0 = 0.0;        // rad/us
    double gamma_SP = 0.0;  // rad/us, P12 -> S12 decay rate
    double gamma_DP = 0.0;  // rad/us, P12 -> D32 decay rate
    double B = 0.0;         // gauss
    CavityModeConfig cavity;
    Scheme scheme = Scheme::SD;
    DrivePulse drive;
    double prep_fidelity = 1.0;
};

struct GridSpec {
    double t0 = 0.0;
    double t1 = 2.5;
    int n_points = 251;
};

struct SchemeConfig {
    SystemParams params;
    Level initial_state{Term::S12, -1};
    Level target_state{Term::D32, +3};
    double window = 2.5;  // us, photon generation slot
    GridSpec t_grid{0.0, 2.5, 251};
};

/// Shipped S -> D scheme preset (397 nm, sigma+ & pi drive).
SchemeConfig sd_paper_config();

/// Shipped D -> D scheme preset (866 nm, sigma+ + sigma- drive).
SchemeConfig dd_paper_config();

/// Validates every documented invariant; throws ConfigError naming the field.
void validate(const SchemeConfig& cfg);

}  // namespace ionphoton
