#include "ionphoton/operators.hpp"

#include <cmath>
#include <string>

namespace ionphoton {

int OperatorSet::index_of(int level_idx, const std::vector<int>& ns) const {
    int idx = level_idx;
    for (std::size_t m = 0; m < cutoffs.size(); ++m)
        idx = idx * (cutoffs[m] + 1) + ns.at(m);
    return idx;
}

void OperatorSet::decompose(int index, int& level_idx, std::vector<int>& ns) const {
    ns.assign(cutoffs.size(), 0);
    for (std::size_t m = cutoffs.size(); m-- > 0;) {
        const int base = cutoffs[m] + 1;
        ns[m] = index % base;
        index /= base;
    }
    level_idx = index;
}

CsrMatrix OperatorSet::level_projector(int level_idx) const {
    int cav_dim = 1;
    for (int c : cutoffs) cav_dim *= c + 1;
    std::vector<std::tuple<int, int, cplx>> t;
    for (int k = 0; k < cav_dim; ++k) {
        const int i = level_idx * cav_dim + k;
        t.emplace_back(i, i, cplx(1.0, 0.0));
    }
    return CsrMatrix::from_triplets(dim, dim, std::move(t));
}

namespace {

void validate_params(const SystemParams& p) {
    if (p.gamma_SP <= 0 || p.gamma_DP <= 0)
        throw ConfigError("gamma_SP and gamma_DP must be positive");
    if (p.gamma_SP <= p.gamma_DP)
        throw ConfigError("gamma_SP must exceed gamma_DP for 40Ca+");
    if (p.g0 < 0) throw ConfigError("g0 must be nonnegative");
    if (p.B < 0) throw ConfigError("B must be nonnegative");
    if (p.cavity.kappa <= 0) throw ConfigError("cavity.kappa must be positive");
    if (p.cavity.outcoupling_fraction < 0 || p.cavity.outcoupling_fraction > 1)
        throw ConfigError("cavity.outcoupling_fraction must lie in [0, 1]");
    if (p.cavity.polarizations.empty())
        throw ConfigError("cavity must have at least one mode");
    if (p.cavity.fock_cutoffs.size() != p.cavity.polarizations.size())
        throw ConfigError("cavity.fock_cutoffs must match cavity.polarizations");
    for (int c : p.cavity.fock_cutoffs)
        if (c < 1) throw ConfigError("cavity.fock_cutoff must be >= 1");
    for (Polarization q : p.cavity.polarizations)
        if (q == Polarization::Pi)
            throw ConfigError("pi-polarized cavity modes do not couple along the cavity axis");
    if (p.prep_fidelity < 0 || p.prep_fidelity > 1)
        throw ConfigError("prep_fidelity must lie in [0, 1]");
    double norm = 0.0;
    for (const auto& amp : p.drive.polarization_amplitudes) norm += std::norm(amp);
    if (p.drive.peak_rabi > 0 && std::abs(norm - 1.0) > 1e-9)
        throw ConfigError("drive.polarization_amplitudes must have unit norm");
    if (p.drive.peak_rabi < 0) throw ConfigError("drive.peak_rabi must be nonnegative");
    if (p.drive.shape == PulseShape::Gaussian && p.drive.width <= 0)
        throw ConfigError("drive.width must be positive");
}

// Single-mode ladder operator on a (cutoff+1)-dimensional Fock space.
CsrMatrix fock_lowering(int cutoff) {
    std::vector<std::tuple<int, int, cplx>> t;
    for (int n = 1; n <= cutoff; ++n)
        t.emplace_back(n - 1, n, cplx(std::sqrt(static_cast<double>(n)), 0.0));
    return CsrMatrix::from_triplets(cutoff + 1, cutoff + 1, std::move(t));
}

}  // namespace

OperatorSet build_operators(const SystemParams& params, int max_dim) {
    validate_params(params);

    OperatorSet ops;
    ops.mode_polarizations = params.cavity.polarizations;
    ops.cutoffs = params.cavity.fock_cutoffs;

    long dim = 8;
    for (int c : ops.cutoffs) dim *= c + 1;
    if (dim > max_dim)
        throw ConfigError("dimension overflow: composite dimension " + std::to_string(dim) +
                          " exceeds bound " + std::to_string(max_dim));
    ops.dim = static_cast<int>(dim);

    const std::size_t n_modes = ops.cutoffs.size();

    // Ion-space operators lifted to the composite space.
    auto embed_ion = [&](int lower_idx, int upper_idx) {
        CsrMatrix m = CsrMatrix::zero(8, 8);
        std::vector<std::tuple<int, int, cplx>> t{{lower_idx, upper_idx, cplx(1.0, 0.0)}};
        m = CsrMatrix::from_triplets(8, 8, std::move(t));
        CsrMatrix out = m;
        for (std::size_t k = 0; k < n_modes; ++k)
            out = kron(out, CsrMatrix::identity(ops.cutoffs[k] + 1));
        return out;
    };

    // Cavity ladder operators lifted to the composite space.
    ops.a.resize(n_modes);
    ops.number.resize(n_modes);
    for (std::size_t m = 0; m < n_modes; ++m) {
        CsrMatrix out = CsrMatrix::identity(8);
        for (std::size_t k = 0; k < n_modes; ++k) {
            const CsrMatrix factor = (k == m) ? fock_lowering(ops.cutoffs[k])
                                              : CsrMatrix::identity(ops.cutoffs[k] + 1);
            out = kron(out, factor);
        }
        ops.a[m] = out;
        ops.number[m] = out.adjoint() * out;
    }

    // Dipole lowering operators for every allowed decay pair.
    for (const Level& upper : all_levels()) {
        if (upper.term != Term::P12) continue;
        for (const Level& lower : all_levels()) {
            if (lower.term == Term::P12) continue;
            const int dm2 = lower.m2 - upper.m2;
            if (dm2 != -2 && dm2 != 0 && dm2 != 2) continue;
            ops.sigma[{level_index(upper), level_index(lower)}] =
                embed_ion(level_index(lower), level_index(upper));
        }
    }

    // Collapse operators: one per Zeeman decay channel plus cavity loss.
    for (const auto& [key, sig] : ops.sigma) {
        const Level upper = all_levels()[static_cast<std::size_t>(key.first)];
        const Level lower = all_levels()[static_cast<std::size_t>(key.second)];
        const auto q = static_cast<Polarization>((lower.m2 - upper.m2) / 2);
        const double w = dipole_weight(upper, lower, q);
        const double gamma = lower.term == Term::S12 ? params.gamma_SP : params.gamma_DP;
        ops.collapse_ops.push_back(sig.scaled(std::sqrt(gamma) * w));
    }
    for (std::size_t m = 0; m < n_modes; ++m)
        ops.collapse_ops.push_back(ops.a[m].scaled(std::sqrt(2.0 * params.cavity.kappa)));

    return ops;
}

}  // namespace ionphoton
