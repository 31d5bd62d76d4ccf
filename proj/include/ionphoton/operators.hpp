#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ionphoton/params.hpp"
#include "ionphoton/sparse.hpp"

namespace ionphoton {

/// All operators of the composite ion (x) cavity space, embedded with the ion
/// index slowest and the cavity modes in listed order. Immutable once built;
/// safe to share across threads.
struct OperatorSet {
    int dim = 0;
    std::vector<Polarization> mode_polarizations;
    std::vector<int> cutoffs;

    // Lowering operators |lower><upper| per dipole-allowed decay pair, keyed
    // by (upper level index, lower level index).
    std::map<std::pair<int, int>, CsrMatrix> sigma;
    std::vector<CsrMatrix> a;       // annihilation per mode
    std::vector<CsrMatrix> number;  // a^dag a per mode
    std::vector<CsrMatrix> collapse_ops;  // rates absorbed: sqrt(G w^2) sigma, sqrt(2 kappa) a

    /// Composite basis index from ion level index and per-mode photon numbers.
    int index_of(int level_idx, const std::vector<int>& ns) const;
    /// Inverse of index_of.
    void decompose(int index, int& level_idx, std::vector<int>& ns) const;

    /// Projector |level><level| (x) identity.
    CsrMatrix level_projector(int level_idx) const;
};

/// Builds the operator set. Throws ConfigError("dimension overflow ...") when
/// the composite dimension exceeds max_dim.
OperatorSet build_operators(const SystemParams& params, int max_dim = 4096);

}  // namespace ionphoton
