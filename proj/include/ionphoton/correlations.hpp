#pragma once

#include <functional>

#include "ionphoton/dynamics.hpp"

namespace ionphoton {

/// Two-time correlation functions of the detected cavity mode on a uniform
/// grid. g1[i*n+j] = <a^dag(t_i) a(t_j)>, g2[i*n+j] =
/// <a^dag(t_i) a^dag(t_j) a(t_j) a(t_i)>.
struct CorrelationGrid {
    std::vector<double> times;
    int n = 0;
    std::vector<cplx> g1;
    std::vector<double> g2;
    std::vector<double> n_of_t;
    bool has_g1 = false;
    bool has_g2 = false;
    bool coarse = false;  // n < 64: too coarse for HOM assembly
    double kappa = 0.0;
    double outcoupling = 0.0;

    cplx g1_at(int i, int j) const { return g1[static_cast<std::size_t>(i) * n + j]; }
    double g2_at(int i, int j) const { return g2[static_cast<std::size_t>(i) * n + j]; }
};

struct CorrelationOptions {
    IntegratorOptions integrator;
    int threads = 1;
    int batch = 64;  // lockstep seeds per propagation pass
    bool want_g1 = true;
    bool want_g2 = true;
};

/// One regression evolution seed: a vectorized operator injected at grid
/// index `start`, read out through Tr[readout * chi(t_j)] at every later
/// grid point.
struct RegressionSeed {
    int start = 0;
    std::vector<cplx> state;
    const CsrMatrix* readout = nullptr;
};

/// Propagates seeds under d chi/dt = (A + f(t) B) chi in lockstep batches.
/// Returns values[seed][j] for j >= seed.start (zero before). Deterministic
/// for fixed batch size regardless of thread count.
std::vector<std::vector<cplx>> propagate_seeds(
    const DualCsr& gen, int dim, const std::function<double(double)>& envelope,
    const std::vector<double>& times, std::vector<RegressionSeed> seeds,
    const IntegratorOptions& iopts, int threads, int batch_size);

/// Full G1/G2 grid for a scheme via the quantum regression theorem;
/// n >= 16 required.
CorrelationGrid compute_correlations(const SchemeConfig& cfg, int n,
                                     const CorrelationOptions& opts = {});

/// G1-only and G2-only variants of compute_correlations.
CorrelationGrid g1_grid(const SchemeConfig& cfg, int n, const CorrelationOptions& opts = {});
CorrelationGrid g2_grid(const SchemeConfig& cfg, int n, const CorrelationOptions& opts = {});

/// 2 kappa * outcoupling * integral of n(t); cross-checks run_scheme's P_emit.
double emission_probability(const CorrelationGrid& grid, const CavityModeConfig& cavity);

}  // namespace ionphoton
