#include "ionphoton/correlations.hpp"

#include <algorithm>
#include <cmath>

#include "ionphoton/threading.hpp"

namespace ionphoton {

namespace {

cplx expectation_column(const CsrMatrix& op, const cplx* flat, int width, int column,
                        int dim) {
    // Tr[O chi] = sum_rc O(r,c) chi(c,r); chi element (row, col) of seed b sits
    // at flat[vec_index(row, col, dim) * width + b].
    cplx acc = 0.0;
    for (int r = 0; r < op.rows; ++r)
        for (int k = op.row_ptr[static_cast<std::size_t>(r)];
             k < op.row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            const int c = op.col[static_cast<std::size_t>(k)];
            acc += op.val[static_cast<std::size_t>(k)] *
                   flat[vec_index(c, r, dim) * width + column];
        }
    return acc;
}

}  // namespace

std::vector<std::vector<cplx>> propagate_seeds(
    const DualCsr& gen, int dim, const std::function<double(double)>& envelope,
    const std::vector<double>& times, std::vector<RegressionSeed> seeds,
    const IntegratorOptions& iopts, int threads, int batch_size) {
    const std::size_t n_times = times.size();
    const std::size_t vec_len = static_cast<std::size_t>(dim) * dim;
    std::vector<std::vector<cplx>> values(seeds.size(), std::vector<cplx>(n_times, cplx(0.0, 0.0)));

    for (std::size_t s = 1; s < seeds.size(); ++s)
        if (seeds[s].start < seeds[s - 1].start)
            throw NumericsError("regression seeds must be ordered by start index");

    WorkerPool pool(threads);
    if (batch_size < 1) batch_size = 1;

    for (std::size_t batch_begin = 0; batch_begin < seeds.size();
         batch_begin += static_cast<std::size_t>(batch_size)) {
        const std::size_t batch_end =
            std::min(seeds.size(), batch_begin + static_cast<std::size_t>(batch_size));
        std::vector<cplx> flat;
        int width = 0;
        std::size_t next_seed = batch_begin;
        double h_carry = 0.0;

        for (std::size_t k = seeds[batch_begin].start >= 0
                                 ? static_cast<std::size_t>(seeds[batch_begin].start)
                                 : 0;
             k < n_times; ++k) {
            // Activate seeds starting at this grid index.
            int fresh = 0;
            while (next_seed < batch_end &&
                   seeds[next_seed].start == static_cast<int>(k))
                ++fresh, ++next_seed;
            if (fresh > 0) {
                const int new_width = width + fresh;
                std::vector<cplx> grown(vec_len * static_cast<std::size_t>(new_width));
                pool.run([&](int chunk, int n_chunks) {
                    const std::size_t lo = vec_len * chunk / n_chunks;
                    const std::size_t hi = vec_len * (chunk + 1) / n_chunks;
                    for (std::size_t i = lo; i < hi; ++i) {
                        for (int b = 0; b < width; ++b)
                            grown[i * new_width + b] = flat[i * static_cast<std::size_t>(width) + b];
                        for (int b = 0; b < fresh; ++b)
                            grown[i * new_width + width + b] =
                                seeds[next_seed - fresh + b].state[i];
                    }
                });
                flat.swap(grown);
                width = new_width;
                for (int b = 0; b < fresh; ++b) {
                    const std::size_t s = next_seed - static_cast<std::size_t>(fresh) + b;
                    values[s][k] = expectation(*seeds[s].readout, seeds[s].state, dim);
                    seeds[s].state.clear();
                    seeds[s].state.shrink_to_fit();
                }
            }
            if (width == 0 || k + 1 >= n_times) {
                if (k + 1 >= n_times) break;
                continue;
            }

            // Advance the whole block by one grid interval.
            auto rhs = [&](double t, const cplx* x, cplx* dx) {
                const double f = envelope(t);
                pool.run([&](int chunk, int n_chunks) {
                    const int r0 = static_cast<int>((static_cast<long>(gen.dim) * chunk) / n_chunks);
                    const int r1 = static_cast<int>((static_cast<long>(gen.dim) * (chunk + 1)) / n_chunks);
                    gen.apply_block(f, x, dx, width, r0, r1);
                });
            };
            IntegratorOptions seg_opts = iopts;
            seg_opts.h_init = h_carry;
            const StepStats st =
                adaptive_integrate(vec_len * static_cast<std::size_t>(width), rhs, flat,
                                   times[k], times[k + 1], {}, nullptr, seg_opts);
            h_carry = st.h_final;

            for (std::size_t s = batch_begin; s < next_seed; ++s) {
                const int column = static_cast<int>(s - batch_begin);
                values[s][k + 1] =
                    expectation_column(*seeds[s].readout, flat.data(), width, column, dim);
            }
        }
    }
    return values;
}

CorrelationGrid compute_correlations(const SchemeConfig& cfg, int n,
                                     const CorrelationOptions& opts) {
    if (n < 16) throw ConfigError("grid too coarse: correlation grid needs n >= 16");
    const OperatorSet ops = build_operators(cfg.params);
    const auto parts = build_hamiltonian(cfg, ops);
    const auto liou = build_liouvillian(parts.h_static, parts.h_drive, ops.collapse_ops);

    const int det = parts.frame.detected_mode;
    if (opts.want_g2 && ops.cutoffs[static_cast<std::size_t>(det)] < 2)
        throw ConfigError("G2 requires fock_cutoff >= 2 on the detected mode");

    SchemeConfig base_cfg = cfg;
    base_cfg.t_grid.n_points = n;
    EvolveOptions eopts;
    eopts.integrator = opts.integrator;
    eopts.threads = opts.threads;
    eopts.store_states = true;
    const Trajectory base = evolve(base_cfg, ops, eopts);

    const CsrMatrix& a = ops.a[static_cast<std::size_t>(det)];
    const CsrMatrix a_dag = a.adjoint();
    const CsrMatrix& n_op = ops.number[static_cast<std::size_t>(det)];
    const DrivePulse drive = cfg.params.drive;

    std::vector<RegressionSeed> seeds;
    seeds.reserve(static_cast<std::size_t>(n) * 2);
    for (int i = 0; i < n; ++i) {
        if (opts.want_g1)
            seeds.push_back({i, left_multiply(a, base.rho_samples[static_cast<std::size_t>(i)], ops.dim), &a_dag});
        if (opts.want_g2)
            seeds.push_back({i, sandwich(a, base.rho_samples[static_cast<std::size_t>(i)], ops.dim), &n_op});
    }

    const auto values = propagate_seeds(
        liou.gen, ops.dim, [drive](double t) { return pulse_envelope(t, drive); },
        base.times, std::move(seeds), opts.integrator, opts.threads, opts.batch);

    CorrelationGrid grid;
    grid.times = base.times;
    grid.n = n;
    grid.kappa = cfg.params.cavity.kappa;
    grid.outcoupling = cfg.params.cavity.outcoupling_fraction;
    grid.coarse = n < 64;
    grid.has_g1 = opts.want_g1;
    grid.has_g2 = opts.want_g2;
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    if (opts.want_g1) grid.g1.assign(nn, cplx(0.0, 0.0));
    if (opts.want_g2) grid.g2.assign(nn, 0.0);
    grid.n_of_t.assign(static_cast<std::size_t>(n), 0.0);

    std::size_t s = 0;
    for (int i = 0; i < n; ++i) {
        if (opts.want_g1) {
            const auto& row = values[s++];
            // row[j] = <a^dag(t_j) a(t_i)> for j >= i
            for (int j = i; j < n; ++j) {
                grid.g1[static_cast<std::size_t>(j) * n + i] = row[static_cast<std::size_t>(j)];
                grid.g1[static_cast<std::size_t>(i) * n + j] =
                    std::conj(row[static_cast<std::size_t>(j)]);
            }
            grid.n_of_t[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i)].real();
        }
        if (opts.want_g2) {
            const auto& row = values[s++];
            for (int j = i; j < n; ++j) {
                const double w = row[static_cast<std::size_t>(j)].real();
                grid.g2[static_cast<std::size_t>(i) * n + j] = w;
                grid.g2[static_cast<std::size_t>(j) * n + i] = w;
            }
        }
    }
    if (!opts.want_g1)
        for (int i = 0; i < n; ++i)
            grid.n_of_t[static_cast<std::size_t>(i)] =
                base.mode_occupation[static_cast<std::size_t>(det)][static_cast<std::size_t>(i)];

    // Contract checks: Hermitian G1 with real nonnegative diagonal,
    // Cauchy-Schwarz across entries, symmetric nonnegative G2.
    for (int i = 0; i < n; ++i) {
        if (grid.n_of_t[static_cast<std::size_t>(i)] < -1e-9)
            throw NumericsError("correlation grid: negative photon number on the diagonal");
        if (opts.want_g1) {
            if (std::abs(grid.g1_at(i, i).imag()) > 1e-9)
                throw NumericsError("correlation grid: complex diagonal");
            for (int j = 0; j < n; ++j) {
                const double lhs = std::norm(grid.g1_at(i, j));
                const double rhs = grid.n_of_t[static_cast<std::size_t>(i)] *
                                       grid.n_of_t[static_cast<std::size_t>(j)] * (1.0 + 1e-6) +
                                   1e-12;
                if (lhs > rhs)
                    throw NumericsError("correlation grid: Cauchy-Schwarz violation");
            }
        }
        if (opts.want_g2)
            for (int j = 0; j < n; ++j)
                if (grid.g2_at(i, j) < -1e-9)
                    throw NumericsError("correlation grid: negative G2 entry");
    }
    return grid;
}

CorrelationGrid g1_grid(const SchemeConfig& cfg, int n, const CorrelationOptions& opts) {
    CorrelationOptions o = opts;
    o.want_g1 = true;
    o.want_g2 = false;
    return compute_correlations(cfg, n, o);
}

CorrelationGrid g2_grid(const SchemeConfig& cfg, int n, const CorrelationOptions& opts) {
    CorrelationOptions o = opts;
    o.want_g1 = false;
    o.want_g2 = true;
    return compute_correlations(cfg, n, o);
}

double emission_probability(const CorrelationGrid& grid, const CavityModeConfig& cavity) {
    double integral = 0.0;
    for (std::size_t i = 1; i < grid.times.size(); ++i)
        integral += 0.5 * (grid.n_of_t[i] + grid.n_of_t[i - 1]) *
                    (grid.times[i] - grid.times[i - 1]);
    return 2.0 * cavity.kappa * cavity.outcoupling_fraction * integral;
}

}  // namespace ionphoton
