#pragma once

// Independent reference implementations used only by tests. These must not
// share code paths with the library routines they check.

#include <cmath>
#include <cstdlib>
#include <vector>

#include "ionphoton/correlations.hpp"
#include "ionphoton/master.hpp"

namespace oracles {

// Wigner 3-j symbol via the Racah sum over the 3-j (not Clebsch-Gordan)
// factorial arrangement; doubled angular momenta.
inline double factorial_d(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

inline double wigner_3j(int two_j1, int two_j2, int two_j3, int two_m1, int two_m2,
                        int two_m3) {
    if (two_m1 + two_m2 + two_m3 != 0) return 0.0;
    if (two_j3 < std::abs(two_j1 - two_j2) || two_j3 > two_j1 + two_j2) return 0.0;
    auto f2 = [](int two_n) { return factorial_d(two_n / 2); };

    const int a1 = two_j1 + two_j2 - two_j3;
    const int a2 = two_j1 - two_j2 + two_j3;
    const int a3 = -two_j1 + two_j2 + two_j3;
    if (a1 < 0 || a2 < 0 || a3 < 0) return 0.0;
    const double triangle = f2(a1) * f2(a2) * f2(a3) / f2(two_j1 + two_j2 + two_j3 + 2);

    const double norm = std::sqrt(triangle * f2(two_j1 + two_m1) * f2(two_j1 - two_m1) *
                                  f2(two_j2 + two_m2) * f2(two_j2 - two_m2) *
                                  f2(two_j3 + two_m3) * f2(two_j3 - two_m3));

    const int two_k_min =
        std::max({0, two_j2 - two_j3 - two_m1, two_j1 - two_j3 + two_m2});
    const int two_k_max =
        std::min({two_j1 + two_j2 - two_j3, two_j1 - two_m1, two_j2 + two_m2});
    double sum = 0.0;
    for (int two_k = two_k_min; two_k <= two_k_max; two_k += 2) {
        const double denom = f2(two_k) * f2(two_j1 + two_j2 - two_j3 - two_k) *
                             f2(two_j1 - two_m1 - two_k) * f2(two_j2 + two_m2 - two_k) *
                             f2(two_j3 - two_j2 + two_m1 + two_k) *
                             f2(two_j3 - two_j1 - two_m2 + two_k);
        sum += ((two_k / 2) % 2 == 0 ? 1.0 : -1.0) / denom;
    }
    const int phase_exp = (two_j1 - two_j2 - two_m3) / 2;
    const double phase = (phase_exp % 2 == 0) ? 1.0 : -1.0;
    return phase * norm * sum;
}

// <j1 m1; j2 m2 | J M> from the 3-j symbol.
inline double cg_from_3j(int two_j1, int two_m1, int two_j2, int two_m2, int two_J,
                         int two_M) {
    const int phase_exp = (two_j1 - two_j2 + two_M) / 2;
    const double phase = (phase_exp % 2 == 0) ? 1.0 : -1.0;
    return phase * std::sqrt(two_J + 1.0) *
           wigner_3j(two_j1, two_j2, two_J, two_m1, two_m2, -two_M);
}

// Evolves a vectorized operator under a static Liouvillian, sampling at grid
// times. Thin wrapper used by closed-form comparisons.
inline std::vector<std::vector<ionphoton::cplx>> propagate_static(
    const ionphoton::Liouvillian& liou, std::vector<ionphoton::cplx> state,
    const std::vector<double>& times, const ionphoton::IntegratorOptions& opts = {}) {
    using namespace ionphoton;
    std::vector<std::vector<cplx>> samples(times.size());
    auto rhs = [&](double, const cplx* y, cplx* dy) {
        liou.gen.apply_block(0.0, y, dy, 1, 0, liou.gen.dim);
    };
    adaptive_integrate(liou.vec_dim(), rhs, state, times.front(), times.back(), times,
                       [&](std::size_t k, double, const cplx* y) {
                           samples[k].assign(y, y + liou.vec_dim());
                       },
                       opts);
    return samples;
}

}  // namespace oracles
