#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ionphoton/sparse.hpp"

namespace ionphoton {

enum class OdeMethod { Dopri5, Dop853 };

struct IntegratorOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double h_init = 0.0;  // 0 = choose automatically
    double h_max = 0.0;   // 0 = no bound beyond the span
    long max_steps = 200'000'000;
    OdeMethod method = OdeMethod::Dop853;
};

struct StepStats {
    long n_steps = 0;
    long n_rejected = 0;
    long n_rhs = 0;
    double h_final = 0.0;  // last controller step suggestion, reusable as h_init
};

/// dy = f(t, y); arrays have the length passed to adaptive_integrate.
using RhsFn = std::function<void(double t, const cplx* y, cplx* dy)>;

/// Called with the state at each requested sample time.
using SampleFn = std::function<void(std::size_t sample_index, double t, const cplx* y)>;

/// Integrates y in place from t0 to t1 (t1 >= t0) with an embedded
/// Runge-Kutta pair and proportional step control. sample_times must be
/// ascending and lie within [t0, t1]; each is hit exactly. Throws
/// NumericsError("integrator failure ...") on step-size underflow or when
/// max_steps is exceeded.
StepStats adaptive_integrate(std::size_t n, const RhsFn& rhs, std::vector<cplx>& y,
                             double t0, double t1,
                             std::span<const double> sample_times,
                             const SampleFn& on_sample,
                             const IntegratorOptions& opts = {});

}  // namespace ionphoton
