#include "ionphoton/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "ionphoton/errors.hpp"

namespace ionphoton {

namespace {

double scaled_rms(const std::vector<cplx>& err, const std::vector<cplx>& y0,
                  const std::vector<cplx>& y1, double atol, double rtol) {
    double acc = 0.0;
    const std::size_t n = err.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double e = std::abs(err[i]) / sk;
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(n));
}

// Hairer-style automatic initial step size.
double initial_step(std::size_t n, const RhsFn& rhs, const std::vector<cplx>& y,
                    const std::vector<cplx>& f0, double t0, double span, int order,
                    double atol, double rtol, long& n_rhs) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = atol + rtol * std::abs(y[i]);
        d0 += std::norm(y[i] / sk);
        d1 += std::norm(f0[i] / sk);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    d1 = std::sqrt(d1 / static_cast<double>(n));
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);

    std::vector<cplx> y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y[i] + h0 * f0[i];
    rhs(t0 + h0, y1.data(), f1.data());
    ++n_rhs;
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = atol + rtol * std::abs(y[i]);
        d2 += std::norm((f1[i] - f0[i]) / sk);
    }
    d2 = std::sqrt(d2 / static_cast<double>(n)) / h0;

    double h1;
    if (std::max(d1, d2) <= 1e-15)
        h1 = std::max(1e-6, h0 * 1e-3);
    else
        h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / order);
    return std::min({100.0 * h0, h1, span});
}

struct Dopri5Stepper {
    static constexpr int order = 5;

    std::size_t n;
    std::vector<cplx> k1, k2, k3, k4, k5, k6, ytmp, err;
    bool have_k1 = false;

    explicit Dopri5Stepper(std::size_t n_)
        : n(n_), k1(n_), k2(n_), k3(n_), k4(n_), k5(n_), k6(n_), ytmp(n_), err(n_) {}

    // One attempted step from (t, y) with size h; fills y_new and err.
    // k1 is reused from the previous accepted step (FSAL).
    long attempt(const RhsFn& rhs, double t, const std::vector<cplx>& y, double h,
                 std::vector<cplx>& y_new) {
        long evals = 0;
        if (!have_k1) {
            rhs(t, y.data(), k1.data());
            ++evals;
            have_k1 = true;
        }
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (1.0 / 5.0) * k1[i];
        rhs(t + h / 5.0, ytmp.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * ((3.0 / 40.0) * k1[i] + (9.0 / 40.0) * k2[i]);
        rhs(t + 3.0 * h / 10.0, ytmp.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * ((44.0 / 45.0) * k1[i] - (56.0 / 15.0) * k2[i] +
                                  (32.0 / 9.0) * k3[i]);
        rhs(t + 4.0 * h / 5.0, ytmp.data(), k4.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * ((19372.0 / 6561.0) * k1[i] - (25360.0 / 2187.0) * k2[i] +
                                  (64448.0 / 6561.0) * k3[i] - (212.0 / 729.0) * k4[i]);
        rhs(t + 8.0 * h / 9.0, ytmp.data(), k5.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * ((9017.0 / 3168.0) * k1[i] - (355.0 / 33.0) * k2[i] +
                                  (46732.0 / 5247.0) * k3[i] + (49.0 / 176.0) * k4[i] -
                                  (5103.0 / 18656.0) * k5[i]);
        rhs(t + h, ytmp.data(), k6.data());
        for (std::size_t i = 0; i < n; ++i)
            y_new[i] = y[i] + h * ((35.0 / 384.0) * k1[i] + (500.0 / 1113.0) * k3[i] +
                                   (125.0 / 192.0) * k4[i] - (2187.0 / 6784.0) * k5[i] +
                                   (11.0 / 84.0) * k6[i]);
        // k2 reused as k7 = f(t+h, y_new) for the error estimate and FSAL.
        rhs(t + h, y_new.data(), k2.data());
        evals += 6;
        for (std::size_t i = 0; i < n; ++i)
            err[i] = h * ((71.0 / 57600.0) * k1[i] - (71.0 / 16695.0) * k3[i] +
                          (71.0 / 1920.0) * k4[i] - (17253.0 / 339200.0) * k5[i] +
                          (22.0 / 525.0) * k6[i] - (1.0 / 40.0) * k2[i]);
        return evals;
    }

    void accept() { k1.swap(k2); }  // FSAL
    void reject() {}

    double error_norm(const std::vector<cplx>& y0, const std::vector<cplx>& y1,
                      double /*h*/, double atol, double rtol) const {
        return scaled_rms(err, y0, y1, atol, rtol);
    }
};

// Hairer, Norsett & Wanner DOP853: 8th-order solution with a combined
// 5th/3rd-order error estimate.
struct Dop853Stepper {
    static constexpr int order = 8;

    static constexpr double c2 = 0.526001519587677318785587544488e-01;
    static constexpr double c3 = 0.789002279381515978178381316732e-01;
    static constexpr double c4 = 0.118350341907227396726757197510e+00;
    static constexpr double c5 = 0.281649658092772603273242802490e+00;
    static constexpr double c6 = 0.333333333333333333333333333333e+00;
    static constexpr double c7 = 0.25e+00;
    static constexpr double c8 = 0.307692307692307692307692307692e+00;
    static constexpr double c9 = 0.651282051282051282051282051282e+00;
    static constexpr double c10 = 0.6e+00;
    static constexpr double c11 = 0.857142857142857142857142857142e+00;

    static constexpr double a21 = 5.26001519587677318785587544488e-2;
    static constexpr double a31 = 1.97250569845378994544595329183e-2;
    static constexpr double a32 = 5.91751709536136983633785987549e-2;
    static constexpr double a41 = 2.95875854768068491816892993775e-2;
    static constexpr double a43 = 8.87627564304205475450678981324e-2;
    static constexpr double a51 = 2.41365134159266685502369798665e-1;
    static constexpr double a53 = -8.84549479328286085344864962717e-1;
    static constexpr double a54 = 9.24834003261792003115737966543e-1;
    static constexpr double a61 = 3.7037037037037037037037037037e-2;
    static constexpr double a64 = 1.70828608729473871279604482173e-1;
    static constexpr double a65 = 1.25467687566822425016691814123e-1;
    static constexpr double a71 = 3.7109375e-2;
    static constexpr double a74 = 1.70252211019544039314978060272e-1;
    static constexpr double a75 = 6.02165389804559606850219397283e-2;
    static constexpr double a76 = -1.7578125e-2;
    static constexpr double a81 = 3.70920001185047927108779319836e-2;
    static constexpr double a84 = 1.70383925712239993810214054705e-1;
    static constexpr double a85 = 1.07262030446373284651809199168e-1;
    static constexpr double a86 = -1.53194377486244017527936158236e-2;
    static constexpr double a87 = 8.27378916381402288758473766002e-3;
    static constexpr double a91 = 6.24110958716075717114429577812e-1;
    static constexpr double a94 = -3.36089262944694129406857109825e0;
    static constexpr double a95 = -8.68219346841726006818189891453e-1;
    static constexpr double a96 = 2.75920996994467083049415600797e1;
    static constexpr double a97 = 2.01540675504778934086186788979e1;
    static constexpr double a98 = -4.34898841810699588477366255144e1;
    static constexpr double a101 = 4.77662536438264365890433908527e-1;
    static constexpr double a104 = -2.48811461997166764192642586468e0;
    static constexpr double a105 = -5.90290826836842996371446475743e-1;
    static constexpr double a106 = 2.12300514481811942347288949897e1;
    static constexpr double a107 = 1.52792336328824235832596922938e1;
    static constexpr double a108 = -3.32882109689848629194453265587e1;
    static constexpr double a109 = -2.03312017085086261358222928593e-2;
    static constexpr double a111 = -9.3714243008598732571704021658e-1;
    static constexpr double a114 = 5.18637242884406370830023853209e0;
    static constexpr double a115 = 1.09143734899672957818500254654e0;
    static constexpr double a116 = -8.14978701074692612513997267357e0;
    static constexpr double a117 = -1.85200656599969598641566180701e1;
    static constexpr double a118 = 2.27394870993505042818970056734e1;
    static constexpr double a119 = 2.49360555267965238987089396762e0;
    static constexpr double a1110 = -3.0467644718982195003823669022e0;
    static constexpr double a121 = 2.27331014751653820792359768449e0;
    static constexpr double a124 = -1.05344954667372501984066689879e1;
    static constexpr double a125 = -2.00087205822486249909675718444e0;
    static constexpr double a126 = -1.79589318631187989172765950534e1;
    static constexpr double a127 = 2.79488845294199600508499808837e1;
    static constexpr double a128 = -2.85899827713502369474065508674e0;
    static constexpr double a129 = -8.87285693353062954433549289258e0;
    static constexpr double a1210 = 1.23605671757943030647266201528e1;
    static constexpr double a1211 = 6.43392746015763530355970484046e-1;

    static constexpr double b1 = 5.42937341165687622380535766363e-2;
    static constexpr double b6 = 4.45031289275240888144113950566e0;
    static constexpr double b7 = 1.89151789931450038304281599044e0;
    static constexpr double b8 = -5.8012039600105847814672114227e0;
    static constexpr double b9 = 3.1116436695781989440891606237e-1;
    static constexpr double b10 = -1.52160949662516078556178806805e-1;
    static constexpr double b11 = 2.01365400804030348374776537501e-1;
    static constexpr double b12 = 4.47106157277725905176885569043e-2;

    static constexpr double bhh1 = 0.244094488188976377952755905512e+00;
    static constexpr double bhh2 = 0.733846688281611857341361741547e+00;
    static constexpr double bhh3 = 0.220588235294117647058823529412e-01;

    static constexpr double er1 = 0.1312004499419488073250102996e-01;
    static constexpr double er6 = -0.1225156446376204440720569753e+01;
    static constexpr double er7 = -0.4957589496572501915214079952e+00;
    static constexpr double er8 = 0.1664377182454986536961530415e+01;
    static constexpr double er9 = -0.3503288487499736816886487290e+00;
    static constexpr double er10 = 0.3341791187130174790297318841e+00;
    static constexpr double er11 = 0.8192320648511571246570742613e-01;
    static constexpr double er12 = -0.2235530786388629525884427845e-01;

    std::size_t n;
    std::vector<std::vector<cplx>> k;  // 12 stage derivatives
    std::vector<cplx> ytmp, err5, err3;
    bool have_k1 = false;

    explicit Dop853Stepper(std::size_t n_)
        : n(n_), k(12, std::vector<cplx>(n_)), ytmp(n_), err5(n_), err3(n_) {}

    long attempt(const RhsFn& rhs, double t, const std::vector<cplx>& y, double h,
                 std::vector<cplx>& y_new) {
        long evals = 0;
        if (!have_k1) {
            rhs(t, y.data(), k[0].data());
            ++evals;
            have_k1 = true;
        }
        const cplx* k1 = k[0].data();
        cplx* k2 = k[1].data();
        cplx* k3 = k[2].data();
        cplx* k4 = k[3].data();
        cplx* k5 = k[4].data();
        cplx* k6 = k[5].data();
        cplx* k7 = k[6].data();
        cplx* k8 = k[7].data();
        cplx* k9 = k[8].data();
        cplx* k10 = k[9].data();
        cplx* k11 = k[10].data();
        cplx* k12 = k[11].data();

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp.data(), k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp.data(), k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp.data(), k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp.data(), k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + c6 * h, ytmp.data(), k6);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        rhs(t + c7 * h, ytmp.data(), k7);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] +
                                  a87 * k7[i]);
        rhs(t + c8 * h, ytmp.data(), k8);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] +
                                  a97 * k7[i] + a98 * k8[i]);
        rhs(t + c9 * h, ytmp.data(), k9);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] +
                                  a106 * k6[i] + a107 * k7[i] + a108 * k8[i] +
                                  a109 * k9[i]);
        rhs(t + c10 * h, ytmp.data(), k10);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] +
                                  a116 * k6[i] + a117 * k7[i] + a118 * k8[i] +
                                  a119 * k9[i] + a1110 * k10[i]);
        rhs(t + c11 * h, ytmp.data(), k11);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] +
                                  a126 * k6[i] + a127 * k7[i] + a128 * k8[i] +
                                  a129 * k9[i] + a1210 * k10[i] + a1211 * k11[i]);
        rhs(t + h, ytmp.data(), k12);
        evals += 11;

        for (std::size_t i = 0; i < n; ++i) {
            const cplx update = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] +
                                b9 * k9[i] + b10 * k10[i] + b11 * k11[i] + b12 * k12[i];
            y_new[i] = y[i] + h * update;
            err3[i] = update - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k12[i];
            err5[i] = er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] +
                      er9 * k9[i] + er10 * k10[i] + er11 * k11[i] + er12 * k12[i];
        }
        return evals;
    }

    void accept() { have_k1 = false; }
    void reject() { have_k1 = true; }  // k1 is still valid at (t, y)

    double error_norm(const std::vector<cplx>& y0, const std::vector<cplx>& y1,
                      double h, double atol, double rtol) const {
        double acc5 = 0.0, acc3 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sk = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            acc5 += std::norm(err5[i]) / (sk * sk);
            acc3 += std::norm(err3[i]) / (sk * sk);
        }
        double deno = acc5 + 0.01 * acc3;
        if (deno <= 0.0) deno = 1.0;
        return std::abs(h) * acc5 * std::sqrt(1.0 / (static_cast<double>(n) * deno));
    }
};

template <typename Stepper>
StepStats run_integration(std::size_t n, const RhsFn& rhs, std::vector<cplx>& y,
                          double t0, double t1, std::span<const double> sample_times,
                          const SampleFn& on_sample, const IntegratorOptions& opts) {
    StepStats stats;
    Stepper stepper(n);

    std::size_t next_sample = 0;
    auto emit_samples_at = [&](double t) {
        while (next_sample < sample_times.size() &&
               std::abs(sample_times[next_sample] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
            if (on_sample) on_sample(next_sample, t, y.data());
            ++next_sample;
        }
    };

    emit_samples_at(t0);
    if (t1 <= t0) {
        stats.h_final = opts.h_init;
        return stats;
    }

    const double span = t1 - t0;
    const double h_max = opts.h_max > 0 ? opts.h_max : span;

    std::vector<cplx> y_new(n);
    double h;
    if (opts.h_init > 0) {
        h = opts.h_init;
    } else {
        std::vector<cplx> f0(n);
        rhs(t0, y.data(), f0.data());
        ++stats.n_rhs;
        h = initial_step(n, rhs, y, f0, t0, span, Stepper::order, opts.abs_tol,
                         opts.rel_tol, stats.n_rhs);
    }
    h = std::min(h, h_max);

    double t = t0;
    bool last_rejected = false;
    while (t < t1) {
        if (stats.n_steps + stats.n_rejected >= opts.max_steps)
            throw NumericsError("integrator failure: maximum step count exceeded");
        const double h_floor = 1e-14 * std::max(std::abs(t), 1.0);
        if (h < h_floor) throw NumericsError("integrator failure: step size underflow");

        // Clamp to the next sample time and the interval end.
        double t_stop = t1;
        if (next_sample < sample_times.size())
            t_stop = std::min(t_stop, sample_times[next_sample]);
        bool clamped = false;
        double h_try = h;
        if (t + h_try >= t_stop - 1e-14 * std::max(1.0, std::abs(t_stop))) {
            h_try = t_stop - t;
            clamped = true;
        }

        stats.n_rhs += stepper.attempt(rhs, t, y, h_try, y_new);
        const double err = stepper.error_norm(y, y_new, h_try, opts.abs_tol, opts.rel_tol);

        if (err <= 1.0) {
            stepper.accept();
            t = clamped ? t_stop : t + h_try;
            y.swap(y_new);
            ++stats.n_steps;
            emit_samples_at(t);
            if (!clamped) {
                // Keep the controller's step suggestion across clamped steps
                // so landing on sample times cannot collapse the step size.
                double fac = 0.9 * std::pow(std::max(err, 1e-16), -1.0 / (Stepper::order));
                fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 6.0);
                h = std::min(h_try * fac, h_max);
            }
            last_rejected = false;
        } else {
            stepper.reject();
            ++stats.n_rejected;
            const double fac = std::clamp(0.9 * std::pow(err, -1.0 / (Stepper::order)), 0.1, 0.9);
            h = h_try * fac;
            last_rejected = true;
        }
    }
    stats.h_final = h;
    return stats;
}

}  // namespace

StepStats adaptive_integrate(std::size_t n, const RhsFn& rhs, std::vector<cplx>& y,
                             double t0, double t1, std::span<const double> sample_times,
                             const SampleFn& on_sample, const IntegratorOptions& opts) {
    if (y.size() != n) throw NumericsError("integrator failure: state size mismatch");
    for (std::size_t i = 1; i < sample_times.size(); ++i)
        if (sample_times[i] < sample_times[i - 1])
            throw NumericsError("integrator failure: sample times not ascending");
    if (opts.method == OdeMethod::Dopri5)
        return run_integration<Dopri5Stepper>(n, rhs, y, t0, t1, sample_times, on_sample, opts);
    return run_integration<Dop853Stepper>(n, rhs, y, t0, t1, sample_times, on_sample, opts);
}

}  // namespace ionphoton
