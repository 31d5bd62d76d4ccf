#include "ionphoton/hom.hpp"

#include <algorithm>
#include <cmath>

namespace ionphoton {

CoincidenceDensity coincidence_density(const CorrelationGrid& grid, double phi_rad) {
    if (!grid.has_g1 || !grid.has_g2)
        throw ConfigError("coincidence density needs both G1 and G2");
    const int n = grid.n;
    CoincidenceDensity d;
    d.times = grid.times;
    d.n = n;
    d.phi = phi_rad;
    d.p_par.resize(static_cast<std::size_t>(n) * n);
    d.p_perp.resize(static_cast<std::size_t>(n) * n);
    const double c2 = std::cos(phi_rad) * std::cos(phi_rad);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * n + j;
            const double perp = 0.5 * grid.g2_at(i, j) +
                                0.5 * grid.n_of_t[static_cast<std::size_t>(i)] *
                                    grid.n_of_t[static_cast<std::size_t>(j)];
            d.p_perp[idx] = perp;
            d.p_par[idx] = perp - 0.5 * c2 * std::norm(grid.g1_at(i, j));
        }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const std::size_t ij = static_cast<std::size_t>(i) * n + j;
            const std::size_t ji = static_cast<std::size_t>(j) * n + i;
            if (std::abs(d.p_perp[ij] - d.p_perp[ji]) > 1e-9 ||
                std::abs(d.p_par[ij] - d.p_par[ji]) > 1e-9)
                throw NumericsError("coincidence density not symmetric");
            if (d.p_perp[ij] < -1e-12 || d.p_par[ij] < -1e-12)
                throw NumericsError("coincidence density has negative entries");
            if (d.p_perp[ij] - d.p_par[ij] < -1e-12)
                throw NumericsError("interference increased coincidences");
        }
    return d;
}

namespace {

double bilinear(const std::vector<double>& p, int n, double t0, double dt, double x,
                double y) {
    // Outside the grid the density is zero.
    const double fx = (x - t0) / dt;
    const double fy = (y - t0) / dt;
    if (fx < 0.0 || fy < 0.0 || fx > n - 1 || fy > n - 1) return 0.0;
    int ix = std::min(static_cast<int>(fx), n - 2);
    int iy = std::min(static_cast<int>(fy), n - 2);
    const double ux = fx - ix;
    const double uy = fy - iy;
    const auto at = [&](int i, int j) { return p[static_cast<std::size_t>(i) * n + j]; };
    return (1 - ux) * (1 - uy) * at(ix, iy) + ux * (1 - uy) * at(ix + 1, iy) +
           (1 - ux) * uy * at(ix, iy + 1) + ux * uy * at(ix + 1, iy + 1);
}

double integral_over_t(const std::vector<double>& p, int n, double t0, double dt,
                       double tau, double t_end) {
    // integral over t of p(t, t+tau) with both arguments inside [t0, t_end]
    const double lo = std::max(t0, t0 - tau);
    const double hi = std::min(t_end, t_end - tau);
    if (hi <= lo) return 0.0;
    const double step = 0.5 * dt;
    const int m = std::max(2, static_cast<int>(std::ceil((hi - lo) / step)) + 1);
    const double h = (hi - lo) / (m - 1);
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
        const double t = lo + h * k;
        const double v = bilinear(p, n, t0, dt, t, t + tau);
        acc += (k == 0 || k == m - 1) ? 0.5 * v : v;
    }
    return acc * h;
}

}  // namespace

TauCurve tau_curve(const CoincidenceDensity& density) {
    const int n = density.n;
    const double t0 = density.times.front();
    const double t_end = density.times.back();
    const double dt = (t_end - t0) / (n - 1);
    const double span = t_end - t0;

    TauCurve curve;
    curve.dtau = 0.5 * dt;
    const int half = static_cast<int>(std::round(span / curve.dtau));
    for (int k = -half; k <= half; ++k) {
        const double tau = k * curve.dtau;
        curve.tau.push_back(tau);
        curve.par.push_back(integral_over_t(density.p_par, n, t0, dt, tau, t_end));
        curve.perp.push_back(integral_over_t(density.p_perp, n, t0, dt, tau, t_end));
    }
    return curve;
}

namespace {

// integral of curve values over |tau| <= half_window (trapezoid, with the
// boundary handled by linear interpolation between samples).
double integrate_window(const std::vector<double>& tau, const std::vector<double>& v,
                        double half_window) {
    double acc = 0.0;
    for (std::size_t k = 1; k < tau.size(); ++k) {
        double a = tau[k - 1], b = tau[k];
        double va = v[k - 1], vb = v[k];
        const double lo = std::max(a, -half_window);
        const double hi = std::min(b, half_window);
        if (hi <= lo) continue;
        const double slope = (vb - va) / (b - a);
        const double vlo = va + slope * (lo - a);
        const double vhi = va + slope * (hi - a);
        acc += 0.5 * (vlo + vhi) * (hi - lo);
    }
    return acc;
}

}  // namespace

CoincidenceHistogram tau_histogram(const CoincidenceDensity& density, double bin_width,
                                   double range, HistogramNorm norm) {
    const double dt = (density.times.back() - density.times.front()) / (density.n - 1);
    if (bin_width <= dt)
        throw ConfigError("histogram bin_width must exceed the grid spacing");
    const double support = density.times.back() - density.times.front();
    if (range > support + 1e-12)
        throw ConfigError("range exceeds grid support");

    const TauCurve curve = tau_curve(density);
    const int half_bins = static_cast<int>(std::floor(range / bin_width + 1e-9));
    if (half_bins < 1) throw ConfigError("histogram range smaller than one bin");

    CoincidenceHistogram hist;
    hist.normalization = norm;
    for (int k = -half_bins; k <= half_bins; ++k)
        hist.bin_edges.push_back(k * bin_width);
    const std::size_t n_bins = hist.bin_edges.size() - 1;
    hist.counts_par.resize(n_bins);
    hist.counts_perp.resize(n_bins);
    hist.err_par.assign(n_bins, 0.0);
    hist.err_perp.assign(n_bins, 0.0);

    for (std::size_t b = 0; b < n_bins; ++b) {
        const double lo = hist.bin_edges[b];
        const double hi = hist.bin_edges[b + 1];
        // integral over the bin expressed via two half-window integrals
        auto bin_integral = [&](const std::vector<double>& v) {
            double acc = 0.0;
            for (std::size_t k = 1; k < curve.tau.size(); ++k) {
                const double a = curve.tau[k - 1], bb = curve.tau[k];
                const double la = std::max(a, lo), hb = std::min(bb, hi);
                if (hb <= la) continue;
                const double slope = (v[k] - v[k - 1]) / (bb - a);
                const double vla = v[k - 1] + slope * (la - a);
                const double vhb = v[k - 1] + slope * (hb - a);
                acc += 0.5 * (vla + vhb) * (hb - la);
            }
            return acc;
        };
        hist.counts_par[b] = bin_integral(curve.par);
        hist.counts_perp[b] = bin_integral(curve.perp);
    }

    if (norm == HistogramNorm::PerpAreaUnity) {
        double perp_area = 0.0;
        for (std::size_t b = 0; b < n_bins; ++b) perp_area += hist.counts_perp[b] * bin_width;
        if (perp_area <= 0.0) throw NumericsError("zero denominator: empty perpendicular histogram");
        for (std::size_t b = 0; b < n_bins; ++b) {
            hist.counts_par[b] /= perp_area;
            hist.counts_perp[b] /= perp_area;
        }
    }
    return hist;
}

double visibility(const CoincidenceDensity& density, double T) {
    if (T <= 0) throw ConfigError("visibility window T must be positive");
    const TauCurve curve = tau_curve(density);
    const double par = integrate_window(curve.tau, curve.par, 0.5 * T);
    const double perp = integrate_window(curve.tau, curve.perp, 0.5 * T);
    if (perp <= 0.0) throw NumericsError("zero denominator: no perpendicular coincidences");
    return 1.0 - par / perp;
}

double visibility(const CoincidenceHistogram& hist, double T) {
    if (T <= 0) throw ConfigError("visibility window T must be positive");
    double par = 0.0, perp = 0.0;
    for (std::size_t b = 0; b < hist.n_bins(); ++b) {
        const double lo = std::max(hist.bin_edges[b], -0.5 * T);
        const double hi = std::min(hist.bin_edges[b + 1], 0.5 * T);
        if (hi <= lo) continue;
        const double frac = (hi - lo) / (hist.bin_edges[b + 1] - hist.bin_edges[b]);
        par += hist.counts_par[b] * frac;
        perp += hist.counts_perp[b] * frac;
    }
    if (perp <= 0.0) throw NumericsError("zero denominator: no perpendicular coincidences");
    return 1.0 - par / perp;
}

std::vector<WindowPoint> windowed_visibility_curve(const CoincidenceDensity& density,
                                                   const std::vector<double>& T_values,
                                                   double rate_normalization) {
    for (std::size_t k = 1; k < T_values.size(); ++k)
        if (T_values[k] <= T_values[k - 1])
            throw ConfigError("window sizes must be positive ascending");
    const TauCurve curve = tau_curve(density);
    const double perp_total = integrate_window(curve.tau, curve.perp,
                                               std::abs(curve.tau.back()) + 1.0);
    if (perp_total <= 0.0) throw NumericsError("zero denominator: no perpendicular coincidences");

    std::vector<WindowPoint> points;
    for (double T : T_values) {
        if (T <= 0) throw ConfigError("window sizes must be positive ascending");
        WindowPoint p;
        p.T = T;
        const double par = integrate_window(curve.tau, curve.par, 0.5 * T);
        const double perp = integrate_window(curve.tau, curve.perp, 0.5 * T);
        if (perp <= 0.0) throw NumericsError("zero denominator: no perpendicular coincidences");
        p.visibility = 1.0 - par / perp;
        p.coincidence_probability = perp / perp_total * rate_normalization;
        points.push_back(p);
    }
    return points;
}

double hbt_g2_zero(const CorrelationGrid& grid) {
    if (!grid.has_g2) throw ConfigError("hbt_g2_zero needs G2");
    const int n = grid.n;
    const double dt = (grid.times.back() - grid.times.front()) / (n - 1);
    auto weight = [&](int i) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; };
    double num = 0.0, n_int = 0.0;
    for (int i = 0; i < n; ++i) {
        n_int += weight(i) * grid.n_of_t[static_cast<std::size_t>(i)] * dt;
        for (int j = 0; j < n; ++j)
            num += weight(i) * weight(j) * grid.g2_at(i, j) * dt * dt;
    }
    if (n_int <= 0.0) throw NumericsError("zero denominator: no photons in the window");
    return num / (n_int * n_int);
}

}  // namespace ionphoton
