#pragma once

#include "ionphoton/correlations.hpp"

namespace ionphoton {

/// Joint detection probability density for two identical, phase-randomized
/// sources meeting at a balanced beam splitter, with polarization mismatch
/// angle phi between the two arms:
///   p_perp(t1,t2) = 1/2 G2(t1,t2) + 1/2 n(t1) n(t2)
///   p_par(t1,t2)  = p_perp(t1,t2) - 1/2 cos^2(phi) |G1(t1,t2)|^2
struct CoincidenceDensity {
    std::vector<double> times;
    int n = 0;
    std::vector<double> p_par, p_perp;  // n*n, symmetric
    double phi = 0.0;                   // radians

    double par_at(int i, int j) const { return p_par[static_cast<std::size_t>(i) * n + j]; }
    double perp_at(int i, int j) const { return p_perp[static_cast<std::size_t>(i) * n + j]; }
};

CoincidenceDensity coincidence_density(const CorrelationGrid& grid, double phi_rad);

/// C(tau) = integral dt p(t, t + tau), resampled on a fine tau grid by
/// bilinear interpolation. Shared backend for histograms, visibility and the
/// window-filtering curve.
struct TauCurve {
    std::vector<double> tau;
    std::vector<double> par, perp;
    double dtau = 0.0;
};

TauCurve tau_curve(const CoincidenceDensity& density);

enum class HistogramNorm { PerpAreaUnity, Raw };

struct CoincidenceHistogram {
    std::vector<double> bin_edges;  // nbins+1 edges, us, aligned so tau = 0 is an edge
    std::vector<double> counts_par, counts_perp;
    std::vector<double> err_par, err_perp;
    HistogramNorm normalization = HistogramNorm::PerpAreaUnity;

    std::size_t n_bins() const { return counts_par.size(); }
    double bin_width() const { return bin_edges.size() > 1 ? bin_edges[1] - bin_edges[0] : 0.0; }
};

/// Bins C(tau) into a histogram of the given bin width over [-range, range].
CoincidenceHistogram tau_histogram(const CoincidenceDensity& density, double bin_width,
                                   double range,
                                   HistogramNorm norm = HistogramNorm::PerpAreaUnity);

/// HOM visibility V = 1 - int_{-T/2}^{T/2} C_par / int_{-T/2}^{T/2} C_perp.
double visibility(const CoincidenceDensity& density, double T);
double visibility(const CoincidenceHistogram& hist, double T);

struct WindowPoint {
    double T = 0.0;
    double visibility = 0.0;
    double coincidence_probability = 0.0;
};

/// V(T) and the retained coincidence fraction for a list of window sizes.
std::vector<WindowPoint> windowed_visibility_curve(const CoincidenceDensity& density,
                                                   const std::vector<double>& T_values,
                                                   double rate_normalization = 1.0);

/// Pulsed g2(0) = (double integral of G2) / (integral of n)^2.
double hbt_g2_zero(const CorrelationGrid& grid);

}  // namespace ionphoton
