#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ionphoton/hom.hpp"

namespace ionphoton {

struct EventRecord {
    int channel = 0;
    std::int64_t t_ps = 0;
};

struct ChannelMap {
    int sync = 0;
    int det1 = 1;
    int det2 = 2;
};

/// Timestamp stream from a time-to-digital converter (or the synthesizer).
/// Timestamps are integer picoseconds, nondecreasing per channel.
struct EventStream {
    std::vector<EventRecord> events;
    ChannelMap channel_map;
    double cycle_period_us = 7.38;
    int sync_divisor = 256;

    std::vector<std::int64_t> channel_times(int channel) const;
};

/// Parses `channel,timestamp_ps` CSV lines (# comments and an optional header
/// allowed). Rejects out-of-order timestamps within a channel and unknown
/// channels. When two or more sync events are present, infers cycle_period
/// from their mean spacing divided by sync_divisor.
EventStream parse_events(std::istream& in, const ChannelMap& map = {},
                         double cycle_period_us = 7.38, int sync_divisor = 256);
EventStream parse_events_file(const std::string& path, const ChannelMap& map = {},
                              double cycle_period_us = 7.38, int sync_divisor = 256);

void write_events_file(const std::string& path, const EventStream& stream);

struct PhaseProfile {
    std::vector<double> bin_edges;  // us within one cycle
    std::vector<double> density;    // normalized to unit area
    std::vector<std::int64_t> counts;
    long total_events = 0;
};

/// Folds detector events modulo the cycle period into phase bins (default
/// 20 ns). The final bin is truncated when the bin width does not divide the
/// period. Throws "no phase reference" when no sync events exist and no
/// period was provided.
PhaseProfile fold_profile(const EventStream& stream, double bin_us = 0.020);

/// Same-cycle det1/det2 coincidences histogrammed by tau = t2 - t1 with
/// Poisson errors. `window_us` restricts events to the photon slot at the
/// start of each cycle. An empty histogram is a valid result.
CoincidenceHistogram cross_correlate(const EventStream& stream, double bin_us,
                                     double range_us, double window_us = 2.5);

/// Number of cycles spanned by the stream (exposure for rate normalization).
long cycle_count(const EventStream& stream);

struct DataVisibility {
    double visibility = 0.0;
    double sigma = 0.0;
    double coincidences_par = 0.0;
    double coincidences_perp = 0.0;
};

/// Eq.-(1) visibility on measured histograms with Poisson error propagation.
/// Exposures rescale for unequal measurement lengths.
DataVisibility data_visibility(const CoincidenceHistogram& par,
                               const CoincidenceHistogram& perp, double T,
                               double exposure_par = 1.0, double exposure_perp = 1.0);

struct HbtResult {
    double g2_zero = 0.0;
    double sigma = 0.0;  // one-sided upper bound when no pairs
    long pairs = 0;
    long singles_1 = 0;
    long singles_2 = 0;
    long windows = 0;
};

/// Pulsed g2(0) estimate from same-window det1/det2 pairs:
/// g2 = N_12 * N_w / (N_1 * N_2).
HbtResult hbt_g2(const EventStream& stream, double window_us = 2.5);

struct SynthSpec {
    double cycle_period_us = 7.38;
    int sync_divisor = 256;
    double window_us = 2.5;
    double efficiency = 1.0;
    double background_rate = 0.0;  // per us per detector
    std::uint64_t seed = 1;
};

/// Synthesizes detector clicks for `n_pairs` two-photon trials. Each trial
/// splits across the two detectors with probability given by the selected
/// density's mass relative to the perpendicular reference (interference
/// removes cross-detector coincidences; bunched trials put both clicks on
/// one random detector). Click times are drawn from the joint density,
/// thinned binomially by the detection efficiency, with uniform background
/// and sync markers added. Byte-identical output for a fixed seed.
EventStream synth_from_density(const CoincidenceDensity& density, bool parallel,
                               long n_pairs, const SynthSpec& spec);

/// Synthesizes single-detector clicks from a flux profile (n_photons source
/// photons on det1), for temporal-profile round trips.
EventStream synth_from_flux(const std::vector<double>& times, const std::vector<double>& flux,
                            long n_photons, const SynthSpec& spec);

}  // namespace ionphoton
