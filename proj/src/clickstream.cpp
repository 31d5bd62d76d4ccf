#include "ionphoton/clickstream.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace ionphoton {

std::vector<std::int64_t> EventStream::channel_times(int channel) const {
    std::vector<std::int64_t> out;
    for (const auto& e : events)
        if (e.channel == channel) out.push_back(e.t_ps);
    return out;
}

EventStream parse_events(std::istream& in, const ChannelMap& map, double cycle_period_us,
                         int sync_divisor) {
    EventStream stream;
    stream.channel_map = map;
    stream.cycle_period_us = cycle_period_us;
    stream.sync_divisor = sync_divisor;

    std::map<int, std::int64_t> last;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (line.rfind("channel", 0) == 0) continue;  // header
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError("malformed record at line " + std::to_string(lineno) +
                              ": expected `channel,timestamp_ps`");
        int channel = 0;
        std::int64_t t = 0;
        try {
            channel = std::stoi(line.substr(0, comma));
            t = std::stoll(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw ConfigError("malformed record at line " + std::to_string(lineno));
        }
        if (channel != map.sync && channel != map.det1 && channel != map.det2)
            throw ConfigError("unknown channel " + std::to_string(channel) + " at line " +
                              std::to_string(lineno));
        auto it = last.find(channel);
        if (it != last.end() && t < it->second)
            throw ConfigError("malformed record at line " + std::to_string(lineno) +
                              ": decreasing timestamp on channel " + std::to_string(channel));
        last[channel] = t;
        stream.events.push_back({channel, t});
    }

    const auto syncs = stream.channel_times(map.sync);
    if (syncs.size() >= 2) {
        const double mean_gap_ps =
            static_cast<double>(syncs.back() - syncs.front()) / static_cast<double>(syncs.size() - 1);
        stream.cycle_period_us = mean_gap_ps / sync_divisor * 1e-6;
    }
    return stream;
}

EventStream parse_events_file(const std::string& path, const ChannelMap& map,
                              double cycle_period_us, int sync_divisor) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open stream file " + path);
    return parse_events(in, map, cycle_period_us, sync_divisor);
}

void write_events_file(const std::string& path, const EventStream& stream) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write stream file " + path);
    out << "# ionphoton event stream v1\n";
    out << "channel,timestamp_ps\n";
    for (const auto& e : stream.events) out << e.channel << "," << e.t_ps << "\n";
}

PhaseProfile fold_profile(const EventStream& stream, double bin_us) {
    if (bin_us <= 0) throw ConfigError("fold bin width must be positive");
    const auto syncs = stream.channel_times(stream.channel_map.sync);
    if (stream.cycle_period_us <= 0)
        throw ConfigError("no phase reference: need sync events or a cycle period");
    const std::int64_t phase0 = syncs.empty() ? 0 : syncs.front();
    const double period = stream.cycle_period_us;

    PhaseProfile profile;
    const int n_bins = static_cast<int>(std::ceil(period / bin_us - 1e-12));
    for (int b = 0; b <= n_bins; ++b)
        profile.bin_edges.push_back(std::min(period, b * bin_us));
    profile.counts.assign(static_cast<std::size_t>(n_bins), 0);

    const std::int64_t period_ps = static_cast<std::int64_t>(std::llround(period * 1e6));
    for (const auto& e : stream.events) {
        if (e.channel == stream.channel_map.sync) continue;
        std::int64_t rel = (e.t_ps - phase0) % period_ps;
        if (rel < 0) rel += period_ps;
        const int b = std::min(n_bins - 1, static_cast<int>(rel * 1e-6 / bin_us));
        ++profile.counts[static_cast<std::size_t>(b)];
        ++profile.total_events;
    }

    profile.density.resize(profile.counts.size());
    double area = 0.0;
    for (std::size_t b = 0; b < profile.counts.size(); ++b)
        area += static_cast<double>(profile.counts[b]);
    for (std::size_t b = 0; b < profile.counts.size(); ++b) {
        const double width = profile.bin_edges[b + 1] - profile.bin_edges[b];
        profile.density[b] =
            area > 0 && width > 0 ? static_cast<double>(profile.counts[b]) / (area * width) : 0.0;
    }
    return profile;
}

namespace {

// Events of one detector bucketed by cycle index, phases within the window.
std::vector<std::pair<long, double>> windowed_events(const EventStream& stream, int channel,
                                                     double window_us, std::int64_t phase0) {
    const std::int64_t period_ps =
        static_cast<std::int64_t>(std::llround(stream.cycle_period_us * 1e6));
    std::vector<std::pair<long, double>> out;
    for (const auto& e : stream.events) {
        if (e.channel != channel) continue;
        const std::int64_t rel = e.t_ps - phase0;
        std::int64_t cyc = rel / period_ps;
        std::int64_t phase = rel % period_ps;
        if (phase < 0) {
            phase += period_ps;
            --cyc;
        }
        const double phase_us = static_cast<double>(phase) * 1e-6;
        if (phase_us <= window_us) out.emplace_back(static_cast<long>(cyc), phase_us);
    }
    return out;
}

}  // namespace

long cycle_count(const EventStream& stream) {
    if (stream.events.empty()) return 0;
    const std::int64_t span = stream.events.back().t_ps - stream.events.front().t_ps;
    return static_cast<long>(span / std::llround(stream.cycle_period_us * 1e6)) + 1;
}

CoincidenceHistogram cross_correlate(const EventStream& stream, double bin_us, double range_us,
                                     double window_us) {
    if (bin_us <= 0 || range_us <= 0) throw ConfigError("bin and range must be positive");
    const auto syncs = stream.channel_times(stream.channel_map.sync);
    const std::int64_t phase0 = syncs.empty() ? 0 : syncs.front();

    const auto d1 = windowed_events(stream, stream.channel_map.det1, window_us, phase0);
    const auto d2 = windowed_events(stream, stream.channel_map.det2, window_us, phase0);

    CoincidenceHistogram hist;
    hist.normalization = HistogramNorm::Raw;
    const int half_bins = static_cast<int>(std::floor(range_us / bin_us + 1e-9));
    if (half_bins < 1) throw ConfigError("range smaller than one bin");
    for (int k = -half_bins; k <= half_bins; ++k) hist.bin_edges.push_back(k * bin_us);
    const std::size_t n_bins = hist.bin_edges.size() - 1;
    hist.counts_par.assign(n_bins, 0.0);
    hist.counts_perp.assign(n_bins, 0.0);
    hist.err_par.assign(n_bins, 0.0);
    hist.err_perp.assign(n_bins, 0.0);

    // Both detector lists are cycle-sorted; sweep matching cycles.
    std::size_t j0 = 0;
    for (const auto& [cyc1, t1] : d1) {
        while (j0 < d2.size() && d2[j0].first < cyc1) ++j0;
        for (std::size_t j = j0; j < d2.size() && d2[j].first == cyc1; ++j) {
            const double tau = d2[j].second - t1;
            if (tau < -range_us || tau >= range_us) continue;
            const int b = static_cast<int>(std::floor(tau / bin_us)) + half_bins;
            if (b >= 0 && b < static_cast<int>(n_bins)) hist.counts_par[static_cast<std::size_t>(b)] += 1.0;
        }
    }
    for (std::size_t b = 0; b < n_bins; ++b)
        hist.err_par[b] = std::sqrt(hist.counts_par[b]);
    return hist;
}

DataVisibility data_visibility(const CoincidenceHistogram& par, const CoincidenceHistogram& perp,
                               double T, double exposure_par, double exposure_perp) {
    if (T <= 0) throw ConfigError("visibility window T must be positive");
    if (par.bin_edges.size() != perp.bin_edges.size())
        throw ConfigError("histograms must share binning");
    double a_par = 0.0, a_perp = 0.0;
    for (std::size_t b = 0; b + 1 < par.bin_edges.size(); ++b) {
        const double lo = std::max(par.bin_edges[b], -0.5 * T);
        const double hi = std::min(par.bin_edges[b + 1], 0.5 * T);
        if (hi <= lo) continue;
        const double frac = (hi - lo) / (par.bin_edges[b + 1] - par.bin_edges[b]);
        a_par += par.counts_par[b] * frac;
        a_perp += perp.counts_par[b] * frac;
    }
    if (a_perp <= 0.0) throw NumericsError("zero denominator: no perpendicular coincidences");

    DataVisibility result;
    result.coincidences_par = a_par;
    result.coincidences_perp = a_perp;
    const double ratio = (a_par / exposure_par) / (a_perp / exposure_perp);
    result.visibility = 1.0 - ratio;
    // independent Poisson numerator and denominator
    const double rel = std::sqrt((a_par > 0 ? 1.0 / a_par : 1.0) + 1.0 / a_perp);
    result.sigma = ratio * rel;
    return result;
}

HbtResult hbt_g2(const EventStream& stream, double window_us) {
    const auto syncs = stream.channel_times(stream.channel_map.sync);
    const std::int64_t phase0 = syncs.empty() ? 0 : syncs.front();
    const auto d1 = windowed_events(stream, stream.channel_map.det1, window_us, phase0);
    const auto d2 = windowed_events(stream, stream.channel_map.det2, window_us, phase0);

    HbtResult r;
    r.singles_1 = static_cast<long>(d1.size());
    r.singles_2 = static_cast<long>(d2.size());
    r.windows = cycle_count(stream);
    std::size_t j0 = 0;
    for (const auto& [cyc1, t1] : d1) {
        (void)t1;
        while (j0 < d2.size() && d2[j0].first < cyc1) ++j0;
        for (std::size_t j = j0; j < d2.size() && d2[j].first == cyc1; ++j) ++r.pairs;
    }
    if (r.windows == 0 || r.singles_1 == 0 || r.singles_2 == 0) {
        r.g2_zero = 0.0;
        r.sigma = 0.0;
        return r;
    }
    const double denom = static_cast<double>(r.singles_1) * static_cast<double>(r.singles_2) /
                         static_cast<double>(r.windows);
    r.g2_zero = static_cast<double>(r.pairs) / denom;
    // Poisson error; one-sided upper bound when no pairs observed.
    r.sigma = (r.pairs > 0 ? std::sqrt(static_cast<double>(r.pairs)) : 1.0) / denom;
    return r;
}

namespace {

// Deterministic uniform doubles in [0,1) from a fixed-specification engine.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    long poisson(double lambda) {
        if (lambda <= 0) return 0;
        if (lambda < 60.0) {
            const double limit = std::exp(-lambda);
            long k = 0;
            double prod = uniform();
            while (prod > limit) {
                prod *= uniform();
                ++k;
            }
            return k;
        }
        // Normal approximation, adequate for the statistics tests.
        const double u1 = std::max(uniform(), 1e-300);
        const double u2 = uniform();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        return std::max(0L, static_cast<long>(std::llround(lambda + z * std::sqrt(lambda))));
    }

  private:
    std::mt19937_64 engine_;
};

// Piecewise-linear CDF sampler over a tabulated nonnegative density.
class ProfileSampler {
  public:
    ProfileSampler(const std::vector<double>& times, const std::vector<double>& density)
        : times_(times) {
        cdf_.assign(times.size(), 0.0);
        for (std::size_t i = 1; i < times.size(); ++i) {
            const double mass =
                0.5 * (std::max(0.0, density[i]) + std::max(0.0, density[i - 1])) *
                (times[i] - times[i - 1]);
            cdf_[i] = cdf_[i - 1] + mass;
        }
        total_ = cdf_.back();
        if (total_ <= 0) throw ConfigError("invalid density: no probability mass");
    }

    double total() const { return total_; }

    double sample(double u) const {
        const double target = u * total_;
        std::size_t lo = 0, hi = cdf_.size() - 1;
        while (lo + 1 < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cdf_[mid] <= target) lo = mid;
            else hi = mid;
        }
        const double seg = cdf_[hi] - cdf_[lo];
        const double frac = seg > 0 ? (target - cdf_[lo]) / seg : 0.0;
        return times_[lo] + frac * (times_[hi] - times_[lo]);
    }

  private:
    std::vector<double> times_;
    std::vector<double> cdf_;
    double total_ = 0.0;
};

// Samples (t1,t2) from a symmetric 2-D grid density by cell CDF plus
// rejection against the bilinear interpolant within the cell.
class DensitySampler {
  public:
    DensitySampler(const CoincidenceDensity& density, bool parallel)
        : times_(density.times), n_(density.n),
          p_(parallel ? density.p_par : density.p_perp) {
        cell_cdf_.reserve(static_cast<std::size_t>(n_ - 1) * (n_ - 1));
        double acc = 0.0;
        for (int i = 0; i + 1 < n_; ++i)
            for (int j = 0; j + 1 < n_; ++j) {
                const double area = (times_[i + 1] - times_[i]) * (times_[j + 1] - times_[j]);
                const double avg = 0.25 * (at(i, j) + at(i + 1, j) + at(i, j + 1) + at(i + 1, j + 1));
                acc += std::max(0.0, avg) * area;
                cell_cdf_.push_back(acc);
            }
        total_ = acc;
        if (total_ <= 0) throw ConfigError("invalid density: no probability mass");
    }

    double total() const { return total_; }

    std::pair<double, double> sample(Rng& rng) const {
        const double target = rng.uniform() * total_;
        const std::size_t cell =
            std::lower_bound(cell_cdf_.begin(), cell_cdf_.end(), target) - cell_cdf_.begin();
        const int i = static_cast<int>(cell) / (n_ - 1);
        const int j = static_cast<int>(cell) % (n_ - 1);
        const double pmax =
            std::max({at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)}) + 1e-300;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const double ux = rng.uniform(), uy = rng.uniform();
            const double p00 = at(i, j), p10 = at(i + 1, j), p01 = at(i, j + 1),
                         p11 = at(i + 1, j + 1);
            const double val = (1 - ux) * (1 - uy) * p00 + ux * (1 - uy) * p10 +
                               (1 - ux) * uy * p01 + ux * uy * p11;
            if (rng.uniform() * pmax <= val) {
                const double t1 = times_[i] + ux * (times_[i + 1] - times_[i]);
                const double t2 = times_[j] + uy * (times_[j + 1] - times_[j]);
                return {t1, t2};
            }
        }
        return {times_[i], times_[j]};
    }

  private:
    double at(int i, int j) const { return std::max(0.0, p_[static_cast<std::size_t>(i) * n_ + j]); }

    std::vector<double> times_;
    int n_;
    std::vector<double> p_;
    std::vector<double> cell_cdf_;
    double total_ = 0.0;
};

void append_sorted_events(EventStream& stream, std::vector<EventRecord> events) {
    std::sort(events.begin(), events.end(), [](const EventRecord& a, const EventRecord& b) {
        return a.t_ps == b.t_ps ? a.channel < b.channel : a.t_ps < b.t_ps;
    });
    stream.events = std::move(events);
}

void add_background_and_syncs(std::vector<EventRecord>& events, long n_cycles,
                              const SynthSpec& spec, const ChannelMap& map, Rng& rng) {
    const double duration_us = static_cast<double>(n_cycles) * spec.cycle_period_us;
    for (int det : {map.det1, map.det2}) {
        const long n_bg = rng.poisson(spec.background_rate * duration_us);
        for (long k = 0; k < n_bg; ++k) {
            const double t = rng.uniform() * duration_us;
            events.push_back({det, static_cast<std::int64_t>(std::llround(t * 1e6))});
        }
    }
    const std::int64_t period_ps = static_cast<std::int64_t>(std::llround(spec.cycle_period_us * 1e6));
    for (long c = 0; c * spec.sync_divisor * period_ps <=
                     static_cast<std::int64_t>(n_cycles) * period_ps;
         ++c)
        events.push_back({map.sync, c * spec.sync_divisor * period_ps});
}

}  // namespace

EventStream synth_from_density(const CoincidenceDensity& density, bool parallel, long n_pairs,
                               const SynthSpec& spec) {
    if (spec.efficiency < 0 || spec.efficiency > 1)
        throw ConfigError("efficiency must lie in [0, 1]");
    Rng rng(spec.seed);
    DensitySampler sampler(density, parallel);
    // Interference removes cross-detector coincidences: each trial yields a
    // split pair with probability proportional to the density mass; the
    // remainder bunches onto a single detector and shows up as two clicks on
    // one channel (no det1/det2 coincidence).
    const DensitySampler reference(density, false);
    const double split_prob =
        sampler.total() / std::max(sampler.total(), reference.total());

    EventStream stream;
    stream.cycle_period_us = spec.cycle_period_us;
    stream.sync_divisor = spec.sync_divisor;

    // One interference window every two cycles (delayed photon meets the
    // next trial's photon).
    const long n_cycles = 2 * n_pairs + 2;
    const std::int64_t period_ps = static_cast<std::int64_t>(std::llround(spec.cycle_period_us * 1e6));
    std::vector<EventRecord> events;
    const double eps = spec.efficiency;
    for (long k = 0; k < n_pairs; ++k) {
        const bool split = rng.uniform() < split_prob;
        const bool first_fires = rng.uniform() < eps;
        const bool second_fires = rng.uniform() < eps;
        if (!first_fires && !second_fires) continue;
        const std::int64_t cycle_start = (2 * k + 1) * period_ps;
        int ch1 = stream.channel_map.det1;
        int ch2 = stream.channel_map.det2;
        if (!split) ch1 = ch2 = (rng.uniform() < 0.5 ? ch1 : ch2);
        const auto [t1, t2] = sampler.sample(rng);
        if (first_fires)
            events.push_back({ch1, cycle_start + static_cast<std::int64_t>(std::llround(t1 * 1e6))});
        if (second_fires)
            events.push_back({ch2, cycle_start + static_cast<std::int64_t>(std::llround(t2 * 1e6))});
    }
    add_background_and_syncs(events, n_cycles, spec, stream.channel_map, rng);
    append_sorted_events(stream, std::move(events));
    return stream;
}

EventStream synth_from_flux(const std::vector<double>& times, const std::vector<double>& flux,
                            long n_photons, const SynthSpec& spec) {
    if (spec.efficiency < 0 || spec.efficiency > 1)
        throw ConfigError("efficiency must lie in [0, 1]");
    for (double f : flux)
        if (f < -1e-12) throw ConfigError("invalid density: negative mass");
    Rng rng(spec.seed);
    ProfileSampler sampler(times, flux);

    EventStream stream;
    stream.cycle_period_us = spec.cycle_period_us;
    stream.sync_divisor = spec.sync_divisor;

    const long n_cycles = n_photons + 2;
    const std::int64_t period_ps = static_cast<std::int64_t>(std::llround(spec.cycle_period_us * 1e6));
    std::vector<EventRecord> events;
    for (long k = 0; k < n_photons; ++k) {
        if (rng.uniform() >= spec.efficiency) {
            rng.uniform();  // keep the draw count per photon fixed
            continue;
        }
        const double t = sampler.sample(rng.uniform());
        events.push_back({stream.channel_map.det1,
                          k * period_ps + static_cast<std::int64_t>(std::llround(t * 1e6))});
    }
    add_background_and_syncs(events, n_cycles, spec, stream.channel_map, rng);
    append_sorted_events(stream, std::move(events));
    return stream;
}

}  // namespace ionphoton
