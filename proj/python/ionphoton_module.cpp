#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ionphoton/clickstream.hpp"
#include "ionphoton/config.hpp"
#include "ionphoton/hom.hpp"
#include "ionphoton/io.hpp"
#include "ionphoton/units.hpp"

namespace py = pybind11;
using namespace ionphoton;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<std::complex<double>> to_matrix(const std::vector<cplx>& v, int n) {
    py::array_t<std::complex<double>> out({n, n});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> to_matrix(const std::vector<double>& v, int n) {
    py::array_t<double> out({n, n});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Level level_from_name(const std::string& name) { return parse_level(name); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "ion-cavity single photon source simulator";
    m.attr("__version__") = tool_version();

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<NumericsError>(m, "NumericsError");

    py::class_<SchemeConfig>(m, "SchemeConfig")
        .def_property(
            "B", [](const SchemeConfig& c) { return c.params.B; },
            [](SchemeConfig& c, double v) { c.params.B = v; })
        .def_property(
            "g0", [](const SchemeConfig& c) { return c.params.g0; },
            [](SchemeConfig& c, double v) { c.params.g0 = v; })
        .def_property(
            "peak_rabi", [](const SchemeConfig& c) { return c.params.drive.peak_rabi; },
            [](SchemeConfig& c, double v) { c.params.drive.peak_rabi = v; })
        .def_property(
            "drive_detuning", [](const SchemeConfig& c) { return c.params.drive.detuning; },
            [](SchemeConfig& c, double v) { c.params.drive.detuning = v; })
        .def_property(
            "prep_fidelity", [](const SchemeConfig& c) { return c.params.prep_fidelity; },
            [](SchemeConfig& c, double v) { c.params.prep_fidelity = v; })
        .def_property_readonly("window", [](const SchemeConfig& c) { return c.window; })
        .def("__repr__", [](const SchemeConfig& c) {
            return "<SchemeConfig " + std::string(c.params.scheme == Scheme::SD ? "SD" : "DD") +
                   " " + level_name(c.initial_state) + " -> " + level_name(c.target_state) + ">";
        });

    m.def("sd_paper_config", &sd_paper_config, "shipped S->D scheme preset");
    m.def("dd_paper_config", &dd_paper_config, "shipped D->D scheme preset");
    m.def(
        "config_from_toml",
        [](const std::string& text) { return scheme_config_from_tree(parse_toml(text)); },
        py::arg("text"), "scheme config from TOML text");
    m.def(
        "config_from_file",
        [](const std::string& path) { return scheme_config_from_tree(load_config_file(path)); },
        py::arg("path"));
    m.def("canonical_config", &canonical_config_string);

    m.def("lande_g", [](const std::string& term) {
        if (term == "S12") return lande_g(Term::S12);
        if (term == "P12") return lande_g(Term::P12);
        if (term == "D32") return lande_g(Term::D32);
        throw ConfigError("unknown term " + term);
    });
    m.def(
        "zeeman_shift",
        [](const std::string& level, double b) { return zeeman_shift(level_from_name(level), b); },
        py::arg("level"), py::arg("B_gauss"), "Zeeman shift in rad/us");
    m.def(
        "dipole_weight",
        [](const std::string& upper, const std::string& lower, int q) {
            return dipole_weight(level_from_name(upper), level_from_name(lower),
                                 static_cast<Polarization>(q));
        },
        py::arg("upper"), py::arg("lower"), py::arg("q"),
        "Clebsch-Gordan dipole amplitude; q = m_lower - m_upper");
    m.def(
        "pulse_envelope",
        [](double t, const SchemeConfig& cfg) { return pulse_envelope(t, cfg.params.drive); },
        py::arg("t_us"), py::arg("config"));

    m.def(
        "run_scheme",
        [](const SchemeConfig& cfg, int threads) {
            EvolveOptions opts;
            opts.threads = threads;
            const PhotonRecord rec = run_scheme(cfg, opts);
            py::dict out;
            out["times"] = to_array(rec.times);
            out["flux"] = to_array(rec.flux);
            out["p_emit"] = rec.p_emit;
            py::array_t<double> pops(
                {static_cast<py::ssize_t>(rec.trajectory.populations.size()), py::ssize_t(8)});
            auto* ptr = pops.mutable_data();
            for (const auto& row : rec.trajectory.populations)
                for (double p : row) *ptr++ = p;
            out["populations"] = pops;
            out["trace_drift"] = rec.trajectory.trace_drift;
            out["hermiticity_defect"] = rec.trajectory.hermiticity_defect;
            out["min_eigenvalue"] = rec.trajectory.min_eigenvalue;
            return out;
        },
        py::arg("config"), py::arg("threads") = 1,
        "integrate the master equation; returns times, flux, populations, p_emit");

    py::class_<CorrelationGrid>(m, "CorrelationGrid")
        .def_property_readonly("times", [](const CorrelationGrid& g) { return to_array(g.times); })
        .def_property_readonly("n", [](const CorrelationGrid& g) { return g.n; })
        .def_property_readonly("n_of_t",
                               [](const CorrelationGrid& g) { return to_array(g.n_of_t); })
        .def_property_readonly("g1",
                               [](const CorrelationGrid& g) { return to_matrix(g.g1, g.n); })
        .def_property_readonly("g2",
                               [](const CorrelationGrid& g) { return to_matrix(g.g2, g.n); });

    m.def(
        "correlations",
        [](const SchemeConfig& cfg, int n, int threads, bool want_g1, bool want_g2) {
            CorrelationOptions opts;
            opts.threads = threads;
            opts.want_g1 = want_g1;
            opts.want_g2 = want_g2;
            return compute_correlations(cfg, n, opts);
        },
        py::arg("config"), py::arg("n") = 128, py::arg("threads") = 1,
        py::arg("want_g1") = true, py::arg("want_g2") = true,
        "two-time G1/G2 grids via the quantum regression theorem");

    py::class_<CoincidenceDensity>(m, "CoincidenceDensity")
        .def_property_readonly("times",
                               [](const CoincidenceDensity& d) { return to_array(d.times); })
        .def_property_readonly("p_par",
                               [](const CoincidenceDensity& d) { return to_matrix(d.p_par, d.n); })
        .def_property_readonly(
            "p_perp", [](const CoincidenceDensity& d) { return to_matrix(d.p_perp, d.n); })
        .def_property_readonly("phi", [](const CoincidenceDensity& d) { return d.phi; });

    m.def("coincidence_density", &coincidence_density, py::arg("grid"), py::arg("phi_rad"));
    m.def(
        "visibility",
        [](const CoincidenceDensity& d, double T) { return visibility(d, T); },
        py::arg("density"), py::arg("T_us"));
    m.def("hbt_g2_zero", &hbt_g2_zero, py::arg("grid"));
    m.def("emission_probability",
          [](const CorrelationGrid& g, const SchemeConfig& cfg) {
              return emission_probability(g, cfg.params.cavity);
          });
    m.def(
        "tau_histogram",
        [](const CoincidenceDensity& d, double bin_us, double range_us) {
            const CoincidenceHistogram h = tau_histogram(d, bin_us, range_us);
            py::dict out;
            out["bin_edges"] = to_array(h.bin_edges);
            out["c_par"] = to_array(h.counts_par);
            out["c_perp"] = to_array(h.counts_perp);
            return out;
        },
        py::arg("density"), py::arg("bin_us") = 0.075, py::arg("range_us") = 2.5);
    m.def(
        "windowed_visibility_curve",
        [](const CoincidenceDensity& d, const std::vector<double>& T_values) {
            std::vector<std::tuple<double, double, double>> out;
            for (const auto& p : windowed_visibility_curve(d, T_values))
                out.emplace_back(p.T, p.visibility, p.coincidence_probability);
            return out;
        },
        py::arg("density"), py::arg("T_values"));

    m.def(
        "synth_to_file",
        [](const CoincidenceDensity& density, bool parallel, long n_pairs,
           const std::string& path, double efficiency, double background_rate,
           std::uint64_t seed) {
            SynthSpec spec;
            spec.efficiency = efficiency;
            spec.background_rate = background_rate;
            spec.seed = seed;
            spec.window_us = density.times.back();
            const EventStream stream = synth_from_density(density, parallel, n_pairs, spec);
            write_events_file(path, stream);
            return static_cast<long>(stream.events.size());
        },
        py::arg("density"), py::arg("parallel"), py::arg("n_pairs"), py::arg("path"),
        py::arg("efficiency") = 1.0, py::arg("background_rate") = 0.0, py::arg("seed") = 1);
    m.def(
        "analyze_hom_files",
        [](const std::string& par_path, const std::string& perp_path, double bin_us,
           double range_us, double window_T, double slot_us) {
            const EventStream par = parse_events_file(par_path);
            const EventStream perp = parse_events_file(perp_path);
            const auto h_par = cross_correlate(par, bin_us, range_us, slot_us);
            const auto h_perp = cross_correlate(perp, bin_us, range_us, slot_us);
            const DataVisibility v =
                data_visibility(h_par, h_perp, window_T, static_cast<double>(cycle_count(par)),
                                static_cast<double>(cycle_count(perp)));
            py::dict out;
            out["visibility"] = v.visibility;
            out["sigma"] = v.sigma;
            out["coincidences_par"] = v.coincidences_par;
            out["coincidences_perp"] = v.coincidences_perp;
            return out;
        },
        py::arg("par_path"), py::arg("perp_path"), py::arg("bin_us") = 0.075,
        py::arg("range_us") = 2.5, py::arg("window_T") = 5.0, py::arg("slot_us") = 2.5);
}
