#include "ionphoton/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ionphoton/units.hpp"

namespace ionphoton {

bool ConfigTree::has(const std::string& key) const {
    return numbers_.count(key) || strings_.count(key) || bools_.count(key) ||
           number_arrays_.count(key) || string_arrays_.count(key);
}

double ConfigTree::number(const std::string& key) const {
    auto it = numbers_.find(key);
    if (it == numbers_.end())
        throw ConfigError("missing required field `" + key + "`");
    return it->second;
}

double ConfigTree::number_or(const std::string& key, double fallback) const {
    auto it = numbers_.find(key);
    if (it == numbers_.end()) {
        if (has(key)) throw ConfigError("field `" + key + "` must be a number");
        return fallback;
    }
    return it->second;
}

std::string ConfigTree::str(const std::string& key) const {
    auto it = strings_.find(key);
    if (it == strings_.end())
        throw ConfigError("missing required field `" + key + "`");
    return it->second;
}

std::string ConfigTree::str_or(const std::string& key, const std::string& fallback) const {
    auto it = strings_.find(key);
    if (it == strings_.end()) {
        if (has(key)) throw ConfigError("field `" + key + "` must be a string");
        return fallback;
    }
    return it->second;
}

bool ConfigTree::boolean_or(const std::string& key, bool fallback) const {
    auto it = bools_.find(key);
    return it == bools_.end() ? fallback : it->second;
}

const std::vector<double>& ConfigTree::number_array(const std::string& key) const {
    auto it = number_arrays_.find(key);
    if (it == number_arrays_.end())
        throw ConfigError("missing required array field `" + key + "`");
    return it->second;
}

std::vector<std::string> ConfigTree::string_array_or(const std::string& key,
                                                     std::vector<std::string> fallback) const {
    auto it = string_arrays_.find(key);
    return it == string_arrays_.end() ? fallback : it->second;
}

std::vector<std::string> ConfigTree::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : numbers_) out.push_back(k);
    for (const auto& [k, v] : strings_) out.push_back(k);
    for (const auto& [k, v] : bools_) out.push_back(k);
    for (const auto& [k, v] : number_arrays_) out.push_back(k);
    for (const auto& [k, v] : string_arrays_) out.push_back(k);
    return out;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

bool parse_number(const std::string& tok, double& out) {
    const std::string t = trim(tok);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

}  // namespace

ConfigTree parse_toml(const std::string& text) {
    ConfigTree tree;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("empty section header at line " + std::to_string(lineno));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected `key = value` at line " + std::to_string(lineno));
        const std::string key_part = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key_part.empty() || value.empty())
            throw ConfigError("expected `key = value` at line " + std::to_string(lineno));
        const std::string key = section.empty() ? key_part : section + "." + key_part;

        if (value.front() == '"') {
            if (value.size() < 2 || value.back() != '"')
                throw ConfigError("unterminated string at line " + std::to_string(lineno));
            tree.set_string(key, value.substr(1, value.size() - 2));
        } else if (value == "true" || value == "false") {
            tree.set_bool(key, value == "true");
        } else if (value.front() == '[') {
            if (value.back() != ']')
                throw ConfigError("unterminated array at line " + std::to_string(lineno));
            const std::string body = value.substr(1, value.size() - 2);
            std::vector<double> nums;
            std::vector<std::string> strs;
            std::string tok;
            std::istringstream items(body);
            bool any_string = false;
            while (std::getline(items, tok, ',')) {
                tok = trim(tok);
                if (tok.empty()) continue;
                if (tok.front() == '"') {
                    if (tok.size() < 2 || tok.back() != '"')
                        throw ConfigError("bad array element at line " + std::to_string(lineno));
                    strs.push_back(tok.substr(1, tok.size() - 2));
                    any_string = true;
                } else {
                    double v;
                    if (!parse_number(tok, v))
                        throw ConfigError("bad array element `" + tok + "` at line " +
                                          std::to_string(lineno));
                    nums.push_back(v);
                }
            }
            if (any_string && !nums.empty())
                throw ConfigError("mixed array types at line " + std::to_string(lineno));
            if (any_string)
                tree.set_string_array(key, std::move(strs));
            else
                tree.set_number_array(key, std::move(nums));
        } else {
            double v;
            if (!parse_number(value, v))
                throw ConfigError("cannot parse value `" + value + "` at line " +
                                  std::to_string(lineno));
            tree.set_number(key, v);
        }
    }
    return tree;
}

ConfigTree load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_toml(buf.str());
}

namespace {

Polarization polarization_from_name(const std::string& name) {
    if (name == "sigma_minus") return Polarization::SigmaMinus;
    if (name == "pi") return Polarization::Pi;
    if (name == "sigma_plus") return Polarization::SigmaPlus;
    throw ConfigError("unknown polarization `" + name + "`");
}

std::string polarization_name(Polarization p) {
    switch (p) {
        case Polarization::SigmaMinus: return "sigma_minus";
        case Polarization::Pi: return "pi";
        case Polarization::SigmaPlus: return "sigma_plus";
    }
    return "?";
}

}  // namespace

SchemeConfig scheme_config_from_tree(const ConfigTree& tree, const std::string& prefix) {
    const std::string units = tree.str_or(prefix + "units", "rad_per_us");
    double scale = 1.0;
    if (units == "mhz_2pi")
        scale = two_pi;
    else if (units != "rad_per_us")
        throw ConfigError("`units` must be \"rad_per_us\" or \"mhz_2pi\"");

    SchemeConfig cfg;
    const std::string p = prefix + "params.";

    const std::string scheme = tree.str_or(p + "scheme", "SD");
    if (scheme == "SD") {
        cfg = sd_paper_config();
    } else if (scheme == "DD") {
        cfg = dd_paper_config();
    } else {
        throw ConfigError("params.scheme must be \"SD\" or \"DD\"");
    }

    auto num = [&](const std::string& key, double fallback) {
        return tree.number_or(prefix + key, fallback);
    };

    SystemParams& sp = cfg.params;
    sp.g0 = num("params.g0", sp.g0 / scale) * scale;
    sp.gamma_SP = num("params.gamma_SP", sp.gamma_SP / scale) * scale;
    sp.gamma_DP = num("params.gamma_DP", sp.gamma_DP / scale) * scale;
    sp.B = num("params.B", sp.B);
    sp.prep_fidelity = num("params.prep_fidelity", sp.prep_fidelity);

    CavityModeConfig& cav = sp.cavity;
    const auto pol_names = tree.string_array_or(p + "cavity.polarizations",
                                                {"sigma_plus", "sigma_minus"});
    cav.polarizations.clear();
    for (const auto& name : pol_names) cav.polarizations.push_back(polarization_from_name(name));
    if (tree.has(p + "cavity.fock_cutoffs")) {
        cav.fock_cutoffs.clear();
        for (double v : tree.number_array(p + "cavity.fock_cutoffs"))
            cav.fock_cutoffs.push_back(static_cast<int>(std::lround(v)));
    } else if (tree.has(p + "cavity.fock_cutoff")) {
        cav.fock_cutoffs.assign(cav.polarizations.size(),
                                static_cast<int>(std::lround(tree.number(p + "cavity.fock_cutoff"))));
    } else {
        cav.fock_cutoffs.assign(cav.polarizations.size(), 2);
    }
    cav.kappa = num("params.cavity.kappa", cav.kappa / scale) * scale;
    cav.outcoupling_fraction = num("params.cavity.outcoupling_fraction", cav.outcoupling_fraction);
    cav.detuning = num("params.cavity.detuning", cav.detuning / scale) * scale;

    DrivePulse& dr = sp.drive;
    const std::string shape = tree.str_or(p + "drive.shape", "gaussian");
    if (shape == "gaussian")
        dr.shape = PulseShape::Gaussian;
    else if (shape == "flat")
        dr.shape = PulseShape::Flat;
    else
        throw ConfigError("params.drive.shape must be \"gaussian\" or \"flat\"");
    if (!tree.has(p + "drive.peak_rabi"))
        throw ConfigError("missing required field `" + p + "drive.peak_rabi`");
    dr.peak_rabi = tree.number(p + "drive.peak_rabi") * scale;
    dr.center = num("params.drive.center", dr.center);
    dr.width = num("params.drive.width", dr.width);
    dr.detuning = num("params.drive.detuning", dr.detuning / scale) * scale;

    const std::string conv = tree.str_or(p + "drive.width_convention", "");
    if (conv == "intensity_sigma") dr.width_convention = WidthConvention::IntensitySigma;
    else if (conv == "intensity_fwhm") dr.width_convention = WidthConvention::IntensityFwhm;
    else if (conv == "amplitude_sigma") dr.width_convention = WidthConvention::AmplitudeSigma;
    else if (conv == "amplitude_fwhm") dr.width_convention = WidthConvention::AmplitudeFwhm;
    else if (!conv.empty())
        throw ConfigError("unknown drive.width_convention `" + conv + "`");

    const std::string ref = tree.str_or(p + "drive.detuning_reference", "");
    if (ref == "line_center") dr.detuning_reference = DetuningReference::LineCenter;
    else if (ref == "zeeman_shifted") dr.detuning_reference = DetuningReference::ZeemanShifted;
    else if (!ref.empty())
        throw ConfigError("unknown drive.detuning_reference `" + ref + "`");

    const std::string coupling = tree.str_or(p + "drive.coupling", "");
    if (coupling == "dipole") dr.coupling = DriveCoupling::Dipole;
    else if (coupling == "uniform") dr.coupling = DriveCoupling::Uniform;
    else if (!coupling.empty())
        throw ConfigError("unknown drive.coupling `" + coupling + "`");

    for (const Polarization pol :
         {Polarization::SigmaMinus, Polarization::Pi, Polarization::SigmaPlus}) {
        const std::string key = p + "drive.polarization_amplitudes." + polarization_name(pol);
        if (tree.has(key)) dr.set_amplitude(pol, tree.number(key));
    }

    if (tree.has(prefix + "initial_state"))
        cfg.initial_state = parse_level(tree.str(prefix + "initial_state"));
    if (tree.has(prefix + "target_state"))
        cfg.target_state = parse_level(tree.str(prefix + "target_state"));
    cfg.window = num("window", cfg.window);
    cfg.t_grid.t0 = num("t_grid.t0", cfg.t_grid.t0);
    cfg.t_grid.t1 = num("t_grid.t1", cfg.t_grid.t1);
    cfg.t_grid.n_points = static_cast<int>(std::lround(num("t_grid.n_points", cfg.t_grid.n_points)));

    validate(cfg);
    return cfg;
}

namespace {
void put(std::ostringstream& out, const std::string& key, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out << key << "=" << buf << "\n";
}
}  // namespace

std::string canonical_config_string(const SchemeConfig& cfg) {
    std::ostringstream out;
    out << "scheme=" << (cfg.params.scheme == Scheme::SD ? "SD" : "DD") << "\n";
    out << "initial_state=" << level_name(cfg.initial_state) << "\n";
    out << "target_state=" << level_name(cfg.target_state) << "\n";
    put(out, "window", cfg.window);
    put(out, "t_grid.t0", cfg.t_grid.t0);
    put(out, "t_grid.t1", cfg.t_grid.t1);
    out << "t_grid.n_points=" << cfg.t_grid.n_points << "\n";
    const SystemParams& p = cfg.params;
    put(out, "g0", p.g0);
    put(out, "gamma_SP", p.gamma_SP);
    put(out, "gamma_DP", p.gamma_DP);
    put(out, "B", p.B);
    put(out, "prep_fidelity", p.prep_fidelity);
    out << "cavity.polarizations=";
    for (auto q : p.cavity.polarizations) out << polarization_name(q) << ",";
    out << "\n";
    out << "cavity.fock_cutoffs=";
    for (int c : p.cavity.fock_cutoffs) out << c << ",";
    out << "\n";
    put(out, "cavity.kappa", p.cavity.kappa);
    put(out, "cavity.outcoupling_fraction", p.cavity.outcoupling_fraction);
    put(out, "cavity.detuning", p.cavity.detuning);
    out << "drive.shape=" << (p.drive.shape == PulseShape::Gaussian ? "gaussian" : "flat") << "\n";
    put(out, "drive.peak_rabi", p.drive.peak_rabi);
    put(out, "drive.center", p.drive.center);
    put(out, "drive.width", p.drive.width);
    put(out, "drive.detuning", p.drive.detuning);
    switch (p.drive.width_convention) {
        case WidthConvention::IntensitySigma: out << "drive.width_convention=intensity_sigma\n"; break;
        case WidthConvention::IntensityFwhm: out << "drive.width_convention=intensity_fwhm\n"; break;
        case WidthConvention::AmplitudeSigma: out << "drive.width_convention=amplitude_sigma\n"; break;
        case WidthConvention::AmplitudeFwhm: out << "drive.width_convention=amplitude_fwhm\n"; break;
    }
    out << "drive.detuning_reference="
        << (p.drive.detuning_reference == DetuningReference::LineCenter ? "line_center"
                                                                        : "zeeman_shifted")
        << "\n";
    out << "drive.coupling="
        << (p.drive.coupling == DriveCoupling::Dipole ? "dipole" : "uniform") << "\n";
    for (const Polarization pol :
         {Polarization::SigmaMinus, Polarization::Pi, Polarization::SigmaPlus}) {
        const auto a = p.drive.amplitude(pol);
        put(out, "drive.polarization_amplitudes." + polarization_name(pol) + ".re", a.real());
        put(out, "drive.polarization_amplitudes." + polarization_name(pol) + ".im", a.imag());
    }
    return out.str();
}

std::vector<std::string> calibration_notes(const SchemeConfig& cfg) {
    std::vector<std::string> notes;
    char buf[120];
    if (cfg.params.B != 5.0) {
        std::snprintf(buf, sizeof buf, "B calibrated to %.3g G (documented default 5 G)",
                      cfg.params.B);
        notes.emplace_back(buf);
    }
    if (cfg.params.drive.coupling == DriveCoupling::Uniform)
        notes.emplace_back("drive.coupling=uniform: equal Omega/2 coupling per drive channel");
    if (cfg.params.drive.width_convention == WidthConvention::IntensityFwhm)
        notes.emplace_back("drive.width read as intensity FWHM");
    return notes;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

}  // namespace ionphoton
