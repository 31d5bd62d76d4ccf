#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ionphoton/params.hpp"

namespace ionphoton {

/// Parsed key/value tree from a TOML-compatible config file. Supports
/// [section.sub] headers, `key = value` lines with numbers, booleans,
/// double-quoted strings and flat arrays, and # comments. Keys flatten to
/// dotted paths.
class ConfigTree {
  public:
    void set_number(const std::string& key, double v) { numbers_[key] = v; }
    void set_string(const std::string& key, std::string v) { strings_[key] = std::move(v); }
    void set_bool(const std::string& key, bool v) { bools_[key] = v; }
    void set_number_array(const std::string& key, std::vector<double> v) {
        number_arrays_[key] = std::move(v);
    }
    void set_string_array(const std::string& key, std::vector<std::string> v) {
        string_arrays_[key] = std::move(v);
    }

    bool has(const std::string& key) const;

    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::string str(const std::string& key) const;
    std::string str_or(const std::string& key, const std::string& fallback) const;
    bool boolean_or(const std::string& key, bool fallback) const;
    const std::vector<double>& number_array(const std::string& key) const;
    std::vector<std::string> string_array_or(const std::string& key,
                                             std::vector<std::string> fallback) const;

    /// Keys actually present, for unknown-field diagnostics.
    std::vector<std::string> keys() const;

  private:
    std::map<std::string, double> numbers_;
    std::map<std::string, std::string> strings_;
    std::map<std::string, bool> bools_;
    std::map<std::string, std::vector<double>> number_arrays_;
    std::map<std::string, std::vector<std::string>> string_arrays_;
};

/// Parses config text; throws ConfigError with a line number on syntax errors.
ConfigTree parse_toml(const std::string& text);

ConfigTree load_config_file(const std::string& path);

/// Builds a SchemeConfig from a tree. Keys mirror the domain type fields:
/// top-level initial_state/target_state/window plus [t_grid], [params],
/// [params.cavity], [params.drive], [params.drive.polarization_amplitudes].
/// `units` ("rad_per_us" default, or "mhz_2pi") scales all frequency fields.
/// `prefix` allows the whole block to sit under e.g. "base.".
SchemeConfig scheme_config_from_tree(const ConfigTree& tree, const std::string& prefix = "");

/// Canonical, fully-resolved textual form of a config; stable across runs
/// and the hashing base for manifests.
std::string canonical_config_string(const SchemeConfig& cfg);

/// Calibration notes for parameters that differ from the documented type
/// defaults (recorded in run manifests).
std::vector<std::string> calibration_notes(const SchemeConfig& cfg);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace ionphoton
