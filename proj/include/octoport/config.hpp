#pragma once

// Flat key = value configuration files (TOML-style scalars, # comments,
// [section] headers tolerated and ignored) and their mapping onto the
// simulation, ADC and extractor settings.

#include <map>
#include <stdexcept>
#include <string>

#include "octoport/entropy.hpp"
#include "octoport/mc_sim.hpp"

namespace octoport {

/// Parse or key-conversion failure; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ConfigMap {
public:
    static ConfigMap parse_file(const std::string& path);
    static ConfigMap parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    double require_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

struct RunConfig {
    SimConfig sim;
    AdcConfig adc;
    std::string mode = "double";  ///< "double" or "single"
    double security_eps = 0x1.0p-64;
    std::string fs_expr;          ///< empty, "re,im" constant handled upstream
};

/// Builds the run configuration from parsed keys; unknown keys raise
/// ConfigError, domain violations surface later through validate().
RunConfig load_run_config(const ConfigMap& m);

}  // namespace octoport
