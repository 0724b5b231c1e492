#include "octoport/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace octoport {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

ConfigMap ConfigMap::parse_string(const std::string& text, const std::string& origin) {
    ConfigMap m;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[' && t.back() == ']') continue;  // sections are flat
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = unquote(trim(t.substr(eq + 1)));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        m.kv_[key] = val;
    }
    return m;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

bool ConfigMap::has(const std::string& key) const { return kv_.count(key) != 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw ConfigError("");
        return v;
    } catch (...) {
        throw ConfigError("config key '" + key + "': not a number: " + it->second);
    }
}

double ConfigMap::require_double(const std::string& key) const {
    if (!has(key)) throw ConfigError("config key '" + key + "' is required");
    return get_double(key, 0.0);
}

std::int64_t ConfigMap::get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw ConfigError("");
        return v;
    } catch (...) {
        throw ConfigError("config key '" + key + "': not an integer: " + it->second);
    }
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': not a boolean: " + it->second);
}

void ConfigMap::set(const std::string& key, const std::string& value) { kv_[key] = value; }

RunConfig load_run_config(const ConfigMap& m) {
    static const std::set<std::string> known{
        "eta1", "eta2", "eta3", "eta4", "eps1", "eps2", "eps3", "eps4",
        "xi1", "xi2", "xi3", "xi4", "psi1", "psi2",
        "lambda_abs2", "omega0", "gamma0", "w2", "gamma1", "theta",
        "kappa_resp", "sigma_el1", "sigma_el2", "tau", "sample_times", "dt_sample",
        "regime", "signal", "fs_re", "fs_im", "m", "seed", "electronic_noise", "dt",
        "n_bits", "x1", "x2", "range1", "range2", "mu1", "mu2",
        "mode", "security_log2eps"};
    for (const auto& [k, v] : m.entries()) {
        if (!known.count(k)) throw ConfigError("unknown config key: " + k);
    }

    RunConfig rc;
    SimConfig& s = rc.sim;

    for (int i = 0; i < 4; ++i) {
        const std::string n = std::to_string(i + 1);
        s.circuit.eta[i] = m.get_double("eta" + n, s.circuit.eta[i]);
        s.circuit.eps[i] = m.get_double("eps" + n, s.circuit.eps[i]);
        s.circuit.xi[i] = m.get_double("xi" + n, s.circuit.xi[i]);
    }
    s.circuit.psi1 = m.get_double("psi1", 0.0);
    s.circuit.psi2 = m.get_double("psi2", 0.0);

    s.laser.lambda_abs2 = m.get_double("lambda_abs2", 1.0);
    s.laser.omega0 = m.get_double("omega0", 0.0);
    s.laser.gamma0 = m.get_double("gamma0", 0.0);
    const double w2 = m.get_double("w2", 1.0);
    if (w2 < 0.0 || w2 > 1.0) throw ConfigError("config key 'w2': must lie in [0,1]");
    s.laser.w = std::sqrt(w2);
    s.laser.v0 = 1.0 - w2;
    s.laser.gamma1 = m.get_double("gamma1", 0.0);
    const std::string theta = m.get_string("theta", "uniform");
    if (theta != "uniform") {
        try {
            std::size_t pos = 0;
            const double th = std::stod(theta, &pos);
            if (pos != theta.size()) throw ConfigError("");
            s.laser.fixed_theta = th;
        } catch (...) {
            throw ConfigError("config key 'theta': expected 'uniform' or a number");
        }
    }

    s.detector.kappa_resp = m.get_double("kappa_resp", 1.0);
    s.detector.sigma_el[0] = m.get_double("sigma_el1", 0.0);
    s.detector.sigma_el[1] = m.get_double("sigma_el2", 0.0);
    s.detector.tau = m.get_double("tau", 0.0);
    if (m.has("sample_times")) {
        if (m.has("m"))
            throw ConfigError("config keys 'sample_times' and 'm' are mutually exclusive");
        std::istringstream ss(m.get_string("sample_times", ""));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                s.detector.sample_times.push_back(std::stod(trim(tok)));
            } catch (...) {
                throw ConfigError("config key 'sample_times': bad entry: " + tok);
            }
        }
        s.m = static_cast<int>(s.detector.sample_times.size());
    } else if (m.has("dt_sample")) {
        const double dts = m.require_double("dt_sample");
        const std::int64_t count = m.get_int("m", s.m);
        s.detector.sample_times.resize(static_cast<std::size_t>(count));
        for (std::int64_t i = 0; i < count; ++i)
            s.detector.sample_times[static_cast<std::size_t>(i)] = dts * static_cast<double>(i + 1);
        s.m = static_cast<int>(count);
    }

    const std::string regime = m.get_string("regime", "strong_lo");
    if (regime == "strong_lo")
        s.regime = Regime::strong_lo;
    else if (regime == "finite_lo")
        s.regime = Regime::finite_lo;
    else
        throw ConfigError("config key 'regime': expected strong_lo or finite_lo");

    const std::string signal = m.get_string("signal", "vacuum");
    if (signal == "vacuum")
        s.signal = Signal::vacuum;
    else if (signal == "coherent")
        s.signal = Signal::coherent;
    else
        throw ConfigError("config key 'signal': expected vacuum or coherent");
    s.fs_amp = {m.get_double("fs_re", 0.0), m.get_double("fs_im", 0.0)};

    s.m = static_cast<int>(m.get_int("m", s.m));
    s.rng_seed = static_cast<std::uint64_t>(m.get_int("seed", 1));
    s.electronic_noise = m.get_bool("electronic_noise", true);
    s.dt = m.get_double("dt", 0.0);

    rc.adc.n_bits = static_cast<int>(m.get_int("n_bits", 8));
    rc.adc.x = {m.get_double("x1", 4.0), m.get_double("x2", 4.0)};
    if (m.has("range1") || m.has("range2"))
        rc.adc.range = {{m.require_double("range1"), m.require_double("range2")}};
    if (m.has("mu1") || m.has("mu2"))
        rc.adc.mu = {{m.get_double("mu1", 0.0), m.get_double("mu2", 0.0)}};

    rc.mode = m.get_string("mode", "double");
    if (rc.mode != "double" && rc.mode != "single")
        throw ConfigError("config key 'mode': expected double or single");
    const double log2eps = m.get_double("security_log2eps", -64.0);
    if (log2eps >= 0.0) throw ConfigError("config key 'security_log2eps': must be negative");
    rc.security_eps = std::exp2(log2eps);
    return rc;
}

}  // namespace octoport
