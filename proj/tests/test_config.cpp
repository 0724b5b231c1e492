#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "octoport/config.hpp"

using namespace octoport;

TEST_CASE("config parser handles comments, sections, and quoting") {
    const std::string text =
        "# leading comment\n"
        "[laser]\n"
        "lambda_abs2 = 1e16  # trailing comment\n"
        "name = \"hello world\"\n"
        "alt = 'single quoted'\n"
        "\n"
        "a = 1\n"
        "a = 2\n";
    const ConfigMap m = ConfigMap::parse_string(text);
    CHECK(m.has("lambda_abs2"));
    CHECK(!m.has("laser"));  // section headers carry no value
    CHECK(m.get_double("lambda_abs2", 0.0) == 1e16);
    CHECK(m.get_string("name", "") == "hello world");
    CHECK(m.get_string("alt", "") == "single quoted");
    CHECK(m.get_double("a", 0.0) == 2.0);  // later assignment wins
}

TEST_CASE("config parser rejects malformed lines and missing files") {
    CHECK_THROWS_AS(ConfigMap::parse_string("novalue\n"), ConfigError);
    CHECK_THROWS_AS(ConfigMap::parse_string("= 3\n"), ConfigError);
    CHECK_THROWS_AS(ConfigMap::parse_file("/nonexistent/nope.toml"), ConfigError);
}

TEST_CASE("config parser reads files") {
    const std::string path = "/tmp/octoport_test_config.toml";
    {
        std::ofstream out(path);
        out << "tau = 0.25\nmode = single\n";
    }
    const ConfigMap m = ConfigMap::parse_file(path);
    CHECK(m.get_double("tau", 0.0) == 0.25);
    CHECK(m.get_string("mode", "") == "single");
    std::remove(path.c_str());
}

TEST_CASE("typed getters convert and validate") {
    const ConfigMap base = ConfigMap::parse_string(
        "a = 2.5\n"
        "b = 7\n"
        "flag = Yes\n"
        "off_flag = off\n"
        "bad = 12x\n");
    ConfigMap m = base;
    CHECK(m.get_double("a", 0.0) == 2.5);
    CHECK(m.get_double("missing", 3.25) == 3.25);
    CHECK(m.require_double("a") == 2.5);
    CHECK_THROWS_AS(m.require_double("missing"), ConfigError);
    CHECK(m.get_int("b", 0) == 7);
    CHECK(m.get_int("missing", 42) == 42);
    CHECK_THROWS_AS(m.get_int("a", 0), ConfigError);  // 2.5 is not an integer
    CHECK(m.get_bool("flag", false));
    CHECK(!m.get_bool("off_flag", true));
    CHECK(m.get_bool("missing", true));
    CHECK_THROWS_AS(m.get_bool("b", false), ConfigError);
    CHECK_THROWS_AS(m.get_double("bad", 0.0), ConfigError);
    m.set("a", "9");
    CHECK(m.get_double("a", 0.0) == 9.0);
}

TEST_CASE("run config defaults describe a balanced strong-LO vacuum run") {
    const RunConfig rc = load_run_config(ConfigMap::parse_string(""));
    const SimConfig& s = rc.sim;
    for (int i = 0; i < 4; ++i) {
        CHECK(s.circuit.eta[i] == 0.5);
        CHECK(s.circuit.eps[i] == 1.0);
        CHECK(s.circuit.xi[i] == 1.0);
    }
    CHECK(s.circuit.psi1 == 0.0);
    CHECK(s.circuit.psi2 == 0.0);
    CHECK(s.laser.lambda_abs2 == 1.0);
    CHECK(s.laser.gamma0 == 0.0);
    CHECK(s.laser.w == 1.0);
    CHECK(s.laser.v0 == 0.0);
    CHECK(s.laser.gamma1 == 0.0);
    CHECK(!s.laser.fixed_theta.has_value());
    CHECK(s.detector.kappa_resp == 1.0);
    CHECK(s.detector.sigma_el[0] == 0.0);
    CHECK(s.detector.sigma_el[1] == 0.0);
    CHECK(s.detector.sample_times.empty());
    CHECK(s.regime == Regime::strong_lo);
    CHECK(s.signal == Signal::vacuum);
    CHECK(s.fs_amp == std::complex<double>(0.0, 0.0));
    CHECK(s.m == 1000);
    CHECK(s.rng_seed == 1);
    CHECK(s.electronic_noise);
    CHECK(s.dt == 0.0);
    CHECK(rc.adc.n_bits == 8);
    CHECK(rc.adc.x[0] == 4.0);
    CHECK(rc.adc.x[1] == 4.0);
    CHECK(!rc.adc.range.has_value());
    CHECK(!rc.adc.mu.has_value());
    CHECK(rc.mode == "double");
    CHECK(rc.security_eps == std::exp2(-64.0));
}

TEST_CASE("run config maps keys onto simulation parameters") {
    const RunConfig rc = load_run_config(ConfigMap::parse_string(
        "eta3 = 0.45\n"
        "eps1 = 0.9\n"
        "xi2 = 2.5\n"
        "psi2 = 1.5707963267948966\n"
        "lambda_abs2 = 1e12\n"
        "gamma0 = 100\n"
        "w2 = 0.64\n"
        "gamma1 = 250\n"
        "theta = 0.75\n"
        "kappa_resp = 1e3\n"
        "sigma_el1 = 5e3\n"
        "tau = 0.003\n"
        "regime = finite_lo\n"
        "signal = coherent\n"
        "fs_re = 30\n"
        "fs_im = -20\n"
        "m = 250\n"
        "seed = 99\n"
        "electronic_noise = false\n"
        "dt = 1e-6\n"
        "n_bits = 10\n"
        "x1 = 3.5\n"
        "x2 = 4.5\n"
        "mode = single\n"
        "security_log2eps = -100\n"));
    const SimConfig& s = rc.sim;
    CHECK(s.circuit.eta[2] == 0.45);
    CHECK(s.circuit.eps[0] == 0.9);
    CHECK(s.circuit.xi[1] == 2.5);
    CHECK(s.circuit.psi2 == doctest::Approx(1.5707963267948966));
    CHECK(s.laser.lambda_abs2 == 1e12);
    CHECK(s.laser.gamma0 == 100.0);
    CHECK(s.laser.w == std::sqrt(0.64));
    CHECK(s.laser.v0 == 1.0 - 0.64);
    CHECK(s.laser.gamma1 == 250.0);
    REQUIRE(s.laser.fixed_theta.has_value());
    CHECK(*s.laser.fixed_theta == 0.75);
    CHECK(s.detector.kappa_resp == 1e3);
    CHECK(s.detector.sigma_el[0] == 5e3);
    CHECK(s.detector.sigma_el[1] == 0.0);
    CHECK(s.detector.tau == 0.003);
    CHECK(s.regime == Regime::finite_lo);
    CHECK(s.signal == Signal::coherent);
    CHECK(s.fs_amp == std::complex<double>(30.0, -20.0));
    CHECK(s.m == 250);
    CHECK(s.rng_seed == 99);
    CHECK(!s.electronic_noise);
    CHECK(s.dt == 1e-6);
    CHECK(rc.adc.n_bits == 10);
    CHECK(rc.adc.x[0] == 3.5);
    CHECK(rc.adc.x[1] == 4.5);
    CHECK(rc.mode == "single");
    CHECK(rc.security_eps == std::exp2(-100.0));
}

TEST_CASE("sample grids come from explicit lists or a uniform step") {
    const RunConfig rc =
        load_run_config(ConfigMap::parse_string("sample_times = 1e-4, 2e-4,3e-4\n"));
    REQUIRE(rc.sim.detector.sample_times.size() == 3);
    CHECK(rc.sim.detector.sample_times[0] == 1e-4);
    CHECK(rc.sim.detector.sample_times[1] == 2e-4);
    CHECK(rc.sim.detector.sample_times[2] == 3e-4);
    CHECK(rc.sim.m == 3);

    CHECK_THROWS_AS(load_run_config(
                        ConfigMap::parse_string("sample_times = 1e-4,2e-4\nm = 5\n")),
                    ConfigError);
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("sample_times = 1e-4, oops\n")),
                    ConfigError);

    const RunConfig rs = load_run_config(ConfigMap::parse_string("dt_sample = 2e-5\nm = 4\n"));
    REQUIRE(rs.sim.detector.sample_times.size() == 4);
    CHECK(rs.sim.detector.sample_times[0] == doctest::Approx(2e-5));
    CHECK(rs.sim.detector.sample_times[3] == doctest::Approx(8e-5));
    CHECK(rs.sim.m == 4);
}

TEST_CASE("adc range needs both halves, offsets default to zero") {
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("range1 = 1.5\n")), ConfigError);
    const RunConfig rc =
        load_run_config(ConfigMap::parse_string("range1 = 1.5\nrange2 = 2.5\nmu1 = 0.25\n"));
    REQUIRE(rc.adc.range.has_value());
    CHECK((*rc.adc.range)[0] == 1.5);
    CHECK((*rc.adc.range)[1] == 2.5);
    REQUIRE(rc.adc.mu.has_value());
    CHECK((*rc.adc.mu)[0] == 0.25);
    CHECK((*rc.adc.mu)[1] == 0.0);
}

TEST_CASE("run config rejects unknown keys and bad values") {
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("bogus = 1\n")), ConfigError);
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("w2 = 1.5\n")), ConfigError);
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("w2 = -0.1\n")), ConfigError);
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("theta = fixed\n")), ConfigError);
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("regime = weak\n")), ConfigError);
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("signal = squeezed\n")),
                    ConfigError);
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("mode = triple\n")), ConfigError);
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("security_log2eps = 0\n")),
                    ConfigError);
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("security_log2eps = 3\n")),
                    ConfigError);
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("m = 2.5\n")), ConfigError);
    CHECK_THROWS_AS(load_run_config(ConfigMap::parse_string("electronic_noise = maybe\n")),
                    ConfigError);
}
