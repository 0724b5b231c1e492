// Command line front end: simulation, analytic ledgers, tables, figure data,
// spectra and Toeplitz extraction from one flat config file.
//
// Exit codes: 0 success, 2 config/usage errors, 3 domain errors, 4 I/O errors.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "octoport/analytic.hpp"
#include "octoport/circuit.hpp"
#include "octoport/config.hpp"
#include "octoport/detector.hpp"
#include "octoport/entropy.hpp"
#include "octoport/extractor.hpp"
#include "octoport/laser.hpp"
#include "octoport/mc_sim.hpp"
#include "octoport/single_homodyne.hpp"
#include "octoport/stats.hpp"

namespace {

using namespace octoport;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file: " + path);
    f << text;
    if (!f) throw IoError("write failed: " + path);
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty())
        std::cout << text;
    else
        write_text_file(path, text);
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open input file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    ConfigMap m = path.empty() ? ConfigMap{} : ConfigMap::parse_file(path);
    for (const auto& kv : overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got: " + kv);
        m.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return load_run_config(m);
}

std::string batch_csv(const SampleBatch& b) {
    std::ostringstream os;
    write_csv(b, os);
    return os.str();
}

std::string table_string(const Table& t, const std::string& format) {
    std::ostringstream os;
    if (format == "text")
        write_table_text(t, os);
    else
        write_table_csv(t, os);
    return os.str();
}

double resolve_s_minus(const RunConfig& rc, double explicit_value, int batch) {
    if (explicit_value > 0.0) return explicit_value;
    const double S0 = s0(rc.sim.detector);
    if (batch > 0)
        return s_minus(rc.sim.laser, rc.sim.detector, batch, rc.sim.rng_seed ^ 0x5f5eULL).value;
    return S0;
}

int run_validate();

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eight-port homodyne detector: simulation and entropy analysis"};
    app.require_subcommand(1);

    std::string config_path, out_path, out_dir = ".", format = "csv", mode_flag, regime_flag;
    std::vector<std::string> overrides;
    std::int64_t seed_flag = -1, samples_flag = -1;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* copt = sub->add_option("--config", config_path, "flat key=value config file");
        if (needs_config) copt->required();
        sub->add_option("--set", overrides, "override a config key, key=value")->take_all();
        sub->add_option("--out", out_path, "output file (default stdout)");
        sub->add_option("--seed", seed_flag, "override rng seed");
        sub->add_option("--samples", samples_flag, "override sample count");
        sub->add_option("--regime", regime_flag, "override regime: finite_lo|strong_lo");
        sub->add_option("--mode", mode_flag, "override mode: double|single");
        sub->add_option("--format", format, "output format: csv|json|text");
    };

    auto apply_flags = [&](RunConfig& rc) {
        if (seed_flag >= 0) rc.sim.rng_seed = static_cast<std::uint64_t>(seed_flag);
        if (samples_flag > 0) rc.sim.m = static_cast<int>(samples_flag);
        if (!regime_flag.empty()) {
            if (regime_flag == "finite_lo")
                rc.sim.regime = Regime::finite_lo;
            else if (regime_flag == "strong_lo")
                rc.sim.regime = Regime::strong_lo;
            else
                throw ConfigError("--regime: expected finite_lo or strong_lo");
        }
        if (!mode_flag.empty()) {
            if (mode_flag != "double" && mode_flag != "single")
                throw ConfigError("--mode: expected double or single");
            rc.mode = mode_flag;
        }
    };

    // simulate
    auto* sub_sim = app.add_subcommand("simulate", "draw a photocurrent sample batch");
    std::string traj_out;
    add_common(sub_sim, true);
    sub_sim->add_option("--trajectory-out", traj_out,
                        "also export one oscillator trajectory CSV over a window");
    sub_sim->callback([&] {
        RunConfig rc = load_config(config_path, overrides);
        apply_flags(rc);
        const SampleBatch b = sample(rc.sim);
        if (format == "json") {
            nlohmann::json j = nlohmann::json::parse(meta_json(b));
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& xy : b.x) rows.push_back({xy[0], xy[1]});
            j["samples"] = std::move(rows);
            emit(out_path, j.dump(2) + "\n");
        } else {
            emit(out_path, batch_csv(b));
            if (!out_path.empty()) write_text_file(out_path + ".meta.json", meta_json(b) + "\n");
        }
        if (!traj_out.empty()) {
            const double dt = grid_dt(rc.sim);
            const int n = static_cast<int>(std::ceil(effective_tau(rc.sim.detector) / dt)) + 1;
            const LaserTrajectory tr =
                sample_trajectory(rc.sim.laser, {0.0, dt, n}, derive_seed(rc.sim.rng_seed, 0));
            std::ostringstream os;
            os << "t,re_f,im_f,abs2\n";
            char buf[120];
            for (int i = 0; i < n; ++i) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n",
                              tr.grid.t0 + dt * i, tr.f[static_cast<std::size_t>(i)].real(),
                              tr.f[static_cast<std::size_t>(i)].imag(),
                              tr.abs2[static_cast<std::size_t>(i)]);
                os << buf;
            }
            write_text_file(traj_out, os.str());
        }
    });

    // moments
    auto* sub_mom = app.add_subcommand("moments", "simulate and report empirical moments");
    add_common(sub_mom, true);
    sub_mom->callback([&] {
        RunConfig rc = load_config(config_path, overrides);
        apply_flags(rc);
        const SampleBatch b = sample(rc.sim);
        emit(out_path, moments_json(empirical_moments(b)) + "\n");
    });

    // entropy
    auto* sub_ent = app.add_subcommand("entropy", "analytic min-entropy ledger");
    double s_minus_value = 0.0;
    int s_minus_batch = 0;
    add_common(sub_ent, true);
    sub_ent->add_option("--s-minus", s_minus_value, "explicit S- value");
    sub_ent->add_option("--s-minus-batch", s_minus_batch,
                        "estimate S- from this many oscillator windows (default: use S0)");
    sub_ent->callback([&] {
        RunConfig rc = load_config(config_path, overrides);
        apply_flags(rc);
        validate(rc.sim.circuit);
        validate(rc.sim.laser);
        validate(rc.sim.detector, &rc.sim.laser);
        const double S0 = s0(rc.sim.detector);
        const double C0 = c0(rc.sim.detector, rc.sim.laser);
        const double sm = resolve_s_minus(rc, s_minus_value, s_minus_batch);
        std::string text;
        if (rc.mode == "single") {
            const Coefficients c =
                single_homodyne_params(rc.sim.circuit, rc.sim.laser.lambda_abs2);
            const SingleBudget b = single_budget(c, S0, C0, rc.sim.laser.lambda_abs2,
                                                 rc.sim.detector.sigma_el[0]);
            text = to_json(make_entropy_report_single(b, rc.adc.n_bits, rc.adc.x[0], sm));
        } else {
            const Coefficients c = derive_coefficients(rc.sim.circuit, rc.sim.laser.lambda_abs2);
            const NoiseBudget b = vacuum_budget(c, S0, C0, rc.sim.laser.lambda_abs2,
                                                rc.sim.detector.sigma_el);
            text = to_json(make_entropy_report(c, b, rc.adc, S0, sm));
        }
        emit(out_path, text + "\n");
    });

    // tables
    auto* sub_tab = app.add_subcommand("tables", "built-in reference tables");
    int which = 0;
    add_common(sub_tab, false);
    sub_tab->add_option("--which", which, "table number: 1, 2 or 3")->required();
    sub_tab->callback([&] {
        Table t;
        if (which == 1)
            t = href_table();
        else if (which == 2)
            t = ratio_table();
        else if (which == 3)
            t = single_entropy_table();
        else
            throw ConfigError("--which: expected 1, 2 or 3");
        emit(out_path, table_string(t, format));
    });

    // figures
    auto* sub_fig = app.add_subcommand("figures", "entropy-loss curve data files");
    double base_upsilon = 0.5e4, theta_red = 0.12;
    add_common(sub_fig, false);
    sub_fig->add_option("--out-dir", out_dir, "directory for the CSV files");
    sub_fig->add_option("--base-upsilon", base_upsilon,
                        "|lambda|^2 C0 / (2 S0) of the operating point");
    sub_fig->add_option("--theta", theta_red, "reduced electronic noise ratio");
    sub_fig->callback([&] {
        std::filesystem::create_directories(out_dir);
        const std::vector<double> small{0.5, 0.502, 0.503, 0.504};
        const std::vector<double> big{0.52, 0.53, 0.54};
        const struct {
            const char* name;
            LossCurve kind;
            const std::vector<double>* eta;
        } jobs[] = {
            {"fig2_correlation_small.csv", LossCurve::correlation, &small},
            {"fig3_correlation_big.csv", LossCurve::correlation, &big},
            {"fig4_classical_small.csv", LossCurve::classical, &small},
            {"fig5_classical_big.csv", LossCurve::classical, &big},
            {"fig6_single_small.csv", LossCurve::single, &small},
            {"fig7_single_big.csv", LossCurve::single, &big},
            {"quantum_small.csv", LossCurve::quantum, &small},
            {"quantum_big.csv", LossCurve::quantum, &big},
        };
        for (const auto& job : jobs) {
            std::ostringstream os;
            write_curves_csv(loss_curves(job.kind, *job.eta, base_upsilon, theta_red), os);
            write_text_file((std::filesystem::path(out_dir) / job.name).string(), os.str());
        }
    });

    // spectra
    auto* sub_spc = app.add_subcommand("spectra", "oscillator intensity and RIN spectra");
    int npoints = 501;
    add_common(sub_spc, true);
    sub_spc->add_option("--points", npoints, "grid points per spectrum");
    sub_spc->callback([&] {
        RunConfig rc = load_config(config_path, overrides);
        apply_flags(rc);
        const LaserParams& l = rc.sim.laser;
        validate(l);
        if (!(l.gamma0 > 0.0 || l.gamma1 > 0.0))
            throw std::invalid_argument("spectra: need gamma0 > 0 or gamma1 > 0");
        const double width = 10.0 * (l.gamma0 + l.gamma1);
        std::ostringstream os;
        os << "mu_offset,intensity,rin_density\n";
        char buf[120];
        for (int i = 0; i < npoints; ++i) {
            const double off = -width + 2.0 * width * i / (npoints - 1);
            const double s_int = intensity_spectrum(l, l.omega0 + off);
            const double s_rin = l.v0 > 0.0 ? rin_spectrum_and_eff(l, off).density : 0.0;
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", off, s_int, s_rin);
            os << buf;
        }
        emit(out_path, os.str());
        if (l.v0 > 0.0 && !out_path.empty()) {
            nlohmann::json j{{"rin_eff", rin_spectrum_and_eff(l, 0.0).eff},
                             {"c0", c0(rc.sim.detector, l)}};
            write_text_file(out_path + ".meta.json", j.dump(2) + "\n");
        }
    });

    // extract
    auto* sub_ext = app.add_subcommand("extract", "Toeplitz extraction over GF(2)");
    std::string in_path, seed_path, seed_hex;
    std::int64_t out_len = 0, in_bits = 0;
    bool hex_out = false;
    double h_bits = -1.0, log2eps = -64.0;
    std::int64_t size_m = 0;
    int size_bits = 0;
    add_common(sub_ext, false);
    sub_ext->add_option("--in", in_path, "raw input bit file");
    sub_ext->add_option("--in-bits", in_bits, "bits of input to use (default whole file)");
    sub_ext->add_option("--seed-file", seed_path, "seed bit file (in + out - 1 bits)");
    sub_ext->add_option("--seed-hex", seed_hex, "seed as hex string");
    sub_ext->add_option("--out-len", out_len, "output length in bits");
    sub_ext->add_flag("--hex", hex_out, "write hex text instead of binary");
    sub_ext->add_option("--h-bits", h_bits, "min-entropy per sample, for sizing");
    sub_ext->add_option("--size-m", size_m, "sample count, for sizing");
    sub_ext->add_option("--size-bits", size_bits, "raw bits per sample, for sizing");
    sub_ext->add_option("--log2eps", log2eps, "log2 of the security parameter");
    sub_ext->callback([&] {
        if (h_bits >= 0.0) {
            const std::int64_t k =
                required_output_length(size_m, size_bits, h_bits, std::exp2(log2eps));
            emit(out_path, std::to_string(k) + "\n");
            return;
        }
        if (in_path.empty() || out_len <= 0)
            throw ConfigError("extract: need --in and --out-len (or --h-bits sizing)");
        const auto raw_bytes = read_file_bytes(in_path);
        const std::size_t nin = in_bits > 0 ? static_cast<std::size_t>(in_bits)
                                            : raw_bytes.size() * 8;
        const BitVec raw = BitVec::from_bytes(raw_bytes, nin);
        BitVec seedv;
        const std::size_t need = nin + static_cast<std::size_t>(out_len) - 1;
        if (!seed_hex.empty()) {
            seedv = from_hex(seed_hex, need);
        } else if (!seed_path.empty()) {
            seedv = BitVec::from_bytes(read_file_bytes(seed_path), need);
        } else {
            throw ConfigError("extract: need --seed-file or --seed-hex");
        }
        const BitVec y = toeplitz_extract(raw, seedv, static_cast<std::size_t>(out_len));
        if (hex_out) {
            emit(out_path, to_hex(y) + "\n");
        } else {
            const auto bytes = y.to_bytes();
            if (out_path.empty()) throw ConfigError("extract: binary output needs --out");
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw IoError("cannot open output file: " + out_path);
            f.write(reinterpret_cast<const char*>(bytes.data()),
                    static_cast<std::streamsize>(bytes.size()));
            if (!f) throw IoError("write failed: " + out_path);
        }
    });

    // validate
    auto* sub_val = app.add_subcommand("validate", "internal oracle cross-checks");
    sub_val->callback([&] {
        if (run_validate() != 0) throw std::domain_error("validation suite failed");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

namespace {

int run_validate() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    // Coefficient decomposition on random draws.
    {
        Rng rng(20240817);
        bool ok = true;
        for (int i = 0; i < 200 && ok; ++i) {
            CircuitParams p;
            for (int k = 0; k < 4; ++k) {
                p.eta[k] = 0.1 + 0.8 * rng.uniform();
                p.eps[k] = 0.3 + 0.7 * rng.uniform();
                p.xi[k] = 0.5 + 1.5 * rng.uniform();
            }
            const Coefficients c = derive_coefficients(p, 1.0 + rng.uniform());
            for (int j = 0; j < 2; ++j) {
                const double lhs = c.kappa[j][1];
                const double rhs = c.kappa[j][2] * c.kappa[j][2] *
                                   (c.g3[j] + c.v2[j] + c.sig2[j] + 1.0);
                if (std::abs(lhs - rhs) > 1e-12 * std::abs(lhs)) ok = false;
            }
        }
        check("coefficient decomposition", ok);
    }

    // Response scale: closed form versus quadrature.
    {
        DetectorParams d;
        d.kappa_resp = 3.7e3;
        check("s0 quadrature", std::abs(s0(d) - s0_quadrature(d)) <= 1e-10 * s0(d));
    }

    // Intensity filtering factor versus double quadrature of the covariance.
    {
        DetectorParams d;
        d.kappa_resp = 1.0;
        LaserParams l;
        l.w = std::sqrt(0.5);
        l.v0 = 0.5;
        l.gamma1 = 1.0;
        const double T = 40.0;
        auto inner = [&](double s) {
            return adaptive_simpson(
                [&](double r) { return response(d, r) * rin_covariance(l, s - r); }, 0.0, T,
                1e-9);
        };
        const double c0_quad =
            adaptive_simpson([&](double s) { return response(d, s) * inner(s); }, 0.0, T, 1e-7);
        const double c0_closed = c0(d, l);
        check("c0 quadrature", std::abs(c0_quad - c0_closed) <= 1e-4 * c0_closed);
    }

    // Guessing probability against a plain 2-D Simpson oracle.
    {
        NoiseBudget b;
        b.mean = {0.1, -0.2};
        b.Sigma2 = {1.3, 0.9};
        b.C[0][0] = 1.3;
        b.C[1][1] = 0.9;
        b.C[0][1] = b.C[1][0] = 0.3 * std::sqrt(1.3 * 0.9);
        b.det_C = b.C[0][0] * b.C[1][1] - b.C[0][1] * b.C[0][1];
        b.shot2[0] = b.Sigma2[0];
        b.shot2[1] = b.Sigma2[1];
        b.E12 = 1.0;
        AdcConfig a;
        a.n_bits = 6;
        const AdcGrid g = resolve_adc(a, b);
        const GuessingProb p = guessing_prob_numeric(b, g);
        // Direct 2-D Simpson of the density over the mean-centered cell.
        const double s1 = std::sqrt(b.Sigma2[0]), s2 = std::sqrt(b.Sigma2[1]);
        const double rho = b.C[0][1] / (s1 * s2);
        auto dens = [&](double x, double y) {
            const double zx = (x - b.mean[0]) / s1, zy = (y - b.mean[1]) / s2;
            return std::exp(-(zx * zx - 2 * rho * zx * zy + zy * zy) / (2 * (1 - rho * rho))) /
                   (2 * pi * s1 * s2 * std::sqrt(1 - rho * rho));
        };
        const int N = 200;
        double acc = 0.0;
        const double hx = g.delta[0] / N, hy = g.delta[1] / N;
        for (int i = 0; i <= N; ++i) {
            for (int j = 0; j <= N; ++j) {
                const double wx = (i == 0 || i == N) ? 0.5 : 1.0;
                const double wy = (j == 0 || j == N) ? 0.5 : 1.0;
                acc += wx * wy *
                       dens(b.mean[0] - 0.5 * g.delta[0] + hx * i,
                            b.mean[1] - 0.5 * g.delta[1] + hy * j);
            }
        }
        acc *= hx * hy;
        check("guessing probability quadrature",
              std::abs(p.numeric - acc) <= 1e-6 * acc && p.numeric <= p.approx * (1 + 1e-9));
    }

    // Toeplitz product against the direct matrix evaluation.
    {
        Rng rng(99);
        bool ok = true;
        for (int rep = 0; rep < 20 && ok; ++rep) {
            const std::size_t nin = 5 + rng.u64() % 60;
            const std::size_t nout = 1 + rng.u64() % 40;
            const BitVec raw = BitVec::random(nin, rng);
            const BitVec seed = BitVec::random(nin + nout - 1, rng);
            const BitVec fast = toeplitz_extract(raw, seed, nout);
            for (std::size_t i = 0; i < nout && ok; ++i) {
                bool acc = false;
                for (std::size_t j = 0; j < nin; ++j)
                    acc ^= raw.get(j) && seed.get(i + nin - 1 - j);
                if (acc != fast.get(i)) ok = false;
            }
        }
        check("toeplitz matrix oracle", ok);
    }

    return failures;
}

}  // namespace
