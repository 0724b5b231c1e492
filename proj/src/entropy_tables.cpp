#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "octoport/entropy.hpp"
#include "octoport/single_homodyne.hpp"

namespace octoport {

namespace {

const std::vector<int> table_rows{8, 10, 12, 16, 32};
const std::vector<double> table_cols_double{3.8, 4.0, 4.6, 5.1, 6.0, 8.9, 9.5};
const std::vector<double> table_cols_single{3.0, 3.4, 4.0, 4.6, 6.1, 8.9, 9.5};

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

Table href_table() {
    Table t;
    t.corner = "n";
    t.rows = table_rows;
    t.cols = table_cols_double;
    t.cell_format = "%.2f";
    for (int n : t.rows) {
        std::vector<double> row;
        for (double x : t.cols) {
            const HRefCell c = h_ref_and_tables(n, x, x);
            row.push_back(c.condition_ok ? c.h_ref : std::nan(""));
        }
        t.value.push_back(std::move(row));
    }
    return t;
}

Table ratio_table() {
    Table t;
    t.corner = "n";
    t.rows = table_rows;
    t.cols = table_cols_double;
    t.cell_format = "%.2g";
    for (int n : t.rows) {
        std::vector<double> row;
        for (double x : t.cols) row.push_back(h_ref_and_tables(n, x, x).ratio);
        t.value.push_back(std::move(row));
    }
    return t;
}

void write_table_csv(const Table& t, std::ostream& os) {
    os << t.corner;
    for (double x : t.cols) os << ',' << fmt("%.1f", x);
    os << '\n';
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        os << t.rows[r];
        for (double v : t.value[r]) {
            os << ',';
            if (!std::isnan(v)) os << fmt(t.cell_format, v);
        }
        os << '\n';
    }
}

void write_table_text(const Table& t, std::ostream& os) {
    const int w = 10;
    os << t.corner;
    for (std::size_t i = t.corner.size(); i < 4; ++i) os << ' ';
    for (double x : t.cols) {
        const std::string s = fmt("%.1f", x);
        for (std::size_t i = s.size(); i < w; ++i) os << ' ';
        os << s;
    }
    os << '\n';
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string lbl = std::to_string(t.rows[r]);
        os << lbl;
        for (std::size_t i = lbl.size(); i < 4; ++i) os << ' ';
        for (double v : t.value[r]) {
            const std::string s = std::isnan(v) ? std::string("-") : fmt(t.cell_format, v);
            for (std::size_t i = s.size(); i < w; ++i) os << ' ';
            os << s;
        }
        os << '\n';
    }
}

CurveSet loss_curves(LossCurve kind, const std::vector<double>& eta, double base_upsilon,
                     double Theta) {
    CurveSet s;
    s.kind = kind;
    s.eta = eta;
    for (int i = 0; i <= 100; ++i) s.eps.push_back(1.0 - 0.005 * i);

    for (double eps : s.eps) {
        std::vector<double> row;
        for (double h : eta) {
            const double d = 1.0 - 2.0 * h;
            const double U = d * d * base_upsilon;
            double v = 0.0;
            switch (kind) {
                case LossCurve::correlation: {
                    const NoiseBudget b = simplified_budget(h, eps, 1.0, U, Theta, 1.0, 1.0);
                    v = loss_correlation(b);
                    break;
                }
                case LossCurve::classical: {
                    const NoiseBudget b = simplified_budget(h, eps, 1.0, U, Theta, 1.0, 1.0);
                    v = loss_ref_minus_cond(b, 1.0, 1.0);
                    break;
                }
                case LossCurve::quantum: {
                    CircuitParams p;
                    p.eta = {0.5, 0.5, h, h};
                    p.eps = {eps, eps, eps, eps};
                    p.psi2 = pi / 2.0;
                    const Coefficients c = derive_coefficients(p, 1.0);
                    AdcConfig a;
                    const NoiseBudget b = simplified_budget(h, eps, 1.0, U, Theta, 1.0, 1.0);
                    const AdcGrid grid = resolve_adc(a, b);
                    v = h_lb_quantum(c, grid, 1.0, 1.0).loss_diff2;
                    break;
                }
                case LossCurve::single: {
                    v = loss_classical_single(eps, h, U, Theta, 1.0);
                    break;
                }
            }
            row.push_back(v);
        }
        s.value.push_back(std::move(row));
    }
    return s;
}

void write_curves_csv(const CurveSet& s, std::ostream& os) {
    os << "quantum_loss_pct";
    for (double h : s.eta) os << ",eta_" << fmt("%.3f", h);
    os << '\n';
    for (std::size_t i = 0; i < s.eps.size(); ++i) {
        os << fmt("%.1f", 100.0 * (1.0 - s.eps[i]));
        for (double v : s.value[i]) os << ',' << fmt("%.12g", v);
        os << '\n';
    }
}

namespace {

nlohmann::json grid_json(const AdcGrid& g) {
    return {{"n_bits", g.n_bits},
            {"range", {g.R[0], g.R[1]}},
            {"delta", {g.delta[0], g.delta[1]}},
            {"mu", {g.mu[0], g.mu[1]}},
            {"x", {g.x[0], g.x[1]}}};
}

}  // namespace

std::string to_json(const EntropyReport& r) {
    nlohmann::json j{{"channels", r.channels},
                     {"h_min_total", r.h_min_total},
                     {"h_min_total_approx", r.h_min_total_approx},
                     {"h_ref", r.h_ref},
                     {"h0", r.h0},
                     {"h_cond_classical", r.h_cond_classical},
                     {"h_lb_quantum", r.h_lb_quantum},
                     {"h_lb_negative", r.h_lb_negative},
                     {"loss_correlation", r.loss_correlation},
                     {"loss_diff1", r.loss_diff1},
                     {"loss_diff2", r.loss_diff2},
                     {"p_guess", r.p_guess},
                     {"p_saturation", r.p_saturation},
                     {"sat_condition_ok", r.sat_condition_ok},
                     {"s0", r.S0},
                     {"s_minus", r.S_minus},
                     {"adc", grid_json(r.grid)}};
    return j.dump(2);
}

}  // namespace octoport
