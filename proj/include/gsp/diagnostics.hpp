#pragma once

/// Post-processing: the QG regularity-transfer ratio check, convergence
/// tables, and run reports re-scorable from the emitted per-step series.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsp/io.hpp"
#include "gsp/propagator.hpp"
#include "gsp/solvers.hpp"
#include "gsp/torus.hpp"

namespace gsp {

// ---------------------------------------------------------------------------
// Regularity transfer: |L_h^{s+sigma} L_v^{s'+1-sigma} V_QG| against
// |L_h^s L_v^{s'} Omega|, where L_h, L_v multiply by |n_h_chk|, |n3_chk|.
// Per mode the Biot-Savart vector has C^4 norm |Omega_hat|/|n_chk|_F, so the
// quotient symbol is |n_h_chk|^sigma |n3_chk|^{1-sigma} / |n_chk|_F and the
// ratio of the two norms is bounded by the lattice maximum of that symbol.

struct RatioReport {
    double lhs = 0.0;            ///< weighted norm of V_QG
    double rhs = 0.0;            ///< weighted norm of Omega
    double ratio = 0.0;          ///< lhs / rhs
    double lattice_bound = 0.0;  ///< max over lattice modes of the symbol quotient
};

inline double regularity_transfer_symbol(const TorusSpec& spec, const Int3& n, double sigma,
                                         double s, double s_prime) {
    (void)s;
    (void)s_prime;
    if (n[0] == 0 && n[1] == 0 && n[2] == 0) return 0.0;
    const double kh = std::sqrt(spec.kh2(n));
    const double kv = std::abs(spec.checked3(n[2]));
    const double kF = std::sqrt(spec.kF2(n));
    return std::pow(kh, sigma) * std::pow(kv, 1.0 - sigma) / kF;
}

inline RatioReport regularity_transfer_check(const TorusSpec& spec, const SpectralScalar& omega,
                                             double sigma, double s = 0.0,
                                             double s_prime = 0.0) {
    if (sigma < 0.0 || sigma > 1.0)
        throw std::invalid_argument("regularity_transfer_check: sigma must lie in [0,1]");
    const SpectralField4 v = biot_savart_qg(spec, omega);
    RatioReport rep;
    double lhs2 = 0.0, rhs2 = 0.0;
    omega.lattice.for_each([&](std::size_t idx, const Int3& n) {
        const double kh = std::sqrt(spec.kh2(n));
        const double kv = std::abs(spec.checked3(n[2]));
        double vn2 = 0.0;
        for (int c = 0; c < 4; ++c) vn2 += std::norm(v.at(idx, c));
        lhs2 += std::pow(kh, 2.0 * (s + sigma)) * std::pow(kv, 2.0 * (s_prime + 1.0 - sigma)) *
                vn2;
        rhs2 += std::pow(kh, 2.0 * s) * std::pow(kv, 2.0 * s_prime) * std::norm(omega.at(idx));
        rep.lattice_bound = std::max(rep.lattice_bound,
                                     regularity_transfer_symbol(spec, n, sigma, s, s_prime));
    });
    if (rhs2 == 0.0)
        throw std::invalid_argument("regularity_transfer_check: Omega is zero");
    rep.lhs = std::sqrt(lhs2);
    rep.rhs = std::sqrt(rhs2);
    rep.ratio = rep.lhs / rep.rhs;
    return rep;
}

// ---------------------------------------------------------------------------
// Resonance gap histogram: distribution of |a w(k) + b w(m) - c w(n)| over
// the same admissible domain as the enumerator (k, m, k+m nonzero and
// in-lattice; all 8 sign combinations counted separately).  Entries below
// `tol` count as resonant and stay out of the bins; this is the evidence
// backing the float-certification tolerance (resonant defects sit at zero,
// the first nonzero gaps orders of magnitude above 1e-9).

inline CsvTable gap_histogram_csv(const GapHistogram& h) {
    CsvTable csv;
    csv.schema = "resonance-gaps";
    csv.columns = {"bin_lo", "bin_hi", "count"};
    for (std::size_t i = 0; i < h.bins.size(); ++i) {
        const double lo = std::pow(10.0, static_cast<double>(i) - 14.0);
        const double hi = std::pow(10.0, static_cast<double>(i) - 13.0);
        csv.rows.push_back({lo, hi, static_cast<double>(h.bins[i])});
    }
    return csv;
}

inline std::string gap_histogram_summary(const GapHistogram& h) {
    std::ostringstream os;
    os << "admissible triples    : " << h.total << "\n";
    os << "resonant (gap ~ 0)    : " << h.resonant_count << "\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "min nonzero gap       : %.6e\n",
                  std::isfinite(h.min_nonzero_gap) ? h.min_nonzero_gap : 0.0);
    os << buf;
    for (std::size_t i = 0; i < h.bins.size(); ++i)
        if (h.bins[i]) {
            std::snprintf(buf, sizeof(buf), "  [1e%+03d, 1e%+03d): %zu\n",
                          static_cast<int>(i) - 14, static_cast<int>(i) - 13, h.bins[i]);
            os << buf;
        }
    return os.str();
}

// ---------------------------------------------------------------------------
// Convergence tables.

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;  ///< sorted by eps descending
    bool monotone = false;             ///< sup-gap strictly decreasing down the rows
};

inline ConvergenceTable emit_convergence_table(std::vector<ConvergenceRow> rows) {
    if (rows.size() < 2)
        throw std::invalid_argument("emit_convergence_table: need at least 2 epsilon values");
    std::sort(rows.begin(), rows.end(),
              [](const ConvergenceRow& a, const ConvergenceRow& b) { return a.eps > b.eps; });
    ConvergenceTable t;
    t.monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].sup_gap < rows[i - 1].sup_gap)) t.monotone = false;
    t.rows = std::move(rows);
    return t;
}

inline CsvTable convergence_csv(const ConvergenceTable& t) {
    CsvTable csv;
    csv.schema = "convergence";
    csv.columns = {"eps", "sup_gap_h0sigma", "grad_gap_l2t"};
    for (const ConvergenceRow& r : t.rows) csv.rows.push_back({r.eps, r.sup_gap, r.grad_gap});
    return csv;
}

inline std::string convergence_summary(const ConvergenceTable& t) {
    std::ostringstream os;
    os << "convergence table (" << t.rows.size() << " epsilon values)\n";
    char line[128];
    for (const ConvergenceRow& r : t.rows) {
        std::snprintf(line, sizeof(line), "  eps = %-10.3e sup gap = %-14.6e grad gap = %-14.6e\n",
                      r.eps, r.sup_gap, r.grad_gap);
        os << line;
    }
    os << "monotone decrease: " << (t.monotone ? "yes" : "NO") << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Run reports.  A report is a pure function of the emitted per-step series,
// so any run can be re-scored from its CSV alone.  The energy defect uses a
// trapezoidal re-integration of the gradient column; that carries O(dt^2)
// quadrature error, so the CSV-level tolerance is necessarily looser than the
// solver's internal RK4-quadrature ledger.

struct RunReport {
    std::string config_echo;
    double max_div_residual = 0.0;
    double energy_defect = 0.0;  ///< relative excess of E(t) + 2c int |grad_h|^2 over E(0)
    double havg_drift = 0.0;     ///< max |horizontal average| - initial
    double final_energy = 0.0;
    double final_omega_norm = 0.0;
    double final_osc_norm = 0.0;
    bool divergence_ok = false;          ///< invariant: divergence-free to tolerance
    bool energy_ok = false;              ///< invariant: discrete energy inequality
    bool horizontal_average_ok = false;  ///< invariant: horizontal-average conservation
};

inline CsvTable series_csv(const std::vector<SeriesRow>& series) {
    CsvTable csv;
    csv.schema = "run-series";
    csv.columns = {"t",        "energy_l2", "grad_h_sq",    "omega_h0s",
                   "uosc_h0s", "havg",      "div_residual"};
    for (const SeriesRow& r : series)
        csv.rows.push_back(
            {r.t, r.energy, r.grad_h_sq, r.omega_h0s, r.uosc_h0s, r.havg, r.div_residual});
    return csv;
}

inline std::vector<SeriesRow> series_from_csv(const CsvTable& csv) {
    if (csv.schema != "run-series")
        throw IoError("expected schema run-series, got " + csv.schema);
    if (csv.columns.size() != 7) throw IoError("run-series expects 7 columns");
    std::vector<SeriesRow> out;
    out.reserve(csv.rows.size());
    for (const std::vector<double>& r : csv.rows)
        out.push_back({r[0], r[1], r[2], r[3], r[4], r[5], r[6]});
    return out;
}

inline RunReport score_run(const std::vector<SeriesRow>& series, double c_min_visc,
                           std::string config_echo = std::string(), double div_tol = 1e-11,
                           double energy_tol = 1e-4, double havg_tol = 1e-8) {
    if (series.empty()) throw std::invalid_argument("score_run: empty series");
    RunReport rep;
    rep.config_echo = std::move(config_echo);
    double grad_int = 0.0;
    double havg_max = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const SeriesRow& r = series[i];
        rep.max_div_residual = std::max(rep.max_div_residual, r.div_residual);
        havg_max = std::max(havg_max, r.havg);
        if (i > 0)
            grad_int += 0.5 * (series[i].t - series[i - 1].t) *
                        (series[i].grad_h_sq + series[i - 1].grad_h_sq);
    }
    const double e0 = series.front().energy;
    const SeriesRow& last = series.back();
    rep.final_energy = last.energy;
    rep.final_omega_norm = last.omega_h0s;
    rep.final_osc_norm = last.uosc_h0s;
    const double scale = (e0 > 0.0) ? e0 : 1.0;
    rep.energy_defect = (last.energy + 2.0 * c_min_visc * grad_int - e0) / scale;
    rep.havg_drift = havg_max - series.front().havg;
    rep.divergence_ok = rep.max_div_residual <= div_tol;
    rep.energy_ok = rep.energy_defect <= energy_tol;
    rep.horizontal_average_ok = rep.havg_drift <= havg_tol;
    return rep;
}

inline std::string report_summary(const RunReport& r) {
    std::ostringstream os;
    if (!r.config_echo.empty()) os << "config:\n" << r.config_echo;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "max divergence residual : %.6e  [divergence-free: %s]\n",
                  r.max_div_residual, r.divergence_ok ? "pass" : "FAIL");
    os << buf;
    std::snprintf(buf, sizeof(buf), "energy defect           : %.6e  [energy-inequality: %s]\n",
                  r.energy_defect, r.energy_ok ? "pass" : "FAIL");
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "horizontal-average drift: %.6e  [horizontal-average-conservation: %s]\n",
                  r.havg_drift, r.horizontal_average_ok ? "pass" : "FAIL");
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "final: energy %.6e, |Omega|_{H^{0,s}} %.6e, |U_osc|_{H^{0,s}} %.6e\n",
                  r.final_energy, r.final_omega_norm, r.final_osc_norm);
    os << buf;
    return os.str();
}

}  // namespace gsp
