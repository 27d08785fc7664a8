#pragma once

/// Time integration.
///
/// Two integrators share a Lawson (integrating-factor) RK4 skeleton:
///
///   step_filtered_pe : the filtered system
///       dU/dt = -Q^eps(U,U,t/eps) + D^eps(t/eps) U
///     with the bare dissipation D integrated exactly by per-mode heat
///     factors e^{s d_c(n)} and the oscillatory phases of Q^eps evaluated at
///     the true stage times t + c_i dt.  When nu_h != nu_h' the bounded
///     remainder D^eps(theta) - D rides along in the nonlinear slot.
///
///   step_limit : the split limit system
///       dOmega/dt + (v_QG . grad_h) Omega + a_QG Omega = 0
///       dU_osc/dt + [Q(V_QG,U_osc)+Q(U_osc,V_QG)+Q(U_osc,U_osc)]|osc
///                 + a_osc U_osc = 0
///     with exact factors e^{-a_QG s} on the Omega channel and the 2x2
///     Hermitian matrix exponential e^{-B s} on each oscillating pair.
///
/// Both remove all dissipative and fast-rotational stiffness from the step
/// restriction; only the advective CFL remains, and it is checked each step
/// against the physical-space velocity maximum.  Divergence is re-projected
/// every stage; NaN and CFL violations raise SolverError.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gsp/field.hpp"
#include "gsp/limit_forms.hpp"
#include "gsp/mode_basis.hpp"
#include "gsp/norms.hpp"
#include "gsp/prng.hpp"
#include "gsp/propagator.hpp"
#include "gsp/transform.hpp"

namespace gsp {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    double dt = 1e-3;
    double T_final = 1.0;
    std::string scheme = "rk4-integrating-factor";
    double eps = 1.0;       // Rossby number; filtered/direct solvers only
    double n_cut = 0.0;     // Galerkin radius; 0 => lattice truncation only
    double cfl_safety = 0.9;
    bool linear_only = false;  // drop the quadratic form (linear regime checks)
};

struct EnergyLedger {
    double initial_energy_sq = 0.0;  // squared L2 norm at t = 0
    double grad_h_integral = 0.0;    // int_0^t |grad_h .|^2 ds, RK4 quadrature
};

/// State of one integration.  The filtered solver owns U alone; the limit
/// solver owns (omega, u_osc) and keeps U = V_QG(omega) + u_osc in sync at
/// step boundaries for diagnostics.
struct SolverState {
    double t = 0.0;
    SpectralField4 U;
    SpectralScalar omega;
    SpectralField4 u_osc;
    EnergyLedger ledger;        // total energy
    EnergyLedger omega_ledger;  // Omega channel (limit solver)
    explicit SolverState(const FreqLattice& lat) : U(lat), omega(lat), u_osc(lat) {}
};

// ---------------------------------------------------------------------------
// Scalar-field norms (Omega channel diagnostics).

inline double scalar_h_norm(const TorusSpec& spec, const SpectralScalar& w, double s,
                            double s_prime) {
    double acc = 0.0;
    w.lattice.for_each([&](std::size_t idx, const Int3& n) {
        const double x3 = spec.checked3(n[2]);
        acc += std::pow(1.0 + spec.kh2(n), s) * std::pow(1.0 + x3 * x3, s_prime) *
               std::norm(w.at(idx));
    });
    return std::sqrt(acc);
}

inline double scalar_grad_h_sq(const TorusSpec& spec, const SpectralScalar& w) {
    double acc = 0.0;
    w.lattice.for_each(
        [&](std::size_t idx, const Int3& n) { acc += spec.kh2(n) * std::norm(w.at(idx)); });
    return acc;
}

namespace detail {

/// Multiply each mode/component by the heat factor e^{s d_c(n)} where d_c is
/// the (non-positive) dissipation symbol.  Exact flow of dU/dt = D U.
inline void heat_scale(const TorusSpec& spec, SpectralField4& f, double s) {
    f.lattice.for_each([&](std::size_t idx, const Int3& n) {
        const std::array<double, 4> d = dissipation_symbol(spec, n);
        const double ev = std::exp(s * d[0]);
        const double et = std::exp(s * d[3]);
        f.at(idx, 0) *= ev;
        f.at(idx, 1) *= ev;
        f.at(idx, 2) *= ev;
        f.at(idx, 3) *= et;
    });
}

/// Apply the bare dissipation operator D (multiplication by the symbol).
inline SpectralField4 bare_dissipation(const TorusSpec& spec, const SpectralField4& f) {
    SpectralField4 g = f;
    g.lattice.for_each([&](std::size_t idx, const Int3& n) {
        const std::array<double, 4> d = dissipation_symbol(spec, n);
        for (int c = 0; c < 4; ++c) g.at(idx, c) *= d[c];
    });
    return g;
}

/// 2x2 matrix exponential e^{-s B} for the Hermitian PSD oscillating
/// dissipation block B = [[bpp, bpm], [conj(bpm), bmm]].
struct Osc2x2 {
    Cplx a11, a12, a21, a22;
};

inline Osc2x2 osc_heat_factor(const OscDissipationBlock& B, double s) {
    const double p = B.bpp.real(), r = B.bmm.real();
    const Cplx q = B.bpm;
    const double mean = 0.5 * (p + r);
    const double gap = 0.5 * std::sqrt((p - r) * (p - r) + 4.0 * std::norm(q));
    const double e = std::exp(-s * mean);
    // e^{-sB} = e^{-s mean} [cosh(s g) I - (sinh(s g)/g) (B - mean I)]
    double ch, shfac;
    const double x = s * gap;
    if (x < 1e-6) {  // series limit sinh(x)/g -> s as g -> 0
        ch = 1.0 + 0.5 * x * x;
        shfac = s * (1.0 + x * x / 6.0);
    } else {
        ch = std::cosh(x);
        shfac = std::sinh(x) / gap;
    }
    Osc2x2 M;
    M.a11 = e * (ch - shfac * (p - mean));
    M.a22 = e * (ch - shfac * (r - mean));
    M.a12 = e * (-shfac * q);
    M.a21 = e * (-shfac * std::conj(q));
    return M;
}

/// L-infinity of the physical-space velocity (first three components).
inline double max_velocity(const FreqLattice& lat, TransformEngine& engine,
                           const SpectralField4& U) {
    std::vector<double> buf(engine.gsize());
    double vmax = 0.0;
    for (int c = 0; c < 3; ++c) {
        engine.component_to_physical(lat, [&](std::size_t i) { return U.at(i, c); },
                                     buf.data());
        for (double v : buf) vmax = std::max(vmax, std::abs(v));
    }
    return vmax;
}

inline void check_cfl(const TorusSpec& spec, const FreqLattice& lat, TransformEngine& engine,
                      const SpectralField4& U, const SolverConfig& cfg) {
    const double vmax = max_velocity(lat, engine, U);
    if (vmax <= 0.0) return;
    const double amin = std::min(spec.a1, std::min(spec.a2, spec.a3));
    const double h = 2.0 * M_PI * amin / static_cast<double>(engine.grid());
    if (cfg.dt > cfg.cfl_safety * h / vmax)
        throw SolverError("CFL violation: dt = " + std::to_string(cfg.dt) +
                          " exceeds safety bound " +
                          std::to_string(cfg.cfl_safety * h / vmax) +
                          " (max |u| = " + std::to_string(vmax) + ")");
}

inline void check_finite(const SpectralField4& U, const char* where) {
    if (!std::isfinite(U.l2_norm())) throw SolverError(std::string("NaN detected in ") + where);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// State factories.

inline SolverState make_filtered_state(const ModeBasis& basis, const SpectralField4& U0) {
    SolverState st(basis.lattice);
    st.U = U0;
    const double e0 = U0.l2_norm();
    st.ledger.initial_energy_sq = e0 * e0;
    return st;
}

inline SolverState make_limit_state(const ModeBasis& basis, const SpectralField4& U0) {
    SolverState st(basis.lattice);
    st.omega = potential_vorticity(basis.spec, U0);
    st.u_osc = osc_projection(basis, U0);
    st.U = biot_savart_qg(basis.spec, st.omega) + st.u_osc;
    const double e0 = st.U.l2_norm();
    st.ledger.initial_energy_sq = e0 * e0;
    const double w0 = st.omega.l2_norm();
    st.omega_ledger.initial_energy_sq = w0 * w0;
    return st;
}

// ---------------------------------------------------------------------------
// Filtered primitive-equation step (Lawson RK4).

inline void step_filtered_pe(const ModeBasis& basis, TransformEngine& engine, SolverState& st,
                             const SolverConfig& cfg) {
    const TorusSpec& spec = basis.spec;
    const double h = cfg.dt, t0 = st.t;
    detail::check_cfl(spec, basis.lattice, engine, st.U, cfg);

    const bool need_deps_correction = (spec.nu_h != spec.nu_h_prime);
    auto rhs = [&](const SpectralField4& U, double t) -> SpectralField4 {
        const double theta = t / cfg.eps;
        SpectralField4 out(basis.lattice);
        if (!cfg.linear_only) {
            out = q_eps(basis, engine, U, U, theta);
            out *= -1.0;
        }
        if (need_deps_correction) {
            out += d_eps(basis, U, theta);
            out -= detail::bare_dissipation(spec, U);
        }
        if (cfg.n_cut > 0.0) out = galerkin_truncate(out, cfg.n_cut);
        return out;
    };
    auto E = [&](SpectralField4 f, double s) {
        detail::heat_scale(spec, f, s);
        return f;
    };

    const SpectralField4 k1 = rhs(st.U, t0);
    SpectralField4 U2 = st.U;
    U2.axpy(0.5 * h, k1);
    U2 = E(std::move(U2), 0.5 * h);
    const SpectralField4 k2 = rhs(U2, t0 + 0.5 * h);
    SpectralField4 U3 = E(st.U, 0.5 * h);
    U3.axpy(0.5 * h, k2);
    const SpectralField4 k3 = rhs(U3, t0 + 0.5 * h);
    SpectralField4 U4 = E(st.U, h);
    U4.axpy(h, E(k3, 0.5 * h));
    const SpectralField4 k4 = rhs(U4, t0 + h);

    SpectralField4 Unew = E(st.U, h);
    Unew.axpy(h / 6.0, E(k1, h));
    Unew.axpy(h / 3.0, E(k2, 0.5 * h));
    Unew.axpy(h / 3.0, E(k3, 0.5 * h));
    Unew.axpy(h / 6.0, k4);
    project_divergence_free(spec, Unew);
    detail::check_finite(Unew, "step_filtered_pe");

    st.ledger.grad_h_integral +=
        h / 6.0 * (grad_h_sq(spec, st.U) + 2.0 * grad_h_sq(spec, U2) +
                   2.0 * grad_h_sq(spec, U3) + grad_h_sq(spec, Unew));
    st.U = std::move(Unew);
    st.t = t0 + h;
}

// ---------------------------------------------------------------------------
// Split limit-system step (Lawson RK4 on (Omega, oscillating coefficients)).

namespace detail {

struct LimitVec {
    std::vector<Cplx> om, cp, cm;
    explicit LimitVec(std::size_t M) : om(M), cp(M), cm(M) {}
    void axpy(double a, const LimitVec& x) {
        for (std::size_t i = 0; i < om.size(); ++i) {
            om[i] += a * x.om[i];
            cp[i] += a * x.cp[i];
            cm[i] += a * x.cm[i];
        }
    }
};

/// Exact dissipative flow: e^{-a_QG s} on Omega, e^{-B s} on (cp, cm).
inline LimitVec limit_heat(const ModeBasis& basis, LimitVec y, double s) {
    const std::size_t M = basis.lattice.size();
    for (std::size_t i = 0; i < M; ++i) {
        const ModeData& md = basis.modes[i];
        if (md.tag == ModeData::Tag::Zero) continue;
        y.om[i] *= std::exp(-s * a_qg_symbol(basis.spec, basis.lattice.mode(i)));
        const Osc2x2 Mx = osc_heat_factor(a_osc_block(basis, i), s);
        const Cplx p = y.cp[i], m = y.cm[i];
        y.cp[i] = Mx.a11 * p + Mx.a12 * m;
        y.cm[i] = Mx.a21 * p + Mx.a22 * m;
    }
    return y;
}

inline SpectralField4 limit_lift(const ModeBasis& basis, const LimitVec& y) {
    SpectralScalar w(basis.lattice);
    for (std::size_t i = 0; i < y.om.size(); ++i) w.at(i) = y.om[i];
    EigenCoeffs e{std::vector<Cplx>(y.om.size()), y.cp, y.cm};
    SpectralField4 U = biot_savart_qg(basis.spec, w);
    U += recompose_eigen(basis, e);
    return U;
}

}  // namespace detail

inline void step_limit(const ModeBasis& basis, const LimitStencil& stencil,
                       TransformEngine& engine, SolverState& st, const SolverConfig& cfg) {
    const TorusSpec& spec = basis.spec;
    const std::size_t M = basis.lattice.size();
    const double h = cfg.dt;
    detail::check_cfl(spec, basis.lattice, engine, st.U, cfg);

    detail::LimitVec y0(M);
    for (std::size_t i = 0; i < M; ++i) y0.om[i] = st.omega.at(i);
    {
        const EigenCoeffs e = decompose_eigen(basis, st.u_osc);
        y0.cp = e.cp;
        y0.cm = e.cm;
    }

    auto rhs = [&](const detail::LimitVec& y, SpectralField4* lifted) -> detail::LimitVec {
        SpectralField4 U = detail::limit_lift(basis, y);
        detail::LimitVec k(M);
        if (!cfg.linear_only) {
            const LimitFormParts parts = q_limit_parts(basis, stencil, engine, U, U);
            for (std::size_t i = 0; i < M; ++i) {
                k.om[i] = -parts.omega_transport.at(i);
                k.cp[i] = -parts.osc_p[i];
                k.cm[i] = -parts.osc_m[i];
            }
            if (cfg.n_cut > 0.0) {
                const double r2 = cfg.n_cut * cfg.n_cut;
                basis.lattice.for_each([&](std::size_t i, const Int3& n) {
                    const double nn = double(n[0]) * n[0] + double(n[1]) * n[1] +
                                      double(n[2]) * n[2];
                    if (nn > r2) k.om[i] = k.cp[i] = k.cm[i] = Cplx(0.0, 0.0);
                });
            }
        }
        if (lifted) *lifted = std::move(U);
        return k;
    };

    const detail::LimitVec k1 = rhs(y0, nullptr);  // lift of y0 is st.U
    detail::LimitVec y2 = y0;
    y2.axpy(0.5 * h, k1);
    y2 = detail::limit_heat(basis, std::move(y2), 0.5 * h);
    SpectralField4 U2(basis.lattice);
    const detail::LimitVec k2 = rhs(y2, &U2);
    detail::LimitVec y3 = detail::limit_heat(basis, y0, 0.5 * h);
    y3.axpy(0.5 * h, k2);
    SpectralField4 U3(basis.lattice);
    const detail::LimitVec k3 = rhs(y3, &U3);
    detail::LimitVec y4 = detail::limit_heat(basis, y0, h);
    y4.axpy(h, detail::limit_heat(basis, k3, 0.5 * h));
    const detail::LimitVec k4 = rhs(y4, nullptr);

    detail::LimitVec ynew = detail::limit_heat(basis, y0, h);
    ynew.axpy(h / 6.0, detail::limit_heat(basis, k1, h));
    ynew.axpy(h / 3.0, detail::limit_heat(basis, k2, 0.5 * h));
    ynew.axpy(h / 3.0, detail::limit_heat(basis, k3, 0.5 * h));
    ynew.axpy(h / 6.0, k4);

    SpectralField4 Unew = detail::limit_lift(basis, ynew);
    detail::check_finite(Unew, "step_limit");

    // Ledgers: RK4 (Simpson) quadrature over the stage states.
    auto scalar_grad = [&](const detail::LimitVec& y) {
        double acc = 0.0;
        basis.lattice.for_each(
            [&](std::size_t i, const Int3& n) { acc += spec.kh2(n) * std::norm(y.om[i]); });
        return acc;
    };
    st.ledger.grad_h_integral +=
        h / 6.0 * (grad_h_sq(spec, st.U) + 2.0 * grad_h_sq(spec, U2) +
                   2.0 * grad_h_sq(spec, U3) + grad_h_sq(spec, Unew));
    st.omega_ledger.grad_h_integral +=
        h / 6.0 * (scalar_grad(y0) + 2.0 * scalar_grad(y2) + 2.0 * scalar_grad(y3) +
                   scalar_grad(ynew));

    for (std::size_t i = 0; i < M; ++i) st.omega.at(i) = ynew.om[i];
    {
        EigenCoeffs e{std::vector<Cplx>(M), std::move(ynew.cp), std::move(ynew.cm)};
        st.u_osc = recompose_eigen(basis, e);
    }
    st.U = std::move(Unew);
    st.t += h;
}

// ---------------------------------------------------------------------------
// Direct (unfiltered) primitive-equation reference step.  The stiff rotation
// is applied by the exact propagator between stages; used to confirm the
// conjugacy V(t) = L(t/eps) U(t) between the direct and filtered solvers.
// The combined linear factor L(s/eps) e^{s D} is the exact linear flow when
// nu_h = nu_h' (the two commute per mode in that case).

inline void step_pe_direct(const ModeBasis& basis, TransformEngine& engine, SolverState& st,
                           const SolverConfig& cfg) {
    const TorusSpec& spec = basis.spec;
    const double h = cfg.dt;
    detail::check_cfl(spec, basis.lattice, engine, st.U, cfg);

    auto rhs = [&](const SpectralField4& V) -> SpectralField4 {
        SpectralField4 out(basis.lattice);
        if (!cfg.linear_only) {
            out = transport_term(spec, engine, V, V);
            project_divergence_free(spec, out);
            out *= -1.0;
        }
        if (cfg.n_cut > 0.0) out = galerkin_truncate(out, cfg.n_cut);
        return out;
    };
    auto E = [&](SpectralField4 f, double s) {
        detail::heat_scale(spec, f, s);
        apply_propagator(basis, f, s / cfg.eps, false);
        return f;
    };

    const SpectralField4 k1 = rhs(st.U);
    SpectralField4 V2 = st.U;
    V2.axpy(0.5 * h, k1);
    V2 = E(std::move(V2), 0.5 * h);
    const SpectralField4 k2 = rhs(V2);
    SpectralField4 V3 = E(st.U, 0.5 * h);
    V3.axpy(0.5 * h, k2);
    const SpectralField4 k3 = rhs(V3);
    SpectralField4 V4 = E(st.U, h);
    V4.axpy(h, E(k3, 0.5 * h));
    const SpectralField4 k4 = rhs(V4);

    SpectralField4 Vnew = E(st.U, h);
    Vnew.axpy(h / 6.0, E(k1, h));
    Vnew.axpy(h / 3.0, E(k2, 0.5 * h));
    Vnew.axpy(h / 3.0, E(k3, 0.5 * h));
    Vnew.axpy(h / 6.0, k4);
    project_divergence_free(spec, Vnew);
    detail::check_finite(Vnew, "step_pe_direct");

    st.ledger.grad_h_integral +=
        h / 6.0 * (grad_h_sq(spec, st.U) + 2.0 * grad_h_sq(spec, V2) +
                   2.0 * grad_h_sq(spec, V3) + grad_h_sq(spec, Vnew));
    st.U = std::move(Vnew);
    st.t += h;
}

// ---------------------------------------------------------------------------
// Initial data factory.

enum class InitKind { RandomDivFree, SingleEigenmode, QgOnly, OscOnly };

inline InitKind parse_init_kind(const std::string& s) {
    if (s == "random-div-free") return InitKind::RandomDivFree;
    if (s == "single-eigenmode") return InitKind::SingleEigenmode;
    if (s == "qg-only") return InitKind::QgOnly;
    if (s == "osc-only") return InitKind::OscOnly;
    throw std::invalid_argument("unknown initial-data kind: " + s);
}

/// Divergence-free, zero-global-average, zero-horizontal-average data with
/// vertical decay (1+n3_chk^2)^{-s/2-1/2}; bit-reproducible from the seed.
inline SpectralField4 make_initial_data(const ModeBasis& basis, InitKind kind,
                                        std::uint64_t seed, double amplitude, double s,
                                        double h_decay = 1.0) {
    const TorusSpec& spec = basis.spec;
    const FreqLattice& lat = basis.lattice;
    switch (kind) {
        case InitKind::RandomDivFree:
            return random_divfree_field(spec, lat, seed, s, amplitude, h_decay);
        case InitKind::SingleEigenmode: {
            const Int3 star{1, 1, 1};
            SpectralField4 f = make_field(lat, [&](const Int3& n) {
                C4 v{};
                if (n == star)
                    v = build_mode_data(spec, n).ep;
                else if (n[0] == -star[0] && n[1] == -star[1] && n[2] == -star[2])
                    v = build_mode_data(spec, n).em;
                for (int c = 0; c < 4; ++c) v[c] *= amplitude;
                return v;
            });
            return f;
        }
        case InitKind::QgOnly:
            return qg_projection(basis,
                                 random_divfree_field(spec, lat, seed, s, amplitude, h_decay));
        case InitKind::OscOnly:
            return osc_projection(basis,
                                  random_divfree_field(spec, lat, seed, s, amplitude, h_decay));
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Per-step diagnostics row (CSV schema of the run drivers).

struct SeriesRow {
    double t, energy, grad_h_sq, omega_h0s, uosc_h0s, havg, div_residual;
};

inline SeriesRow make_series_row(const ModeBasis& basis, const SolverState& st,
                                 double s_report) {
    const TorusSpec& spec = basis.spec;
    SeriesRow r;
    r.t = st.t;
    const double e = st.U.l2_norm();
    r.energy = e * e;
    r.grad_h_sq = grad_h_sq(spec, st.U);
    r.omega_h0s = scalar_h_norm(spec, potential_vorticity(spec, st.U), 0.0, s_report);
    r.uosc_h0s = anisotropic_norm(spec, osc_projection(basis, st.U), 0.0, s_report);
    r.havg = profile_norm(spec, horizontal_average(st.U), 0.0);
    r.div_residual = divergence_linf(spec, st.U);
    return r;
}

// ---------------------------------------------------------------------------
// Convergence experiment: integrate (FS_eps) and the limit system in lockstep
// from the same data and record the H^{0,sigma} sup-gap and the L2-in-time
// horizontal-gradient gap per epsilon.  The comparison is made on the
// filtered side; the propagator is a mode-wise unitary on these norms, so
// |V^eps - L(t/eps)U| = |U^eps - U| exactly.

struct ConvergenceRow {
    double eps;
    double sup_gap;   // sup_t |U^eps(t) - U(t)|_{H^{0,sigma}}
    double grad_gap;  // (int_0^T |grad_h (U^eps - U)|^2 dt)^{1/2}
};

inline std::vector<ConvergenceRow> run_convergence_experiment(
    const ModeBasis& basis, const LimitStencil& stencil, const SpectralField4& V0,
    const std::vector<double>& eps_list, double sigma, const SolverConfig& cfg, int grid,
    int jobs = 1) {
    const TorusSpec& spec = basis.spec;
    if (spec.F == 1.0)
        throw std::invalid_argument("run_convergence_experiment: F = 1 is excluded");
    if (divergence_linf(spec, V0) > 1e-10)
        throw std::invalid_argument("run_convergence_experiment: V0 is not divergence-free");
    if (profile_norm(spec, horizontal_average(V0), 0.0) > 1e-12)
        throw std::invalid_argument(
            "run_convergence_experiment: V0 must have zero horizontal average");

    const std::size_t R = eps_list.size();
    std::vector<ConvergenceRow> rows(R);
    const long nsteps = std::lround(cfg.T_final / cfg.dt);

    auto run_one = [&](double eps, TransformEngine& engine) -> ConvergenceRow {
        SolverConfig c = cfg;
        c.eps = eps;
        SolverState fs = make_filtered_state(basis, V0);
        SolverState ls = make_limit_state(basis, V0);
        double sup = 0.0, grad_acc = 0.0;
        for (long k = 0; k < nsteps; ++k) {
            step_filtered_pe(basis, engine, fs, c);
            step_limit(basis, stencil, engine, ls, c);
            const SpectralField4 diff = fs.U - ls.U;
            sup = std::max(sup, anisotropic_norm(spec, diff, 0.0, sigma));
            grad_acc += c.dt * grad_h_sq(spec, diff);
        }
        return {eps, sup, std::sqrt(grad_acc)};
    };

    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(R)));
    if (workers == 1) {
        TransformEngine engine(basis.lattice.N, grid);
        for (std::size_t i = 0; i < R; ++i) rows[i] = run_one(eps_list[i], engine);
        return rows;
    }
    // FFTW plan creation is not thread-safe: build every engine up front.
    std::vector<std::unique_ptr<TransformEngine>> engines;
    engines.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        engines.push_back(std::make_unique<TransformEngine>(basis.lattice.N, grid));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = next.fetch_add(1); i < R; i = next.fetch_add(1))
                rows[i] = run_one(eps_list[i], *engines[w]);
        });
    for (std::thread& th : pool) th.join();
    return rows;
}

}  // namespace gsp
