#pragma once

/// Filtered bilinear/dissipative forms and their resonant limits.
///
/// Conventions (theta = t/eps is the fast phase):
///   q_eps(U,V,theta) = L(-theta) P [ (L(theta)U . grad) L(theta)V ]
///   d_eps(U,theta)   = L(-theta) D L(theta) U          (negative semidefinite)
///   q_limit(U,V)     = theta-average of q_eps restricted to resonant phases:
///       - QG output channel: the lifted horizontal transport
///         (-d2, d1, 0, -F d3)^T Delta_F^{-1} (v_QG^h(U) . grad_h) Omega(V),
///         evaluated either pseudo-spectrally or by direct convolution with the
///         scalar weight w(k,m) = (k1_chk m2_chk - k2_chk m1_chk)/|k_chk|_F^2
///         acting on Omega(k) Omega(m);
///       - oscillating output channels e^{+-}: stencil convolution over 2-wave
///         triples (one QG leg, omega equality between the oscillating legs)
///         and 3-wave triples (the resonant set), with per-entry weight
///         i (e^a(k) . m_chk) (e^b(m) | e^c(n));
///   d_limit(U)       = positive dissipation operator: scalar symbol a_QG on
///       the Omega channel and the dense 2x2 compression of -D onto
///       span{e^+, e^-} on the oscillating pair.
///
/// Sign conventions follow the governing systems
///   dU/dt = -q_eps(U,U,t/eps) + d_eps(U,t/eps)        (filtered system)
///   dU/dt = -q_limit(U,U) - d_limit(U)                (limit system)
/// so d_eps acts with negative symbols while d_limit is the positive form
/// satisfying (d_limit(U)|U) >= min(nu_h, nu_h') |grad_h U|^2.

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsp/field.hpp"
#include "gsp/mode_basis.hpp"
#include "gsp/propagator.hpp"
#include "gsp/resonance.hpp"
#include "gsp/transform.hpp"

namespace gsp {

// ---------------------------------------------------------------------------
// Eigen-coefficient bookkeeping.

struct EigenCoeffs {
    std::vector<Cplx> c0, cp, cm;  // indexed by lattice index
};

inline EigenCoeffs decompose_eigen(const ModeBasis& basis, const SpectralField4& f) {
    const std::size_t M = f.lattice.size();
    EigenCoeffs e{std::vector<Cplx>(M), std::vector<Cplx>(M), std::vector<Cplx>(M)};
    for (std::size_t idx = 0; idx < M; ++idx) {
        const ModeData& md = basis.modes[idx];
        if (md.tag == ModeData::Tag::Zero) continue;
        const C4 u = {f.at(idx, 0), f.at(idx, 1), f.at(idx, 2), f.at(idx, 3)};
        e.c0[idx] = dot4(u, md.e0);
        e.cp[idx] = dot4(u, md.ep);
        e.cm[idx] = dot4(u, md.em);
    }
    return e;
}

inline SpectralField4 recompose_eigen(const ModeBasis& basis, const EigenCoeffs& e) {
    SpectralField4 f(basis.lattice);
    const std::size_t M = basis.lattice.size();
    for (std::size_t idx = 0; idx < M; ++idx) {
        const ModeData& md = basis.modes[idx];
        if (md.tag == ModeData::Tag::Zero) continue;
        for (int c = 0; c < 4; ++c)
            f.at(idx, c) =
                e.c0[idx] * md.e0[c] + e.cp[idx] * md.ep[c] + e.cm[idx] * md.em[c];
    }
    return f;
}

namespace detail {

inline const C4& eigvec(const ModeData& md, int a) {
    return a == 0 ? md.e0 : (a > 0 ? md.ep : md.em);
}

/// Velocity part of e dotted with the checked wavenumber of m.
inline Cplx advect_weight(const TorusSpec& spec, const C4& e, const Int3& m) {
    return e[0] * spec.checked1(m[0]) + e[1] * spec.checked2(m[1]) +
           e[2] * spec.checked3(m[2]);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pseudo-spectral transport and the filtered forms.

/// (U . grad) V evaluated pseudo-spectrally with dealiasing; all four
/// components of V are advected by the velocity part of U.
inline SpectralField4 transport_term(const TorusSpec& spec, TransformEngine& engine,
                                     const SpectralField4& U, const SpectralField4& V) {
    const FreqLattice& lat = U.lattice;
    if (engine.grid() < 3 * lat.N + 1)
        throw std::invalid_argument(
            "transport_term: grid provides insufficient dealiasing margin (need >= 3N+1)");
    const std::size_t g = engine.gsize();

    std::vector<double> vel(3 * g);
    for (int j = 0; j < 3; ++j)
        engine.component_to_physical(
            lat, [&](std::size_t idx) { return U.at(idx, j); }, vel.data() + j * g);

    SpectralField4 out(lat);
    std::vector<double> deriv(g), acc(g);
    for (int c = 0; c < 4; ++c) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int j = 0; j < 3; ++j) {
            engine.component_to_physical(
                lat,
                [&](std::size_t idx) {
                    const Int3 n = lat.mode(idx);
                    const double chk = j == 0   ? spec.checked1(n[0])
                                      : j == 1 ? spec.checked2(n[1])
                                               : spec.checked3(n[2]);
                    return Cplx(0.0, chk) * V.at(idx, c);
                },
                deriv.data());
            const double* vj = vel.data() + j * g;
            for (std::size_t i = 0; i < g; ++i) acc[i] += vj[i] * deriv[i];
        }
        engine.component_to_spectral(lat, acc.data(),
                                     [&](std::size_t idx, Cplx z) { out.at(idx, c) = z; });
    }
    out.set({0, 0, 0}, C4{});  // zero average is structural; pin roundoff
    return out;
}

/// Filtered bilinear form Q^eps at fast phase theta.
inline SpectralField4 q_eps(const ModeBasis& basis, TransformEngine& engine,
                            const SpectralField4& U, const SpectralField4& V,
                            double theta) {
    const SpectralField4 LU = propagated(basis, U, theta);
    const SpectralField4 LV = propagated(basis, V, theta);
    SpectralField4 T = transport_term(basis.spec, engine, LU, LV);
    project_divergence_free(basis.spec, T);
    return propagated(basis, T, -theta, /*check_divergence=*/false);
}

/// Filtered dissipation D^eps at fast phase theta (negative semidefinite).
inline SpectralField4 d_eps(const ModeBasis& basis, const SpectralField4& U,
                            double theta) {
    SpectralField4 out(U.lattice);
    const std::size_t M = U.lattice.size();
    for (std::size_t idx = 0; idx < M; ++idx) {
        const ModeData& md = basis.modes[idx];
        if (md.tag == ModeData::Tag::Zero) continue;
        const Int3 n = U.lattice.mode(idx);
        const std::array<double, 4> d = dissipation_symbol(basis.spec, n);
        const C4 u = {U.at(idx, 0), U.at(idx, 1), U.at(idx, 2), U.at(idx, 3)};
        const Cplx c0 = dot4(u, md.e0);
        const Cplx cp = dot4(u, md.ep);
        const Cplx cm = dot4(u, md.em);
        const Cplx php = std::polar(1.0, -md.omega * theta);  // L(theta) phase on e^+
        const Cplx phm = std::conj(php);
        C4 w{};
        for (int c = 0; c < 4; ++c)
            w[c] = c0 * md.e0[c] + php * cp * md.ep[c] + phm * cm * md.em[c];
        for (int c = 0; c < 4; ++c) w[c] *= d[c];
        Cplx d0 = dot4(w, md.e0);
        Cplx dp = dot4(w, md.ep) * std::conj(php);  // L(-theta) counter-phase
        Cplx dm = dot4(w, md.em) * std::conj(phm);
        for (int c = 0; c < 4; ++c)
            out.at(idx, c) = d0 * md.e0[c] + dp * md.ep[c] + dm * md.em[c];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Limit stencil.

struct OscEntry {
    std::uint32_t k_idx = 0, m_idx = 0;  // lattice indices of the two legs
    std::int8_t a = 0, b = 0;            // leg channels in {-1, 0, +1}
    Cplx weight;                         // i (e^a(k) . m_chk) (e^b(m) | e^c(n))
};

struct LimitStencil {
    TorusSpec spec;
    int N = 0;
    /// osc[out_idx][slot]: entries feeding output channel e^+ (slot 0) and
    /// e^- (slot 1) at the given output mode.
    std::vector<std::array<std::vector<OscEntry>, 2>> osc;
    std::size_t two_wave_count = 0, three_wave_count = 0;
    ResonantSet::Certification certification = ResonantSet::Certification::FloatTolerance;
};

/// Build the oscillating-channel stencil: 3-wave entries from the resonant
/// set, 2-wave entries (one QG leg) from the omega-equality classes.  When
/// the resonant set is exactly certified and the torus carries rational
/// moduli, 2-wave equalities are confirmed in exact arithmetic.
inline LimitStencil build_limit_stencil(const ModeBasis& basis, const ResonantSet& res) {
    const FreqLattice& lat = basis.lattice;
    if (res.N != lat.N)
        throw std::invalid_argument("build_limit_stencil: resonant set / lattice mismatch");
    const TorusSpec& spec = basis.spec;

    LimitStencil st;
    st.spec = spec;
    st.N = lat.N;
    st.osc.resize(lat.size());
    st.certification = res.certification;

    const double tol = res.tol > 0.0 ? res.tol : 1e-9;
    const bool exact = res.certification == ResonantSet::Certification::ExactRational &&
                       spec.has_rational_moduli();

    std::vector<double> omega(lat.size(), 0.0);
    lat.for_each([&](std::size_t idx, const Int3& n) {
        if (n != Int3{0, 0, 0}) omega[idx] = omega_value(spec, n);
    });
    std::vector<Rational> osq;
    if (exact) {
        osq.assign(lat.size(), Rational(0));
        lat.for_each([&](std::size_t idx, const Int3& n) {
            if (n != Int3{0, 0, 0}) osq[idx] = omega_sq_rational(spec, n);
        });
    }
    const auto omega_equal = [&](std::size_t i, std::size_t j) {
        if (std::abs(omega[i] - omega[j]) > tol) return false;
        return exact ? osq[i] == osq[j] : true;
    };

    // 3-wave entries (both legs oscillating).
    for (const ResonantTriple& t : res.triples) {
        const std::size_t ki = lat.index(t.k), mi = lat.index(t.m), ni = lat.index(t.n);
        const ModeData& mk = basis.modes[ki];
        const ModeData& mm = basis.modes[mi];
        const ModeData& mn = basis.modes[ni];
        OscEntry e;
        e.k_idx = static_cast<std::uint32_t>(ki);
        e.m_idx = static_cast<std::uint32_t>(mi);
        e.a = static_cast<std::int8_t>(t.sa);
        e.b = static_cast<std::int8_t>(t.sb);
        e.weight = Cplx(0.0, 1.0) *
                   detail::advect_weight(spec, detail::eigvec(mk, t.sa), t.m) *
                   dot4(detail::eigvec(mm, t.sb), detail::eigvec(mn, t.sc));
        if (e.weight != Cplx(0.0, 0.0)) {
            st.osc[ni][t.sc > 0 ? 0 : 1].push_back(e);
            ++st.three_wave_count;
        }
    }

    // 2-wave entries (one QG leg; omega equality between the oscillating legs).
    lat.for_each([&](std::size_t ni, const Int3& n) {
        if (n == Int3{0, 0, 0}) return;
        const ModeData& mn = basis.modes[ni];
        lat.for_each([&](std::size_t ki, const Int3& k) {
            if (k == Int3{0, 0, 0}) return;
            const Int3 m = {n[0] - k[0], n[1] - k[1], n[2] - k[2]};
            if (!lat.contains(m) || m == Int3{0, 0, 0}) return;
            const std::size_t mi = lat.index(m);
            const ModeData& mk = basis.modes[ki];
            const ModeData& mm = basis.modes[mi];

            // QG leg at k advecting an oscillating leg at m: omega(m) = omega(n).
            // A fiber k contributes nothing (its QG direction has no velocity).
            if (!(k[0] == 0 && k[1] == 0) && omega_equal(mi, ni)) {
                const Cplx adv = Cplx(0.0, 1.0) * detail::advect_weight(spec, mk.e0, m);
                for (int slot = 0; slot < 2; ++slot) {
                    const int c = slot == 0 ? 1 : -1;
                    OscEntry e;
                    e.k_idx = static_cast<std::uint32_t>(ki);
                    e.m_idx = static_cast<std::uint32_t>(mi);
                    e.a = 0;
                    e.b = static_cast<std::int8_t>(c);
                    e.weight =
                        adv * dot4(detail::eigvec(mm, c), detail::eigvec(mn, c));
                    if (e.weight != Cplx(0.0, 0.0)) {
                        st.osc[ni][slot].push_back(e);
                        ++st.two_wave_count;
                    }
                }
            }

            // Oscillating leg at k advecting the QG leg at m: omega(k) = omega(n).
            if (omega_equal(ki, ni)) {
                for (int slot = 0; slot < 2; ++slot) {
                    const int c = slot == 0 ? 1 : -1;
                    OscEntry e;
                    e.k_idx = static_cast<std::uint32_t>(ki);
                    e.m_idx = static_cast<std::uint32_t>(mi);
                    e.a = static_cast<std::int8_t>(c);
                    e.b = 0;
                    e.weight = Cplx(0.0, 1.0) *
                               detail::advect_weight(spec, detail::eigvec(mk, c), m) *
                               dot4(mm.e0, detail::eigvec(mn, c));
                    if (e.weight != Cplx(0.0, 0.0)) {
                        st.osc[ni][slot].push_back(e);
                        ++st.two_wave_count;
                    }
                }
            }
        });
    });
    return st;
}

/// Evaluation path for the QG channel of q_limit.
enum class QgPath { PseudoSpectral, DirectConvolution };

/// Split evaluation of the limit form: the QG output channel as the scalar
/// transport (v_QG^h(U) . grad_h) Omega(V) -- the Omega-equation right-hand
/// side before the Biot-Savart lift -- plus the oscillating output
/// coefficients on the e^{+-} branches.  The split solver consumes the parts
/// directly; q_limit recombines them into a 4-component field.
struct LimitFormParts {
    SpectralScalar omega_transport;
    std::vector<Cplx> osc_p, osc_m;
};

inline LimitFormParts q_limit_parts(const ModeBasis& basis, const LimitStencil& stencil,
                                    TransformEngine& engine, const SpectralField4& U,
                                    const SpectralField4& V,
                                    QgPath path = QgPath::PseudoSpectral) {
    const FreqLattice& lat = basis.lattice;
    const TorusSpec& spec = basis.spec;
    if (stencil.N != lat.N || stencil.spec.a1 != spec.a1 || stencil.spec.a2 != spec.a2 ||
        stencil.spec.a3 != spec.a3 || stencil.spec.F != spec.F)
        throw std::invalid_argument("q_limit: stencil/lattice/torus mismatch");

    const SpectralScalar OmU = potential_vorticity(spec, U);
    const SpectralScalar OmV = potential_vorticity(spec, V);
    SpectralScalar transport(lat);  // (v_QG^h(U) . grad_h) Omega(V)

    if (path == QgPath::PseudoSpectral) {
        if (engine.grid() < 3 * lat.N + 1)
            throw std::invalid_argument(
                "q_limit: grid provides insufficient dealiasing margin (need >= 3N+1)");
        const SpectralField4 vqg = biot_savart_qg(spec, OmU);
        const std::size_t g = engine.gsize();
        std::vector<double> v1(g), v2(g), d1(g), d2(g);
        engine.component_to_physical(lat, [&](std::size_t i) { return vqg.at(i, 0); },
                                     v1.data());
        engine.component_to_physical(lat, [&](std::size_t i) { return vqg.at(i, 1); },
                                     v2.data());
        engine.component_to_physical(
            lat,
            [&](std::size_t i) {
                const Int3 n = lat.mode(i);
                return Cplx(0.0, spec.checked1(n[0])) * OmV.at(i);
            },
            d1.data());
        engine.component_to_physical(
            lat,
            [&](std::size_t i) {
                const Int3 n = lat.mode(i);
                return Cplx(0.0, spec.checked2(n[1])) * OmV.at(i);
            },
            d2.data());
        std::vector<double> acc(g);
        for (std::size_t i = 0; i < g; ++i) acc[i] = v1[i] * d1[i] + v2[i] * d2[i];
        engine.component_to_spectral(lat, acc.data(),
                                     [&](std::size_t i, Cplx z) { transport.at(i) = z; });
        transport.set({0, 0, 0}, Cplx(0.0, 0.0));
    } else {
        // Direct convolution with the scalar weight
        // w(k,m) = (k1 m2 - k2 m1)_chk / |k_chk|_F^2 on Omega(k) Omega(m).
        lat.for_each([&](std::size_t ki, const Int3& k) {
            if (k[0] == 0 && k[1] == 0) return;  // fiber/zero k: no QG velocity
            const Cplx wk = OmU.at(ki);
            if (wk == Cplx(0.0, 0.0)) return;
            const double k1 = spec.checked1(k[0]), k2 = spec.checked2(k[1]);
            const double kf2 = spec.kF2(k);
            lat.for_each([&](std::size_t mi, const Int3& m) {
                if (m == Int3{0, 0, 0}) return;
                const Int3 n = {k[0] + m[0], k[1] + m[1], k[2] + m[2]};
                if (!lat.contains(n) || n == Int3{0, 0, 0}) return;
                const double w =
                    (k1 * spec.checked2(m[1]) - k2 * spec.checked1(m[0])) / kf2;
                transport.at(lat.index(n)) += w * wk * OmV.at(mi);
            });
        });
    }

    // Oscillating channels via the stencil.
    const EigenCoeffs cu = decompose_eigen(basis, U);
    const EigenCoeffs cv = decompose_eigen(basis, V);
    const auto pick = [](const EigenCoeffs& c, std::uint32_t idx, int a) {
        return a == 0 ? c.c0[idx] : (a > 0 ? c.cp[idx] : c.cm[idx]);
    };
    const std::size_t M = lat.size();
    LimitFormParts parts{std::move(transport), std::vector<Cplx>(M), std::vector<Cplx>(M)};
    for (std::size_t ni = 0; ni < M; ++ni) {
        if (basis.modes[ni].tag == ModeData::Tag::Zero) continue;
        Cplx accp(0.0, 0.0), accm(0.0, 0.0);
        for (const OscEntry& e : stencil.osc[ni][0])
            accp += e.weight * pick(cu, e.k_idx, e.a) * pick(cv, e.m_idx, e.b);
        for (const OscEntry& e : stencil.osc[ni][1])
            accm += e.weight * pick(cu, e.k_idx, e.a) * pick(cv, e.m_idx, e.b);
        parts.osc_p[ni] = accp;
        parts.osc_m[ni] = accm;
    }
    return parts;
}

/// Resonant limit bilinear form.  The QG output channel is the lifted
/// horizontal transport of Omega(V) by v_QG(U); the oscillating channels are
/// the stencil convolution.
inline SpectralField4 q_limit(const ModeBasis& basis, const LimitStencil& stencil,
                              TransformEngine& engine, const SpectralField4& U,
                              const SpectralField4& V,
                              QgPath path = QgPath::PseudoSpectral) {
    const LimitFormParts parts = q_limit_parts(basis, stencil, engine, U, V, path);
    SpectralField4 out = biot_savart_qg(basis.spec, parts.omega_transport);
    for (std::size_t ni = 0; ni < basis.lattice.size(); ++ni) {
        const ModeData& mn = basis.modes[ni];
        const Cplx accp = parts.osc_p[ni], accm = parts.osc_m[ni];
        if (accp != Cplx(0.0, 0.0) || accm != Cplx(0.0, 0.0))
            for (int c = 0; c < 4; ++c)
                out.at(ni, c) += accp * mn.ep[c] + accm * mn.em[c];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Limit dissipation.

/// Positive QG dissipation symbol
/// a_QG(n) = (nu_h |n_h|^2 + nu_h' F^2 n3^2)/(|n_h|^2 + F^2 n3^2) * |n_h|^2
/// in checked variables; equals the e^0-compression of -D(n).
inline double a_qg_symbol(const TorusSpec& spec, const Int3& n) {
    const double kh2 = spec.kh2(n);
    if (kh2 == 0.0) return 0.0;
    const double x3 = spec.checked3(n[2]);
    const double f2z2 = spec.F * spec.F * x3 * x3;
    return (spec.nu_h * kh2 + spec.nu_h_prime * f2z2) / (kh2 + f2z2) * kh2;
}

/// Dense positive-semidefinite 2x2 block B_ab = -(D e^b | e^a) on the
/// oscillating pair (a, b ranging over {+, -}).
struct OscDissipationBlock {
    Cplx bpp, bpm, bmp, bmm;
};

inline OscDissipationBlock a_osc_block(const ModeBasis& basis, std::size_t idx) {
    const ModeData& md = basis.modes[idx];
    const Int3 n = basis.lattice.mode(idx);
    const std::array<double, 4> d = dissipation_symbol(basis.spec, n);
    const auto dmul = [&](const C4& v) {
        C4 w;
        for (int c = 0; c < 4; ++c) w[c] = d[c] * v[c];
        return w;
    };
    const C4 dep = dmul(md.ep), dem = dmul(md.em);
    OscDissipationBlock b;
    b.bpp = -dot4(dep, md.ep);
    b.bpm = -dot4(dem, md.ep);
    b.bmp = -dot4(dep, md.em);
    b.bmm = -dot4(dem, md.em);
    return b;
}

/// Positive limit dissipation: a_QG on the QG channel, the dense block on the
/// oscillating pair.  (d_limit(U)|U) >= min(nu_h, nu_h') |grad_h U|^2.
inline SpectralField4 d_limit(const ModeBasis& basis, const SpectralField4& U) {
    SpectralField4 out(U.lattice);
    const std::size_t M = U.lattice.size();
    for (std::size_t idx = 0; idx < M; ++idx) {
        const ModeData& md = basis.modes[idx];
        if (md.tag == ModeData::Tag::Zero) continue;
        const Int3 n = U.lattice.mode(idx);
        const C4 u = {U.at(idx, 0), U.at(idx, 1), U.at(idx, 2), U.at(idx, 3)};
        const Cplx c0 = dot4(u, md.e0);
        const Cplx cp = dot4(u, md.ep);
        const Cplx cm = dot4(u, md.em);
        const double aqg = a_qg_symbol(basis.spec, n);
        const OscDissipationBlock b = a_osc_block(basis, idx);
        const Cplx o0 = aqg * c0;
        const Cplx op = b.bpp * cp + b.bpm * cm;
        const Cplx om = b.bmp * cp + b.bmm * cm;
        for (int c = 0; c < 4; ++c)
            out.at(idx, c) = o0 * md.e0[c] + op * md.ep[c] + om * md.em[c];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Galerkin truncation.

/// Zero all modes with Euclidean |n| > n_cut (integer lattice norm).
inline SpectralField4 galerkin_truncate(const SpectralField4& U, double n_cut) {
    SpectralField4 out(U.lattice);
    const double cut2 = n_cut * n_cut;
    U.lattice.for_each([&](std::size_t idx, const Int3& n) {
        const double n2 = static_cast<double>(n[0]) * n[0] +
                          static_cast<double>(n[1]) * n[1] +
                          static_cast<double>(n[2]) * n[2];
        if (n2 > cut2) return;
        for (int c = 0; c < 4; ++c) out.at(idx, c) = U.at(idx, c);
    });
    out.set({0, 0, 0}, C4{});
    return out;
}

}  // namespace gsp
