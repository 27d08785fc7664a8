#pragma once

/// Exact propagator of the penalized linear operator, the geostrophic /
/// oscillating decomposition, and potential vorticity.
///
/// On each mode the divergence-free subspace splits orthonormally as
/// span{e0} + span{e+} + span{e-}; the propagator L(tau) acts by
/// e^a -> exp(-i omega_a tau) e^a with omega_0 = 0, omega_+- = +-omega(n).
/// L(tau) is evaluated through this eigen-decomposition (no series), so it is
/// an exact isometry of every anisotropic norm up to rounding for any tau.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "gsp/field.hpp"
#include "gsp/mode_basis.hpp"
#include "gsp/norms.hpp"

namespace gsp {

/// Scalar spectral field on the same lattice (used for potential vorticity).
struct SpectralScalar {
    FreqLattice lattice;
    std::vector<Cplx> data;

    explicit SpectralScalar(const FreqLattice& lat)
        : lattice(lat), data(lat.size(), Cplx(0.0, 0.0)) {}
    Cplx& at(std::size_t idx) { return data[idx]; }
    const Cplx& at(std::size_t idx) const { return data[idx]; }
    Cplx get(const Int3& n) const { return data[lattice.index(n)]; }
    void set(const Int3& n, Cplx v) { data[lattice.index(n)] = v; }
    double l2_norm() const {
        double s = 0.0;
        for (const Cplx& z : data) s += std::norm(z);
        return std::sqrt(s);
    }
};

/// L(tau) applied in place via the eigen-decomposition.  Rejects inputs that
/// are not divergence-free (relative tolerance on the checked divergence).
inline void apply_propagator(const ModeBasis& basis, SpectralField4& f, double tau,
                             bool check_divergence = true) {
    if (check_divergence) {
        const double nrm = f.l2_norm();
        const double div = divergence_linf(basis.spec, f);
        if (div > 1e-8 * (1.0 + nrm))
            throw std::invalid_argument(
                "apply_propagator: input is not divergence-free (|div|_inf = " +
                std::to_string(div) + ")");
    }
    const std::size_t M = f.lattice.size();
    for (std::size_t idx = 0; idx < M; ++idx) {
        const ModeData& md = basis.modes[idx];
        if (md.tag == ModeData::Tag::Zero) continue;
        const C4 u = {f.at(idx, 0), f.at(idx, 1), f.at(idx, 2), f.at(idx, 3)};
        const Cplx c0 = dot4(u, md.e0);
        const Cplx cp = dot4(u, md.ep);
        const Cplx cm = dot4(u, md.em);
        const Cplx php = std::polar(1.0, -md.omega * tau);  // exp(-i omega tau)
        const Cplx phm = std::conj(php);
        for (int c = 0; c < 4; ++c)
            f.at(idx, c) = c0 * md.e0[c] + php * cp * md.ep[c] + phm * cm * md.em[c];
    }
}

inline SpectralField4 propagated(const ModeBasis& basis, const SpectralField4& f,
                                 double tau, bool check_divergence = true) {
    SpectralField4 g = f;
    apply_propagator(basis, g, tau, check_divergence);
    return g;
}

/// Projection onto the geostrophic (kernel) directions: f -> <f, e0> e0.
inline SpectralField4 qg_projection(const ModeBasis& basis, const SpectralField4& f) {
    SpectralField4 g(f.lattice);
    const std::size_t M = f.lattice.size();
    for (std::size_t idx = 0; idx < M; ++idx) {
        const ModeData& md = basis.modes[idx];
        if (md.tag == ModeData::Tag::Zero) continue;
        const C4 u = {f.at(idx, 0), f.at(idx, 1), f.at(idx, 2), f.at(idx, 3)};
        const Cplx c0 = dot4(u, md.e0);
        for (int c = 0; c < 4; ++c) g.at(idx, c) = c0 * md.e0[c];
    }
    return g;
}

/// Projection onto the oscillating pair: f -> <f, e+> e+  +  <f, e-> e-.
inline SpectralField4 osc_projection(const ModeBasis& basis, const SpectralField4& f) {
    SpectralField4 g(f.lattice);
    const std::size_t M = f.lattice.size();
    for (std::size_t idx = 0; idx < M; ++idx) {
        const ModeData& md = basis.modes[idx];
        if (md.tag == ModeData::Tag::Zero) continue;
        const C4 u = {f.at(idx, 0), f.at(idx, 1), f.at(idx, 2), f.at(idx, 3)};
        const Cplx cp = dot4(u, md.ep);
        const Cplx cm = dot4(u, md.em);
        for (int c = 0; c < 4; ++c) g.at(idx, c) = cp * md.ep[c] + cm * md.em[c];
    }
    return g;
}

/// Potential vorticity Omega = curl_h f_h - F d3 f4 in checked variables:
/// Omega_hat(n) = i(-x2 f1 + x1 f2 - F x3 f4) = i |xi|_F <f, e0>.
inline SpectralScalar potential_vorticity(const TorusSpec& spec, const SpectralField4& f) {
    SpectralScalar w(f.lattice);
    f.lattice.for_each([&](std::size_t idx, const Int3& n) {
        if (n[0] == 0 && n[1] == 0 && n[2] == 0) return;
        const double x1 = spec.checked1(n[0]), x2 = spec.checked2(n[1]),
                     x3 = spec.checked3(n[2]);
        w.at(idx) = Cplx(0.0, 1.0) * (-x2 * f.at(idx, 0) + x1 * f.at(idx, 1) -
                                      spec.F * x3 * f.at(idx, 3));
    });
    return w;
}

/// Geostrophic Biot-Savart law: V_QG = (-d2, d1, 0, -F d3)^T Delta_F^{-1} Omega,
/// i.e. mode-wise (i xi_2, -i xi_1, 0, i F xi_3) Omega_hat / |xi|_F^2.
inline SpectralField4 biot_savart_qg(const TorusSpec& spec, const SpectralScalar& w) {
    SpectralField4 f(w.lattice);
    w.lattice.for_each([&](std::size_t idx, const Int3& n) {
        if (n[0] == 0 && n[1] == 0 && n[2] == 0) return;
        const double x1 = spec.checked1(n[0]), x2 = spec.checked2(n[1]),
                     x3 = spec.checked3(n[2]);
        const Cplx m = Cplx(0.0, 1.0) * w.at(idx) / spec.kF2(n);
        f.at(idx, 0) = x2 * m;
        f.at(idx, 1) = -x1 * m;
        f.at(idx, 3) = spec.F * x3 * m;
    });
    return f;
}

}  // namespace gsp
