#pragma once

/// Per-mode linear algebra of the penalized operator.
///
/// With checked wavenumber xi = n_check and the skew matrix
///   A V = (-v2, v1, T/F, -v3/F),
/// the Leray projector P_n acts as identity minus the xi-ray on the velocity
/// components (temperature untouched).  P_n A restricted to the
/// divergence-free subspace is skew, with spectrum {0, +i*omega, -i*omega},
///   omega(n) = (1/F) * sqrt(|xi_h|^2 + F^2 xi_3^2) / |xi|,
/// kernel direction
///   e0 = (-xi_2, xi_1, 0, -F xi_3) / |xi|_F,   |xi|_F^2 = xi_1^2+xi_2^2+F^2 xi_3^2,
/// and oscillating pair e^+/- (conjugates of each other).  The closed forms
/// below are normalized numerically; each satisfies P_n A e = i omega e to
/// rounding.  Degenerate modes:
///   xi_h = 0:  e^+- = (+-i, 1, 0, 0)/sqrt(2),            omega = 1;
///   xi_3 = 0:  e^+  = (0, 0, -i, 1)/sqrt(2),  e^- = conj, omega = 1/F
/// (the sign pairing at xi_3 = 0 is fixed by the eigen-equation itself:
/// (0,0,-i,1) carries eigenvalue +i/F).

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "gsp/field.hpp"

namespace gsp {

/// Diagonal symbol of the dissipation matrix D(n):
/// (-nu_h |xi_h|^2) on the three velocity components, (-nu_h' |xi_h|^2) on T.
/// Vertical viscosities are zero.
inline std::array<double, 4> dissipation_symbol(const TorusSpec& spec, const Int3& n) {
    const double kh2 = spec.kh2(n);
    return {-spec.nu_h * kh2, -spec.nu_h * kh2, -spec.nu_h * kh2,
            -spec.nu_h_prime * kh2};
}

/// Leray projector as a real 4x4 matrix: I - xi xi^T/|xi|^2 on velocity,
/// identity on temperature.
inline Eigen::Matrix4d leray_matrix(const TorusSpec& spec, const Int3& n) {
    Eigen::Matrix4d P = Eigen::Matrix4d::Identity();
    const double x[3] = {spec.checked1(n[0]), spec.checked2(n[1]), spec.checked3(n[2])};
    const double k2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if (k2 == 0.0) return P;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) P(i, j) -= x[i] * x[j] / k2;
    return P;
}

/// The skew matrix A of the penalized operator.
inline Eigen::Matrix4d rotation_matrix(double F) {
    Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
    A(0, 1) = -1.0;
    A(1, 0) = 1.0;
    A(2, 3) = 1.0 / F;
    A(3, 2) = -1.0 / F;
    return A;
}

/// P_n A as a real 4x4 matrix (computed as the product, never from a display).
inline Eigen::Matrix4d pa_matrix(const TorusSpec& spec, const Int3& n) {
    return leray_matrix(spec, n) * rotation_matrix(spec.F);
}

/// Multiplier of Delta_F^{-1}: -1 / |xi|_F^2 (zero mode excluded by callers).
inline double deltaF_inv_multiplier(const TorusSpec& spec, const Int3& n) {
    return -1.0 / spec.kF2(n);
}

struct ModeData {
    double omega = 0.0;  ///< omega_plus; omega_minus = -omega
    C4 e0{}, ep{}, em{};
    enum class Tag { Zero, Generic, FiberNh0, HorizontalN30 } tag = Tag::Zero;
};

struct ModeBasis {
    TorusSpec spec;
    FreqLattice lattice;
    std::vector<ModeData> modes;

    const ModeData& at(std::size_t idx) const { return modes[idx]; }
    const ModeData& at(const Int3& n) const { return modes[lattice.index(n)]; }
};

namespace detail {

inline C4 normalized(const C4& v) {
    double s = 0.0;
    for (const Cplx& z : v) s += std::norm(z);
    const double inv = 1.0 / std::sqrt(s);
    C4 out;
    for (int c = 0; c < 4; ++c) out[c] = v[c] * inv;
    return out;
}

inline C4 conj4(const C4& v) {
    return {std::conj(v[0]), std::conj(v[1]), std::conj(v[2]), std::conj(v[3])};
}

}  // namespace detail

inline ModeData build_mode_data(const TorusSpec& spec, const Int3& n) {
    ModeData d;
    if (n[0] == 0 && n[1] == 0 && n[2] == 0) return d;

    const double F = spec.F;
    const double x1 = spec.checked1(n[0]), x2 = spec.checked2(n[1]), x3 = spec.checked3(n[2]);
    const double kh2 = x1 * x1 + x2 * x2;
    const double k2 = kh2 + x3 * x3;
    const double kF2 = kh2 + F * F * x3 * x3;
    const double kF = std::sqrt(kF2);

    d.e0 = {Cplx(-x2 / kF, 0.0), Cplx(x1 / kF, 0.0), Cplx(0.0, 0.0), Cplx(-F * x3 / kF, 0.0)};
    d.omega = kF / (F * std::sqrt(k2));

    if (kh2 == 0.0) {
        d.tag = ModeData::Tag::FiberNh0;
        const double r = 1.0 / std::sqrt(2.0);
        d.ep = {Cplx(0.0, r), Cplx(r, 0.0), Cplx(0.0, 0.0), Cplx(0.0, 0.0)};
        d.em = detail::conj4(d.ep);
        return d;  // omega = 1 exactly from the formula
    }
    if (x3 == 0.0) {
        d.tag = ModeData::Tag::HorizontalN30;
        const double r = 1.0 / std::sqrt(2.0);
        d.ep = {Cplx(0.0, 0.0), Cplx(0.0, 0.0), Cplx(0.0, -r), Cplx(r, 0.0)};
        d.em = detail::conj4(d.ep);
        return d;  // omega = 1/F exactly
    }

    d.tag = ModeData::Tag::Generic;
    const double w = d.omega;
    const C4 raw = {
        Cplx(-F * x3 * x2, F * x3 * x1 * w),
        Cplx(F * x3 * x1, F * x3 * x2 * w),
        Cplx(0.0, -F * w * kh2),
        Cplx(kh2, 0.0),
    };
    d.ep = detail::normalized(raw);
    d.em = detail::conj4(d.ep);
    return d;
}

inline ModeBasis build_mode_basis(const TorusSpec& spec, const FreqLattice& lat) {
    ModeBasis b;
    b.spec = spec;
    b.lattice = lat;
    b.modes.resize(lat.size());
    lat.for_each([&](std::size_t idx, const Int3& n) {
        b.modes[idx] = build_mode_data(spec, n);
    });
    return b;
}

/// <u, v> = sum_i u_i conj(v_i).
inline Cplx dot4(const C4& u, const C4& v) {
    Cplx s(0.0, 0.0);
    for (int c = 0; c < 4; ++c) s += u[c] * std::conj(v[c]);
    return s;
}

}  // namespace gsp
