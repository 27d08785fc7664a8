#pragma once

/// Four-component spectral field (v1, v2, v3, T) on a truncated lattice.
/// Invariants maintained by the constructors/factories:
///   - Hermitian symmetry coeffs(-n) = conj(coeffs(n))  (real physical field)
///   - zero mode pinned to 0                            (zero global average)

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "gsp/lattice.hpp"
#include "gsp/torus.hpp"

namespace gsp {

using Cplx = std::complex<double>;
using C4 = std::array<Cplx, 4>;

struct SpectralField4 {
    FreqLattice lattice;
    std::vector<Cplx> data;  ///< layout: data[index(n)*4 + component]

    SpectralField4() = default;
    explicit SpectralField4(const FreqLattice& lat)
        : lattice(lat), data(lat.size() * 4, Cplx(0.0, 0.0)) {}

    Cplx& at(std::size_t idx, int c) { return data[idx * 4 + c]; }
    const Cplx& at(std::size_t idx, int c) const { return data[idx * 4 + c]; }
    Cplx& at(const Int3& n, int c) { return data[lattice.index(n) * 4 + c]; }
    const Cplx& at(const Int3& n, int c) const { return data[lattice.index(n) * 4 + c]; }

    C4 get(const Int3& n) const {
        const std::size_t i = lattice.index(n) * 4;
        return {data[i], data[i + 1], data[i + 2], data[i + 3]};
    }
    void set(const Int3& n, const C4& v) {
        const std::size_t i = lattice.index(n) * 4;
        for (int c = 0; c < 4; ++c) data[i + c] = v[c];
    }

    /// ell^2 norm of the coefficient vector == H^{0,0} norm (per-unit-volume L^2).
    double l2_norm() const {
        double s = 0.0;
        for (const Cplx& z : data) s += std::norm(z);
        return std::sqrt(s);
    }

    double linf() const {
        double m = 0.0;
        for (const Cplx& z : data) m = std::max(m, std::abs(z));
        return m;
    }

    /// Enforce coeffs(-n) = conj(coeffs(n)) by averaging, and pin the zero mode.
    void hermitize() {
        const int N = lattice.N;
        for (int n1 = -N; n1 <= N; ++n1)
            for (int n2 = -N; n2 <= N; ++n2)
                for (int n3 = -N; n3 <= N; ++n3) {
                    const Int3 n{n1, n2, n3};
                    const Int3 mn{-n1, -n2, -n3};
                    if (lattice.index(n) > lattice.index(mn)) continue;
                    for (int c = 0; c < 4; ++c) {
                        const Cplx avg = 0.5 * (at(n, c) + std::conj(at(mn, c)));
                        at(n, c) = avg;
                        at(mn, c) = std::conj(avg);
                    }
                }
        set({0, 0, 0}, C4{});
    }

    /// Max deviation from Hermitian symmetry (diagnostic).
    double hermitian_defect() const {
        double d = 0.0;
        lattice.for_each([&](std::size_t, const Int3& n) {
            const Int3 mn{-n[0], -n[1], -n[2]};
            for (int c = 0; c < 4; ++c)
                d = std::max(d, std::abs(at(n, c) - std::conj(at(mn, c))));
        });
        return d;
    }

    // Vector-space operations used by the time steppers.
    SpectralField4& operator+=(const SpectralField4& o) {
        for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
        return *this;
    }
    SpectralField4& operator-=(const SpectralField4& o) {
        for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
        return *this;
    }
    SpectralField4& operator*=(double a) {
        for (Cplx& z : data) z *= a;
        return *this;
    }
    /// this += a * x
    void axpy(double a, const SpectralField4& x) {
        for (std::size_t i = 0; i < data.size(); ++i) data[i] += a * x.data[i];
    }
};

inline SpectralField4 operator+(SpectralField4 a, const SpectralField4& b) { return a += b; }
inline SpectralField4 operator-(SpectralField4 a, const SpectralField4& b) { return a -= b; }
inline SpectralField4 operator*(double s, SpectralField4 a) { return a *= s; }

/// Build a field from a per-mode rule; Hermitian symmetry is enforced by
/// averaging rule(n) against conj(rule(-n)), and the zero mode is pinned.
template <class Rule>
SpectralField4 make_field(const FreqLattice& lat, Rule&& rule) {
    SpectralField4 f(lat);
    lat.for_each([&](std::size_t idx, const Int3& n) {
        const C4 v = rule(n);
        for (int c = 0; c < 4; ++c) f.data[idx * 4 + c] = v[c];
    });
    f.hermitize();
    return f;
}

/// Max over modes of |sum_j n_check_j * v^j(n)| (divergence in spectral form).
inline double divergence_linf(const TorusSpec& spec, const SpectralField4& f) {
    double d = 0.0;
    f.lattice.for_each([&](std::size_t idx, const Int3& n) {
        const Cplx div = spec.checked1(n[0]) * f.at(idx, 0) +
                         spec.checked2(n[1]) * f.at(idx, 1) +
                         spec.checked3(n[2]) * f.at(idx, 2);
        d = std::max(d, std::abs(div));
    });
    return d;
}

/// Project each mode's velocity onto the divergence-free plane (Leray on v).
inline void project_divergence_free(const TorusSpec& spec, SpectralField4& f) {
    f.lattice.for_each([&](std::size_t idx, const Int3& n) {
        const double x1 = spec.checked1(n[0]), x2 = spec.checked2(n[1]), x3 = spec.checked3(n[2]);
        const double k2 = x1 * x1 + x2 * x2 + x3 * x3;
        if (k2 == 0.0) return;
        const Cplx dot = x1 * f.at(idx, 0) + x2 * f.at(idx, 1) + x3 * f.at(idx, 2);
        f.at(idx, 0) -= dot * x1 / k2;
        f.at(idx, 1) -= dot * x2 / k2;
        f.at(idx, 2) -= dot * x3 / k2;
    });
}

}  // namespace gsp
