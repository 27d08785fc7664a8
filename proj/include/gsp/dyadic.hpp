#pragma once

/// Vertical Littlewood-Paley blocks.  The cut-off pair (chi, phi) satisfies
///   supp chi subset B(0, 4/3),  chi == 1 on B(0, 1),
///   phi(t) = chi(t/2) - chi(t),  supp phi subset C(3/4, 8/3)  (actually [1, 8/3]),
///   chi(t) + sum_{q>=0} phi(2^{-q} t) = 1  for every t,
/// and the partial sums telescope exactly: chi(t) + sum_{q<Q} phi(2^{-q}t)
/// = chi(2^{-Q} t), so the partition of unity is exact in floating point once
/// 2^{-Q}|t| <= 1.
///
/// Concrete profile: the standard mollified-indicator construction
///   h(u) = exp(-1/u) for u > 0 (else 0),  psi(u) = h(u)/(h(u)+h(1-u)),
///   chi(t) = psi(4 - 3|t|).

#include <cmath>

#include "gsp/field.hpp"

namespace gsp {

namespace detail {
inline double bump_h(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
}  // namespace detail

/// Smooth step: 0 for u <= 0, 1 for u >= 1, strictly increasing between.
inline double smooth_step(double u) {
    const double a = detail::bump_h(u);
    const double b = detail::bump_h(1.0 - u);
    return a / (a + b);
}

/// chi: 1 on |t| <= 1, 0 on |t| >= 4/3.
inline double lp_chi(double t) { return smooth_step(4.0 - 3.0 * std::abs(t)); }

/// phi(t) = chi(t/2) - chi(t); equals 1 on 4/3 <= |t| <= 2.
inline double lp_phi(double t) { return lp_chi(t / 2.0) - lp_chi(t); }

/// Multiplier value applied to a mode with vertical checked frequency x3 by
/// the block of index q (q = -1 is the low block; q <= -2 gives zero).
inline double dyadic_multiplier(double x3, int q) {
    if (q <= -2) return 0.0;
    if (q == -1) return lp_chi(std::abs(x3));
    return lp_phi(std::ldexp(std::abs(x3), -q));  // phi(|x3| / 2^q)
}

/// Vertical dyadic block Delta_q^v f.
inline SpectralField4 dyadic_block(const TorusSpec& spec, const SpectralField4& f, int q) {
    SpectralField4 g(f.lattice);
    f.lattice.for_each([&](std::size_t idx, const Int3& n) {
        const double w = dyadic_multiplier(spec.checked3(n[2]), q);
        for (int c = 0; c < 4; ++c) g.at(idx, c) = w * f.at(idx, c);
    });
    return g;
}

/// Smallest Q such that all blocks q > Q vanish on this lattice.
inline int dyadic_max_q(const TorusSpec& spec, const FreqLattice& lat) {
    const double top = std::abs(spec.checked3(lat.N));
    int q = 0;
    while (std::ldexp(1.0, q) < top) ++q;  // phi(2^{-q} top) == 0 once 2^q >= top
    return q + 1;
}

}  // namespace gsp
