#pragma once

/// Anisotropic Sobolev norms and vertical-profile (horizontal average) helpers.
///   ||u||_{H^{s,s'}}^2 = sum_n (1+|n_check_h|^2)^s (1+n_check_3^2)^{s'} |u_hat(n)|^2
/// summed over all four components; H^{0,0} coincides with the per-unit-volume
/// L^2 norm (Plancherel).

#include <cmath>
#include <vector>

#include "gsp/field.hpp"

namespace gsp {

inline double anisotropic_norm(const TorusSpec& spec, const SpectralField4& f,
                               double s, double s_prime) {
    double acc = 0.0;
    f.lattice.for_each([&](std::size_t idx, const Int3& n) {
        const double x3 = spec.checked3(n[2]);
        const double wh = std::pow(1.0 + spec.kh2(n), s);
        const double wv = std::pow(1.0 + x3 * x3, s_prime);
        double m = 0.0;
        for (int c = 0; c < 4; ++c) m += std::norm(f.at(idx, c));
        acc += wh * wv * m;
    });
    return std::sqrt(acc);
}

/// sum_n |n_check_h|^2 |u_hat(n)|^2  (squared L^2 norm of the horizontal gradient).
inline double grad_h_sq(const TorusSpec& spec, const SpectralField4& f) {
    double acc = 0.0;
    f.lattice.for_each([&](std::size_t idx, const Int3& n) {
        double m = 0.0;
        for (int c = 0; c < 4; ++c) m += std::norm(f.at(idx, c));
        acc += spec.kh2(n) * m;
    });
    return acc;
}

/// Vertical profile of the horizontal average: the fiber {f_hat(0,0,n3)}_{n3},
/// returned as a (2N+1) x 4 table indexed by n3 + N.
struct VerticalProfile {
    int N = 0;
    std::vector<C4> coeffs;  ///< coeffs[n3 + N]

    const C4& at(int n3) const { return coeffs[static_cast<std::size_t>(n3 + N)]; }
};

inline VerticalProfile horizontal_average(const SpectralField4& f) {
    VerticalProfile p;
    p.N = f.lattice.N;
    p.coeffs.resize(2 * p.N + 1);
    for (int n3 = -p.N; n3 <= p.N; ++n3) p.coeffs[n3 + p.N] = f.get({0, 0, n3});
    return p;
}

/// H^{s'} norm of a vertical profile (vertical weights only).
inline double profile_norm(const TorusSpec& spec, const VerticalProfile& p, double s_prime) {
    double acc = 0.0;
    for (int n3 = -p.N; n3 <= p.N; ++n3) {
        const double x3 = spec.checked3(n3);
        double m = 0.0;
        for (int c = 0; c < 4; ++c) m += std::norm(p.at(n3)[c]);
        acc += std::pow(1.0 + x3 * x3, s_prime) * m;
    }
    return std::sqrt(acc);
}

}  // namespace gsp
