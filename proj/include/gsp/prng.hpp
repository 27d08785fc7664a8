#pragma once

/// Deterministic random numbers and random test fields.  The uniform mapping
/// and the Box-Muller transform are written out explicitly so that streams
/// are reproducible bit-for-bit on one machine independent of the standard
/// library's distribution implementations.

#include <cmath>
#include <cstdint>
#include <random>

#include "gsp/field.hpp"

namespace gsp {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (pair-cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * M_PI * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    Cplx cgaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Random Hermitian 4-component field (not necessarily divergence-free);
/// coefficient magnitudes decay like (1+|n_check|^2)^{-decay/2}.
inline SpectralField4 random_field(const TorusSpec& spec, const FreqLattice& lat,
                                   std::uint64_t seed, double decay = 2.0,
                                   double amplitude = 1.0) {
    Rng rng(seed);
    SpectralField4 f = make_field(lat, [&](const Int3& n) {
        C4 v{};
        const double w = amplitude * std::pow(1.0 + spec.k2(n), -decay / 2.0);
        for (int c = 0; c < 4; ++c) v[c] = w * rng.cgaussian();
        return v;
    });
    return f;
}

/// Random Hermitian divergence-free field with zero global average, zero
/// horizontal average (the n_h = 0 fiber zeroed), vertical decay
/// (1+n_check3^2)^{-s/2-1/2} so H^{0,s} norms are finite and seed-reproducible.
inline SpectralField4 random_divfree_field(const TorusSpec& spec, const FreqLattice& lat,
                                           std::uint64_t seed, double s = 1.0,
                                           double amplitude = 1.0, double h_decay = 1.0) {
    Rng rng(seed);
    SpectralField4 f = make_field(lat, [&](const Int3& n) {
        C4 v{};
        if (n[0] == 0 && n[1] == 0) return v;  // zero the horizontal-average fiber
        const double x3 = spec.checked3(n[2]);
        const double w = amplitude *
                         std::pow(1.0 + x3 * x3, -s / 2.0 - 0.5) *
                         std::pow(1.0 + spec.kh2(n), -h_decay / 2.0);
        for (int c = 0; c < 4; ++c) v[c] = w * rng.cgaussian();
        return v;
    });
    project_divergence_free(spec, f);
    f.hermitize();
    return f;
}

}  // namespace gsp
