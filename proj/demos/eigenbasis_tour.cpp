// Tour of the per-mode eigen-system: frequencies, eigenvectors, and the fact
// that the propagator rotates the oscillating coefficients while leaving the
// geostrophic ones alone.
//
// Build: cmake --build build --target eigenbasis_tour
// Run:   ./build/demos/eigenbasis_tour

#include <cstdio>

#include "gsp/mode_basis.hpp"
#include "gsp/prng.hpp"
#include "gsp/propagator.hpp"
#include "gsp/torus.hpp"

using namespace gsp;

int main() {
    TorusSpec spec;
    spec.a1 = 1.0;
    spec.a2 = 1.0;
    spec.a3 = 1.0;
    spec.F = 2.0;

    const FreqLattice lat(4);
    const ModeBasis basis = build_mode_basis(spec, lat);

    std::printf("eigenfrequencies omega(n) on the unit torus, F = %.1f\n", spec.F);
    std::printf("(omega is trapped between 1/F = %.2f and 1)\n\n", 1.0 / spec.F);
    for (const Int3 n : {Int3{1, 0, 0}, Int3{0, 0, 1}, Int3{1, 1, 1}, Int3{3, 2, 1}}) {
        const ModeData& d = basis.modes[lat.index(n)];
        std::printf("  n = (%2d,%2d,%2d)   omega = %.6f\n", n[0], n[1], n[2], d.omega);
        std::printf("      e+ = (%+.3f%+.3fi, %+.3f%+.3fi, %+.3f%+.3fi, %+.3f%+.3fi)\n",
                    d.ep[0].real(), d.ep[0].imag(), d.ep[1].real(), d.ep[1].imag(),
                    d.ep[2].real(), d.ep[2].imag(), d.ep[3].real(), d.ep[3].imag());
    }

    // The propagator is an exact isometry: rotate a random divergence-free
    // field far forward and back, and compare.
    const SpectralField4 f = random_divfree_field(spec, lat, /*seed=*/1);
    SpectralField4 g = propagated(basis, f, 1e3);
    std::printf("\n|f|_L2 = %.12f, |L(1e3) f|_L2 = %.12f\n", f.l2_norm(), g.l2_norm());
    g = propagated(basis, g, -1e3);
    std::printf("round trip L(-1e3) L(1e3) f: |g - f|_L2 = %.3e\n", (g - f).l2_norm());

    // The geostrophic projection is the propagator's fixed subspace.
    const SpectralField4 qg = qg_projection(basis, f);
    const SpectralField4 qg_rot = propagated(basis, qg, 17.0);
    std::printf("QG part is invariant: |L(17) P_QG f - P_QG f|_L2 = %.3e\n",
                (qg_rot - qg).l2_norm());
    return 0;
}
