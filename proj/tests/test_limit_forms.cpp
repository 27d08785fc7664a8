// Oracle tests for the filtered forms (q_eps, d_eps), the resonant limit
// forms (stencil build, q_limit, d_limit), and the Galerkin truncation.
//
// Structural identities relied on here, each cross-checked numerically:
//   - the QG output channel of the limit form equals the lifted horizontal
//     transport of Omega, whether summed in the eigenbasis stencil or with
//     the scalar Biot-Savart weight (two-path oracle);
//   - oscillating-oscillating interactions feed nothing into the QG channel
//     (the Omega-equation closes), so the limit form is energy-neutral with
//     the oscillating stencil alone;
//   - the theta-average of q_eps converges to q_limit as the averaging
//     window grows (time-average consistency).

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "gsp/limit_forms.hpp"
#include "gsp/norms.hpp"
#include "gsp/prng.hpp"

using namespace gsp;

namespace {

Cplx l2_inner(const SpectralField4& x, const SpectralField4& y) {
    Cplx s(0.0, 0.0);
    const std::size_t M = x.lattice.size();
    for (std::size_t i = 0; i < M; ++i)
        for (int c = 0; c < 4; ++c) s += x.at(i, c) * std::conj(y.at(i, c));
    return s;
}

/// Independent direct-convolution transport oracle: O(M^2) spectral sum.
SpectralField4 transport_oracle(const TorusSpec& spec, const SpectralField4& U,
                                const SpectralField4& V) {
    const FreqLattice& lat = U.lattice;
    SpectralField4 out(lat);
    lat.for_each([&](std::size_t ki, const Int3& k) {
        const C4 u = {U.at(ki, 0), U.at(ki, 1), U.at(ki, 2), U.at(ki, 3)};
        if (u[0] == Cplx() && u[1] == Cplx() && u[2] == Cplx()) return;
        lat.for_each([&](std::size_t mi, const Int3& m) {
            const Int3 n = {k[0] + m[0], k[1] + m[1], k[2] + m[2]};
            if (!lat.contains(n)) return;
            const Cplx adv = u[0] * spec.checked1(m[0]) + u[1] * spec.checked2(m[1]) +
                             u[2] * spec.checked3(m[2]);
            const std::size_t ni = lat.index(n);
            for (int c = 0; c < 4; ++c)
                out.at(ni, c) += Cplx(0.0, 1.0) * adv * V.at(mi, c);
        });
    });
    out.set({0, 0, 0}, C4{});
    return out;
}

TorusSpec torus_27_5() {
    return TorusSpec::with_rational(Rational(1), Rational(1), Rational(27, 5), Rational(9));
}

double fiber_l2(const SpectralField4& f) {
    double s = 0.0;
    f.lattice.for_each([&](std::size_t idx, const Int3& n) {
        if (n[0] != 0 || n[1] != 0) return;
        for (int c = 0; c < 4; ++c) s += std::norm(f.at(idx, c));
    });
    return std::sqrt(s);
}

}  // namespace

TEST(Transport, MatchesDirectConvolutionOracle) {
    TorusSpec spec;
    spec.a1 = 1.0;
    spec.a2 = 1.3;
    spec.a3 = 0.8;
    spec.F = 1.7;
    const FreqLattice lat(3);
    TransformEngine eng(3, TransformEngine::dealias_grid(3));
    const SpectralField4 U = random_divfree_field(spec, lat, 11);
    const SpectralField4 V = random_divfree_field(spec, lat, 12);
    const SpectralField4 fast = transport_term(spec, eng, U, V);
    const SpectralField4 slow = transport_oracle(spec, U, V);
    const SpectralField4 diff = fast - slow;
    EXPECT_LT(diff.l2_norm(), 1e-12 * (1.0 + slow.l2_norm()));
}

TEST(QEps, TrivialAndThetaZero) {
    TorusSpec spec;
    spec.F = 2.0;
    const FreqLattice lat(3);
    TransformEngine eng(3, TransformEngine::dealias_grid(3));
    const ModeBasis basis = build_mode_basis(spec, lat);
    const SpectralField4 zero(lat);
    const SpectralField4 U = random_divfree_field(spec, lat, 21);

    EXPECT_EQ(q_eps(basis, eng, zero, U, 0.7).l2_norm(), 0.0);
    EXPECT_EQ(q_eps(basis, eng, U, zero, 0.7).l2_norm(), 0.0);

    // theta = 0: plain Leray-projected transport.
    SpectralField4 expected = transport_term(spec, eng, U, U);
    project_divergence_free(spec, expected);
    const SpectralField4 got = q_eps(basis, eng, U, U, 0.0);
    EXPECT_LT((got - expected).l2_norm(), 1e-13 * (1.0 + expected.l2_norm()));
}

TEST(QEps, InsufficientDealiasingThrows) {
    TorusSpec spec;
    const FreqLattice lat(4);
    TransformEngine tight(4, 2 * 4 + 2);  // round-trip capable but < 3N+1
    const ModeBasis basis = build_mode_basis(spec, lat);
    const SpectralField4 U = random_divfree_field(spec, lat, 5);
    EXPECT_THROW(q_eps(basis, tight, U, U, 0.0), std::invalid_argument);
}

TEST(QEps, EnergyNeutralityDivergenceReality) {
    TorusSpec spec;
    spec.a1 = 1.0;
    spec.a2 = 0.9;
    spec.a3 = 1.2;
    spec.F = 2.0;
    const FreqLattice lat(4);
    TransformEngine eng(4, TransformEngine::dealias_grid(4));
    const ModeBasis basis = build_mode_basis(spec, lat);
    for (std::uint64_t seed : {31u, 32u, 33u}) {
        const SpectralField4 U = random_divfree_field(spec, lat, seed);
        const double u3 = std::pow(U.l2_norm(), 3);
        for (double theta : {0.0, 0.37, 5.0, 1000.0}) {
            const SpectralField4 q = q_eps(basis, eng, U, U, theta);
            EXPECT_LT(std::abs(l2_inner(q, U)), 1e-10 * u3) << "theta=" << theta;
            EXPECT_LT(divergence_linf(spec, q), 1e-11 * (1.0 + q.l2_norm()));
            EXPECT_LT(q.hermitian_defect(), 1e-13 * (1.0 + q.linf()));
        }
    }
}

TEST(DEps, CommutesWhenViscositiesEqualAndNegative) {
    TorusSpec spec;
    spec.F = 2.0;
    spec.nu_h = 0.7;
    spec.nu_h_prime = 0.7;
    const FreqLattice lat(3);
    const ModeBasis basis = build_mode_basis(spec, lat);
    const SpectralField4 U = random_divfree_field(spec, lat, 41);

    // nu_h = nu_h': D is per-mode scalar on the velocity+buoyancy stack, so
    // it commutes with L(theta) and d_eps is theta-independent.
    SpectralField4 direct(lat);
    lat.for_each([&](std::size_t idx, const Int3& n) {
        const auto d = dissipation_symbol(spec, n);
        for (int c = 0; c < 4; ++c) direct.at(idx, c) = d[c] * U.at(idx, c);
    });
    for (double theta : {0.0, 1.3, 200.0}) {
        const SpectralField4 got = d_eps(basis, U, theta);
        EXPECT_LT((got - direct).l2_norm(), 1e-12 * (1.0 + direct.l2_norm()));
        EXPECT_LE(l2_inner(got, U).real(), 1e-14);
    }
}

TEST(DEps, ThetaZeroMatchesSymbolForUnequalViscosities) {
    TorusSpec spec;
    spec.F = 1.4;
    spec.nu_h = 0.5;
    spec.nu_h_prime = 2.0;
    const FreqLattice lat(3);
    const ModeBasis basis = build_mode_basis(spec, lat);
    const SpectralField4 U = random_divfree_field(spec, lat, 42);
    SpectralField4 direct(lat);
    lat.for_each([&](std::size_t idx, const Int3& n) {
        const auto d = dissipation_symbol(spec, n);
        for (int c = 0; c < 4; ++c) direct.at(idx, c) = d[c] * U.at(idx, c);
    });
    // At theta = 0, d_eps equals D restricted to the divergence-free subspace.
    // U is divergence-free and D maps it into the subspace spanned by the
    // eigenvectors only up to the buoyancy/velocity split, so compare after
    // projecting the direct product onto the eigenbasis span.
    project_divergence_free(spec, direct);
    const SpectralField4 got = d_eps(basis, U, 0.0);
    EXPECT_LT((got - direct).l2_norm(), 1e-12 * (1.0 + direct.l2_norm()));
    // Negative semidefinite at every phase.
    for (double theta : {0.0, 0.9, 77.0})
        EXPECT_LE(l2_inner(d_eps(basis, U, theta), U).real(), 1e-14);
}

TEST(Stencil, CounterexampleTorusHasThreeWaveEntries) {
    const TorusSpec spec = torus_27_5();
    const FreqLattice lat(2);
    const ModeBasis basis = build_mode_basis(spec, lat);
    const ResonantSet res = enumerate_resonances_exact(spec, 2);
    EXPECT_FALSE(res.triples.empty());
    EXPECT_TRUE(std::binary_search(
        res.triples.begin(), res.triples.end(),
        ResonantTriple{{1, 0, 1}, {-1, 0, 1}, {0, 0, 2}, +1, +1, +1}));
    const LimitStencil st = build_limit_stencil(basis, res);
    EXPECT_GT(st.three_wave_count, 0u);
    EXPECT_GT(st.two_wave_count, 0u);
    EXPECT_EQ(st.certification, ResonantSet::Certification::ExactRational);
}

TEST(Stencil, MismatchedLatticeThrows) {
    const TorusSpec spec = torus_27_5();
    const ModeBasis basis = build_mode_basis(spec, FreqLattice(3));
    const ResonantSet res = enumerate_resonances_exact(spec, 2);
    EXPECT_THROW(build_limit_stencil(basis, res), std::invalid_argument);
}

TEST(QLimit, SplittingAndTwoPathAgreement) {
    TorusSpec spec;
    spec.F = 2.0;
    const FreqLattice lat(4);
    TransformEngine eng(4, TransformEngine::dealias_grid(4));
    const ModeBasis basis = build_mode_basis(spec, lat);
    const ResonantSet res = enumerate_resonances_float(spec, 4, 1e-9);
    const LimitStencil st = build_limit_stencil(basis, res);

    for (std::uint64_t seed : {51u, 52u}) {
        const SpectralField4 W = random_divfree_field(spec, lat, seed);
        // QG x QG feeds nothing into the oscillating channels.
        const SpectralField4 Wqg = qg_projection(basis, W);
        const SpectralField4 qqg = q_limit(basis, st, eng, Wqg, Wqg);
        const double w2 = std::pow(W.l2_norm(), 2);
        EXPECT_LT(osc_projection(basis, qqg).l2_norm(), 1e-12 * w2);

        // Two-path QG channel agreement (pseudo-spectral vs direct
        // convolution with the scalar weight).
        const SpectralField4 qa = q_limit(basis, st, eng, W, W, QgPath::PseudoSpectral);
        const SpectralField4 qb = q_limit(basis, st, eng, W, W, QgPath::DirectConvolution);
        EXPECT_LT((qa - qb).l2_norm(), 1e-10 * (1.0 + qa.l2_norm()));
    }
}

TEST(QLimit, QgChannelEqualsEigenStencilSum) {
    // The lemma behind the QG channel: summing the raw eigenbasis stencil
    // over QG x QG -> QG equals the lifted scalar-weight transport.  The two
    // sums differ term by term and agree only after summation over k+m=n.
    TorusSpec spec;
    spec.a1 = 1.0;
    spec.a2 = 1.3;
    spec.a3 = 0.8;
    spec.F = 1.7;
    const FreqLattice lat(3);
    TransformEngine eng(3, TransformEngine::dealias_grid(3));
    const ModeBasis basis = build_mode_basis(spec, lat);
    const ResonantSet res = enumerate_resonances_float(spec, 3, 1e-9);
    const LimitStencil st = build_limit_stencil(basis, res);

    const SpectralField4 W = random_divfree_field(spec, lat, 61);
    const EigenCoeffs cw = decompose_eigen(basis, W);
    const SpectralField4 q = q_limit(basis, st, eng, W, W);

    lat.for_each([&](std::size_t ni, const Int3& n) {
        if (n == Int3{0, 0, 0}) return;
        const ModeData& mn = basis.modes[ni];
        Cplx eig_sum(0.0, 0.0);
        lat.for_each([&](std::size_t ki, const Int3& k) {
            if (k == Int3{0, 0, 0} || (k[0] == 0 && k[1] == 0)) return;
            const Int3 m = {n[0] - k[0], n[1] - k[1], n[2] - k[2]};
            if (!lat.contains(m) || m == Int3{0, 0, 0}) return;
            const std::size_t mi = lat.index(m);
            eig_sum += Cplx(0.0, 1.0) *
                       detail::advect_weight(spec, basis.modes[ki].e0, m) *
                       dot4(basis.modes[mi].e0, mn.e0) * cw.c0[ki] * cw.c0[mi];
        });
        const C4 u = {q.at(ni, 0), q.at(ni, 1), q.at(ni, 2), q.at(ni, 3)};
        const Cplx got = dot4(u, mn.e0);
        EXPECT_LT(std::abs(got - eig_sum), 1e-10 * (1.0 + std::abs(eig_sum)))
            << "n = (" << n[0] << "," << n[1] << "," << n[2] << ")";
    });
}

TEST(QLimit, EnergyNeutralityAndReality) {
    // Non-resonant torus (2-wave entries only) and the resonant
    // counterexample torus (3-wave entries as well).
    struct Case {
        TorusSpec spec;
        int N;
        ResonantSet res;
    };
    TorusSpec unit2;
    unit2.F = std::sqrt(2.0);
    std::vector<Case> cases;
    cases.push_back({unit2, 4, enumerate_resonances_float(unit2, 4, 1e-9)});
    const TorusSpec c27 = torus_27_5();
    cases.push_back({c27, 3, enumerate_resonances_exact(c27, 3)});

    for (const Case& cs : cases) {
        const FreqLattice lat(cs.N);
        TransformEngine eng(cs.N, TransformEngine::dealias_grid(cs.N));
        const ModeBasis basis = build_mode_basis(cs.spec, lat);
        const LimitStencil st = build_limit_stencil(basis, cs.res);
        for (std::uint64_t seed : {71u, 72u, 73u}) {
            SpectralField4 U = random_divfree_field(cs.spec, lat, seed);
            const SpectralField4 q = q_limit(basis, st, eng, U, U);
            const double u3 = std::pow(U.l2_norm(), 3);
            EXPECT_LT(std::abs(l2_inner(q, U)), 1e-10 * u3);
            EXPECT_LT(q.hermitian_defect(), 1e-13 * (1.0 + q.linf()));
            EXPECT_LT(divergence_linf(cs.spec, q), 1e-11 * (1.0 + q.l2_norm()));
        }
    }
}

TEST(QLimit, ResonantTorusFiberExchange) {
    // On the resonant counterexample torus the 3-wave triple
    // (1,0,1)+(-1,0,1)->(0,0,2) carries a nonzero stencil weight into the
    // horizontal-average fiber.  The BILINEAR form with independent leg
    // supports exhibits it; in the QUADRATIC form q(U,U) the feed cancels
    // exactly, because a fiber output forces mirror legs (m_h = -k_h) and
    // the swap-symmetrized weight w(k,m) + w(m,k) vanishes.
    {
        const TorusSpec spec = torus_27_5();
        const FreqLattice lat(2);
        TransformEngine eng(2, TransformEngine::dealias_grid(2));
        const ModeBasis basis = build_mode_basis(spec, lat);
        const LimitStencil st = build_limit_stencil(basis, enumerate_resonances_exact(spec, 2));
        // U supported on the k-leg pair, V on the m-leg pair (both real).
        SpectralField4 U = make_field(lat, [&](const Int3& n) {
            C4 v{};
            if (n[0] == 1 && n[1] == 0 && n[2] == 1) v = build_mode_data(spec, n).ep;
            if (n[0] == -1 && n[1] == 0 && n[2] == -1) v = build_mode_data(spec, n).em;
            return v;
        });
        SpectralField4 V = make_field(lat, [&](const Int3& n) {
            C4 v{};
            if (n[0] == -1 && n[1] == 0 && n[2] == 1) v = build_mode_data(spec, n).ep;
            if (n[0] == 1 && n[1] == 0 && n[2] == -1) v = build_mode_data(spec, n).em;
            return v;
        });
        ASSERT_LT(U.hermitian_defect(), 1e-15);
        ASSERT_LT(V.hermitian_defect(), 1e-15);
        const SpectralField4 quv = q_limit(basis, st, eng, U, V);
        EXPECT_GT(fiber_l2(quv), 1e-6);  // bilinear fiber exchange is real
        // Quadratic form: exact mirror cancellation.
        const SpectralField4 quu = q_limit(basis, st, eng, U + V, U + V);
        EXPECT_LT(fiber_l2(quu), 1e-13);
    }
    {
        // a3^2/a1^2 = a3^2/a2^2 = real root of x^5 - x - 1 (degree 5), F^2 = 2:
        // condition (P) holds by the algebraic clause.
        const double alpha = 1.1673039782614187;  // root of x^5 - x - 1
        TorusSpec spec;
        spec.a1 = 1.0;
        spec.a2 = 1.0;
        spec.a3 = std::sqrt(alpha);
        spec.F = std::sqrt(2.0);
        const FreqLattice lat(4);
        TransformEngine eng(4, TransformEngine::dealias_grid(4));
        const ModeBasis basis = build_mode_basis(spec, lat);
        const ResonantSet res = enumerate_resonances_float(spec, 4, 1e-9);
        EXPECT_TRUE(res.triples.empty());
        const LimitStencil st = build_limit_stencil(basis, res);
        const SpectralField4 U = random_divfree_field(spec, lat, 81);  // fiber-free
        const SpectralField4 q = q_limit(basis, st, eng, U, U);
        const SpectralField4 d = d_limit(basis, U);
        EXPECT_LT(fiber_l2(q), 1e-12 * std::pow(U.l2_norm(), 2));
        EXPECT_LT(fiber_l2(d), 1e-12 * U.l2_norm());
    }
}

TEST(DLimit, PinnedSymbolsAndConsistency) {
    {
        TorusSpec spec;  // unit viscosities
        spec.F = 3.0;
        EXPECT_NEAR(a_qg_symbol(spec, {1, 1, 1}), 2.0, 1e-15);
    }
    {
        TorusSpec spec;
        spec.F = 1.0;
        spec.nu_h = 1.0;
        spec.nu_h_prime = 2.0;
        EXPECT_NEAR(a_qg_symbol(spec, {1, 1, 1}), 8.0 / 3.0, 1e-15);
    }
    // a_QG equals the e^0-compression of -D on every mode; two-sided bounds.
    TorusSpec spec;
    spec.a1 = 1.1;
    spec.a2 = 0.7;
    spec.a3 = 1.9;
    spec.F = 0.6;
    spec.nu_h = 0.4;
    spec.nu_h_prime = 1.7;
    const FreqLattice lat(5);
    const ModeBasis basis = build_mode_basis(spec, lat);
    const double c1 = std::min(spec.nu_h, spec.nu_h_prime);
    const double c2 = std::max(spec.nu_h, spec.nu_h_prime);
    lat.for_each([&](std::size_t idx, const Int3& n) {
        if (n == Int3{0, 0, 0}) return;
        const ModeData& md = basis.modes[idx];
        const auto d = dissipation_symbol(spec, n);
        C4 de{};
        for (int c = 0; c < 4; ++c) de[c] = d[c] * md.e0[c];
        const double aqg = a_qg_symbol(spec, n);
        EXPECT_NEAR(aqg, -dot4(de, md.e0).real(), 1e-13 * (1.0 + aqg));
        const double kh2 = spec.kh2(n);
        EXPECT_GE(aqg, c1 * kh2 - 1e-13);
        EXPECT_LE(aqg, c2 * kh2 + 1e-13);
    });
}

TEST(DLimit, DissipativityRealityFiber) {
    TorusSpec spec;
    spec.F = 1.8;
    spec.nu_h = 0.7;
    spec.nu_h_prime = 1.3;
    const FreqLattice lat(4);
    const ModeBasis basis = build_mode_basis(spec, lat);
    const double c = std::min(spec.nu_h, spec.nu_h_prime);
    for (std::uint64_t seed : {91u, 92u, 93u}) {
        const SpectralField4 U = random_divfree_field(spec, lat, seed);
        const SpectralField4 d = d_limit(basis, U);
        const double lhs = l2_inner(d, U).real();
        const double rhs = c * grad_h_sq(spec, U);
        EXPECT_GE(lhs, rhs * (1.0 - 1e-12));
        EXPECT_LT(d.hermitian_defect(), 1e-13 * (1.0 + d.linf()));
    }
    // Fiber modes carry no horizontal gradient: d_limit vanishes there.
    SpectralField4 fib = make_field(lat, [&](const Int3& n) {
        C4 v{};
        if (n[0] == 0 && n[1] == 0 && std::abs(n[2]) == 1) {
            const ModeData md = build_mode_data(spec, n);
            for (int c2 = 0; c2 < 4; ++c2) v[c2] = md.ep[c2];
        }
        return v;
    });
    fib.hermitize();
    EXPECT_EQ(d_limit(basis, fib).l2_norm(), 0.0);
}

TEST(Galerkin, TruncationBasics) {
    TorusSpec spec;
    const FreqLattice lat(4);
    const SpectralField4 U = random_divfree_field(spec, lat, 101);
    // n_cut >= sqrt(3) N: identity.
    const SpectralField4 full = galerkin_truncate(U, std::sqrt(3.0) * 4 + 1e-9);
    EXPECT_EQ((full - U).l2_norm(), 0.0);
    // n_cut = 0: zero field.
    EXPECT_EQ(galerkin_truncate(U, 0).l2_norm(), 0.0);
    // Idempotence.
    const SpectralField4 once = galerkin_truncate(U, 2.5);
    const SpectralField4 twice = galerkin_truncate(once, 2.5);
    EXPECT_EQ((twice - once).l2_norm(), 0.0);
    EXPECT_LT(once.l2_norm(), U.l2_norm());
}

TEST(QLimit, TimeAverageConsistency) {
    // (1/Theta) int_0^Theta q_eps(U,U,theta) dtheta -> q_limit(U,U) as the
    // window grows (Theta = T/eps with T = 1).
    const TorusSpec spec = torus_27_5();
    const FreqLattice lat(2);
    TransformEngine eng(2, TransformEngine::dealias_grid(2));
    const ModeBasis basis = build_mode_basis(spec, lat);
    const LimitStencil st = build_limit_stencil(basis, enumerate_resonances_exact(spec, 2));
    const SpectralField4 U = random_divfree_field(spec, lat, 111);
    const SpectralField4 ql = q_limit(basis, st, eng, U, U);
    const double scale = 1.0 + ql.l2_norm();

    const auto avg_error = [&](double Theta) {
        const double dtheta = 0.05;
        const int steps = static_cast<int>(std::lround(Theta / dtheta));
        SpectralField4 acc(lat);
        // Composite Simpson over [0, Theta] (steps is even by construction).
        for (int i = 0; i <= steps; ++i) {
            const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            acc += (w * dtheta / 3.0) * q_eps(basis, eng, U, U, i * dtheta);
        }
        acc *= 1.0 / Theta;
        return (acc - ql).l2_norm() / scale;
    };

    const double e1 = avg_error(10.0);    // eps = 1e-1
    const double e2 = avg_error(100.0);   // eps = 1e-2
    const double e3 = avg_error(1000.0);  // eps = 1e-3
    EXPECT_LT(e2, e1);
    EXPECT_LT(e3, e2);
    // The contract asks only for decrease with epsilon; the averaging window
    // error decays slowly (~1/Theta with resonant-adjacent small divisors),
    // so assert a decay factor rather than a tight absolute level.
    EXPECT_LT(e3, 0.5 * e1);
}
