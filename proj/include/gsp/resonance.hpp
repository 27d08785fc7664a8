#pragma once

/// Resonant-set enumeration (exact-rational and float-tolerance paths), the
/// degree-8 resonance polynomial and its Fujiwara clipping, the
/// horizontal-average resonance polynomial, the condition-(P) checker, and
/// resonance gap histograms.
///
/// A triple (k, m, n) with k + m = n and signs (a, b, c) in {-,+}^3 is
/// resonant when omega^a(k) + omega^b(m) = omega^c(n), where
/// omega^+-(n) = +-omega(n) and
///   omega(n)^2 = (|xi_h|^2 + F^2 xi_3^2) / (F^2 (|xi_h|^2 + xi_3^2)),
/// a ratio of rationals whenever a_i^2 and F^2 are rational.  The exact path
/// therefore decides membership with integer/rational arithmetic only.
///
/// Candidate vertical wavenumbers come from two polynomials in k_3:
///   - the closed-form degree-8 polynomial with coefficients A_0..A_8
///     (resonance_poly_coeffs, kept verbatim as displayed), and
///   - an elimination polynomial built directly from the squared eigenvalue
///     relation: with K2 = |xi_h(k)|^2 + xi_3(k)^2, X2 = |xi_h(k)|^2 + F^2
///     xi_3(k)^2 (and likewise M2/Y2 for m, N2/Z2 for n),
///       P_d = (Z2 K2 M2 - X2 M2 N2 - Y2 K2 N2)^2 - 4 X2 Y2 K2 M2 N2^2,
///     which vanishes at every solution of s_a omega(k) + s_b omega(m)
///     = s_c omega(n) for any sign choice (it is the standard two-squarings
///     elimination of sqrt(A) +- sqrt(B) +- sqrt(C) = 0).
/// Every candidate is then verified sign-consistently in exact rational
/// arithmetic and re-verified against the unsquared equation in quad-precision
/// floating point.  Squaring can only add spurious roots, never lose true
/// ones, so the verified output is exactly K*.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gsp/algebraic.hpp"
#include "gsp/lattice.hpp"
#include "gsp/polynomial.hpp"
#include "gsp/torus.hpp"

namespace gsp {

using Quad = boost::multiprecision::cpp_bin_float_quad;

/// omega(n) in double precision (the common eigenfrequency magnitude).
inline double omega_value(const TorusSpec& spec, const Int3& n) {
    const double kh2 = spec.kh2(n);
    const double x3 = spec.checked3(n[2]);
    const double denom = kh2 + x3 * x3;
    if (denom == 0.0) return 0.0;  // zero mode, unused
    return std::sqrt((kh2 + spec.F * spec.F * x3 * x3) / denom) / spec.F;
}

/// Exact omega(n)^2 as a rational; requires rational moduli carriers on the
/// torus (throws otherwise).  Returns 0 for the zero mode.
inline Rational omega_sq_rational(const TorusSpec& spec, const Int3& n) {
    if (n == Int3{0, 0, 0}) return Rational(0);
    const auto get = [](const std::optional<ExactValue>& v, const char* name) -> Rational {
        if (!v || v->kind != ExactValue::Kind::RationalKind)
            throw std::invalid_argument(
                std::string("omega_sq_rational: missing exact rational carrier ") + name);
        return v->rat;
    };
    const Rational kh2 = Rational(n[0]) * n[0] / get(spec.a1_sq, "a1^2") +
                         Rational(n[1]) * n[1] / get(spec.a2_sq, "a2^2");
    const Rational x3sq = Rational(n[2]) * n[2] / get(spec.a3_sq, "a3^2");
    const Rational F2 = get(spec.F_sq, "F^2");
    return (kh2 + F2 * x3sq) / (F2 * (kh2 + x3sq));
}

struct ResonantTriple {
    Int3 k{}, m{}, n{};
    int sa = 1, sb = 1, sc = 1;  // signs +-1

    friend bool operator==(const ResonantTriple& x, const ResonantTriple& y) {
        return x.k == y.k && x.m == y.m && x.n == y.n && x.sa == y.sa && x.sb == y.sb &&
               x.sc == y.sc;
    }
    friend bool operator<(const ResonantTriple& x, const ResonantTriple& y) {
        const auto key = [](const ResonantTriple& t) {
            return std::array<int, 12>{t.k[0], t.k[1], t.k[2], t.m[0], t.m[1], t.m[2],
                                       t.n[0], t.n[1], t.n[2], t.sa,   t.sb,   t.sc};
        };
        return key(x) < key(y);
    }
};

struct ResonantSet {
    enum class Certification { ExactRational, FloatTolerance };

    int N = 0;
    TorusSpec spec;
    Certification certification = Certification::FloatTolerance;
    double tol = 0.0;
    std::vector<ResonantTriple> triples;  // canonically sorted

    bool same_triples(const ResonantSet& other) const { return triples == other.triples; }

    /// Closure under (k,a) <-> (m,b): every triple's swap partner is present.
    bool closed_under_swap() const {
        for (const ResonantTriple& t : triples) {
            ResonantTriple s;
            s.k = t.m;
            s.m = t.k;
            s.n = t.n;
            s.sa = t.sb;
            s.sb = t.sa;
            s.sc = t.sc;
            if (!std::binary_search(triples.begin(), triples.end(), s)) return false;
        }
        return true;
    }
};

// ---------------------------------------------------------------------------
// Closed-form degree-8 resonance polynomial (coefficients kept verbatim).

/// Coefficients A_0..A_8 (ascending) of the resonance polynomial in k_3 for
/// given |k_h|^2, |m_h|^2 (checked squares), n_3, and F^2.
inline std::array<Rational, 9> resonance_poly_coeffs(const Rational& kh2, const Rational& mh2,
                                                     int n3_int, const Rational& F2) {
    if (F2 <= 0) throw std::invalid_argument("resonance_poly_coeffs: F^2 must be positive");
    if (kh2 < 0 || mh2 < 0)
        throw std::invalid_argument("resonance_poly_coeffs: squared inputs must be nonnegative");
    const Rational n3(n3_int);
    const Rational n3sq = n3 * n3;
    const Rational n3q = n3sq * n3sq;
    const Rational kh4 = kh2 * kh2, mh4 = mh2 * mh2;
    const Rational F4 = F2 * F2;
    const Rational c1 = 1 - 4 * F2;       // (1 - 4F^2)
    const Rational c2 = 3 + 2 * F2 + F4;  // (3 + 2F^2 + F^4)
    const Rational c3 = F2 * (F2 - 4);    // F^2(-4 + F^2)
    std::array<Rational, 9> A;
    A[8] = c1;
    A[7] = -4 * c1 * n3;
    A[6] = -6 * (F2 * kh2 + F2 * mh2 - c1 * n3sq);
    A[5] = 4 * n3 * (6 * F2 * kh2 + 3 * F2 * mh2 - c1 * n3sq);
    A[4] = -(c3 * kh4 + c3 * mh4 - 6 * F2 * mh2 * n3sq + c1 * n3q -
             2 * kh2 * (c2 * mh2 + 18 * F2 * n3sq));
    A[3] = 4 * kh2 * n3 * (-c3 * kh2 + c2 * mh2 + 6 * F2 * n3sq);
    A[2] = -2 * kh2 *
           ((2 + F2) * mh4 + c2 * mh2 * n3sq + 3 * F2 * n3q +
            kh2 * ((2 + F2) * mh2 - 3 * c3 * n3sq));
    A[1] = 4 * kh4 * n3 * ((2 + F2) * mh2 - c3 * n3sq);
    A[0] = -kh4 * (3 * mh4 + 2 * (2 + F2) * mh2 * n3sq - c3 * n3q);
    return A;
}

/// Multiply rational coefficients by the lcm of their denominators; returns
/// integer coefficients plus the common denominator used.
inline std::pair<std::vector<BigInt>, BigInt> clear_denominators(
    const std::vector<Rational>& coeffs) {
    BigInt L = 1;
    for (const Rational& c : coeffs) {
        const BigInt d = boost::multiprecision::denominator(c);
        L = boost::multiprecision::lcm(L, d);
    }
    std::vector<BigInt> out(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const Rational v = coeffs[i] * Rational(L);
        out[i] = boost::multiprecision::numerator(v);  // denominator is 1
    }
    return {out, L};
}

// ---------------------------------------------------------------------------
// Horizontal-average resonance polynomial (verbatim display), in x = mu^2:
// (mu^4 + F^2 mu^2 m3^2 + k3^2(-(-2+F^2)mu^2 + m3^2))^2
//   - 4 (mu^2+k3^2)^2 (mu^2+m3^2) (mu^2+F^2 m3^2).

inline Poly<Rational> horizontal_avg_resonance_poly(int k3, int m3, const Rational& F2) {
    const Rational k2 = Rational(k3) * k3;
    const Rational m2 = Rational(m3) * m3;
    const Poly<Rational> lhs_root = {k2 * m2, F2 * m2 + (2 - F2) * k2, Rational(1)};
    const Poly<Rational> lhs = poly_mul(lhs_root, lhs_root);
    const Poly<Rational> f1 = {k2, Rational(1)};
    const Poly<Rational> f2 = {m2, Rational(1)};
    const Poly<Rational> f3 = {F2 * m2, Rational(1)};
    Poly<Rational> rhs = poly_mul(poly_mul(f1, f1), poly_mul(f2, f3));
    for (Rational& c : rhs) c *= 4;
    return poly_sub(lhs, rhs);
}

// ---------------------------------------------------------------------------
// Exact decision for s_a sqrt(A) + s_b sqrt(B) = s_c sqrt(C), A,B,C rational > 0.

inline bool exact_sqrt_sum_check(const Rational& A, const Rational& B, const Rational& C,
                                 int sa, int sb, int sc) {
    const Rational D = C - A - B;
    if (D == 0) return false;  // would force AB = 0, impossible for A,B > 0
    if ((D > 0) != (sa * sb > 0)) return false;
    if (D * D != 4 * A * B) return false;
    // Sign of s_a sqrt(A) + s_b sqrt(B): equal signs give that sign; mixed
    // signs give the sign attached to the larger of A, B (A == B sums to zero,
    // which cannot equal s_c sqrt(C) since C > 0).
    int lhs_sign;
    if (sa == sb) lhs_sign = sa;
    else if (A > B) lhs_sign = sa;
    else if (B > A) lhs_sign = sb;
    else return false;
    return lhs_sign == sc;
}

// ---------------------------------------------------------------------------
// Float enumeration.

inline ResonantSet enumerate_resonances_float(const TorusSpec& spec, int N, double tol) {
    if (tol <= 0) throw std::invalid_argument("enumerate_resonances_float: tol must be > 0");
    FreqLattice lat(N);
    std::vector<double> om(lat.size(), 0.0);
    lat.for_each([&](std::size_t idx, const Int3& n) { om[idx] = omega_value(spec, n); });

    ResonantSet set;
    set.N = N;
    set.spec = spec;
    set.certification = ResonantSet::Certification::FloatTolerance;
    set.tol = tol;

    lat.for_each([&](std::size_t ki, const Int3& k) {
        if (k == Int3{0, 0, 0}) return;
        const double wk = om[ki];
        lat.for_each([&](std::size_t mi, const Int3& m) {
            if (m == Int3{0, 0, 0}) return;
            const Int3 n = {k[0] + m[0], k[1] + m[1], k[2] + m[2]};
            if (!lat.contains(n) || n == Int3{0, 0, 0}) return;
            const double wm = om[mi];
            const double wn = om[lat.index(n)];
            for (int sa : {-1, 1})
                for (int sb : {-1, 1})
                    for (int sc : {-1, 1})
                        if (std::abs(sa * wk + sb * wm - sc * wn) < tol)
                            set.triples.push_back({k, m, n, sa, sb, sc});
        });
    });
    std::sort(set.triples.begin(), set.triples.end());
    return set;
}

// ---------------------------------------------------------------------------
// Exact enumeration.

namespace detail {

struct RationalCarriers {
    Rational a1_sq, a2_sq, a3_sq, F2;
};

inline RationalCarriers require_rational_carriers(const TorusSpec& s) {
    const auto get = [](const std::optional<ExactValue>& v, const char* name) -> Rational {
        if (!v || v->kind != ExactValue::Kind::RationalKind)
            throw std::invalid_argument(
                std::string("enumerate_resonances_exact: missing exact rational carrier ") +
                name);
        if (v->rat <= 0)
            throw std::invalid_argument(std::string("exact carrier must be positive: ") + name);
        return v->rat;
    };
    return {get(s.a1_sq, "a1^2"), get(s.a2_sq, "a2^2"), get(s.a3_sq, "a3^2"),
            get(s.F_sq, "F^2")};
}

/// Scaled elimination polynomial in k3 (integer coefficients, ascending).
/// ck, cm, cn are D*|xi_h|^2 for k, m, n; d3 = D/a3^2; G = gp/gq.
/// The uniform scaling (D for K2/M2/N2, D*gq for X2/Y2/Z2) multiplies P_d by
/// a positive constant and preserves roots.
template <class T>
Poly<T> build_elimination_poly(const T& ck, const T& cm, const T& cn, const T& d3,
                               const T& gp, const T& gq, int n3) {
    const T n3t(n3);
    const Poly<T> KK = {ck, T(0), d3};
    const Poly<T> MM = {cm + d3 * n3t * n3t, T(-2) * d3 * n3t, d3};
    const T NN = cn + d3 * n3t * n3t;
    const Poly<T> XX = {gq * ck, T(0), gp * d3};
    const Poly<T> YY = {gq * cm + gp * d3 * n3t * n3t, T(-2) * gp * d3 * n3t, gp * d3};
    const T ZZ = gq * cn + gp * d3 * n3t * n3t;

    const Poly<T> KM = poly_mul(KK, MM);
    Poly<T> S = poly_scale(KM, ZZ);
    S = poly_sub(S, poly_scale(poly_add(poly_mul(XX, MM), poly_mul(YY, KK)), NN));
    Poly<T> P = poly_mul(S, S);
    Poly<T> second = poly_mul(poly_mul(XX, YY), KM);
    P = poly_sub(P, poly_scale(second, T(4) * NN * NN));
    poly_trim(P);
    return P;
}

template <class T>
std::vector<double> poly_to_double(const Poly<T>& p) {
    std::vector<double> d(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) d[i] = static_cast<double>(p[i]);
    return d;
}

/// Mark integer roots |k3| <= N of p, clipped further by the Fujiwara bound.
/// An identically zero polynomial admits every k3 (degenerate tuple).
template <class T>
void mark_integer_roots(const Poly<T>& p, int N, std::vector<char>& candidate) {
    if (poly_degree(p) < 0) {
        std::fill(candidate.begin(), candidate.end(), char(1));
        return;
    }
    const double bound = fujiwara_bound(poly_to_double(p));
    const int lim = std::min<double>(N, std::floor(bound + 1e-9));
    for (int k3 = -lim; k3 <= lim; ++k3)
        if (poly_eval(p, T(k3)) == T(0)) candidate[k3 + N] = 1;
}

}  // namespace detail

inline ResonantSet enumerate_resonances_exact(const TorusSpec& spec, int N) {
    using detail::RationalCarriers;
    const RationalCarriers rc = detail::require_rational_carriers(spec);
    const Rational inv1 = 1 / rc.a1_sq, inv2 = 1 / rc.a2_sq, inv3 = 1 / rc.a3_sq;

    namespace mp = boost::multiprecision;
    const BigInt D = mp::lcm(mp::lcm(mp::denominator(inv1), mp::denominator(inv2)),
                             mp::denominator(inv3));
    const BigInt w1 = (D / mp::denominator(inv1)) * mp::numerator(inv1);
    const BigInt w2 = (D / mp::denominator(inv2)) * mp::numerator(inv2);
    const BigInt d3 = (D / mp::denominator(inv3)) * mp::numerator(inv3);
    const BigInt gp = mp::numerator(rc.F2), gq = mp::denominator(rc.F2);

    FreqLattice lat(N);

    // Exact omega^2 and quad-precision omega caches.
    std::vector<Rational> osq(lat.size(), Rational(0));
    std::vector<Quad> oq(lat.size(), Quad(0));
    {
        const Quad i1 = static_cast<Quad>(inv1), i2 = static_cast<Quad>(inv2),
                   i3 = static_cast<Quad>(inv3), f2 = static_cast<Quad>(rc.F2);
        lat.for_each([&](std::size_t idx, const Int3& n) {
            if (n == Int3{0, 0, 0}) return;
            const Rational kh2 = Rational(n[0]) * n[0] * inv1 + Rational(n[1]) * n[1] * inv2;
            const Rational x3sq = Rational(n[2]) * n[2] * inv3;
            osq[idx] = (kh2 + rc.F2 * x3sq) / (rc.F2 * (kh2 + x3sq));
            const Quad kh2q = Quad(n[0]) * n[0] * i1 + Quad(n[1]) * n[1] * i2;
            const Quad x3q = Quad(n[2]) * n[2] * i3;
            oq[idx] = sqrt((kh2q + f2 * x3q) / (f2 * (kh2q + x3q)));
        });
    }

    // Integer-path overflow guard: with base constants below ~1e10 every
    // intermediate of the degree-8 build and its Horner evaluation at
    // |k3| <= N fits comfortably in 256 bits (worst case ~5e2 * M^6 * 9*N^8).
    const BigInt base_max =
        std::max<BigInt>({abs(w1), abs(w2), abs(d3), abs(gp), abs(gq)}) *
        (BigInt(2) * N * N + 1);
    const bool use_i256 = base_max * std::max<BigInt>(gq, gp) < BigInt(10000000000LL) && N <= 16;

    ResonantSet set;
    set.N = N;
    set.spec = spec;
    set.certification = ResonantSet::Certification::ExactRational;
    set.tol = 0.0;

    // Cache of printed-polynomial data keyed by (|k1|,|k2|,|m1|,|m2|,n3).
    struct PrintedEntry {
        std::vector<BigInt> ci;  // cleared integer coefficients
        double bound = 0.0;
        bool zero = false;
    };
    std::unordered_map<long long, PrintedEntry> printed_cache;
    const auto printed_key = [N](int ak1, int ak2, int am1, int am2, int n3) {
        long long key = ak1;
        key = key * (N + 1) + ak2;
        key = key * (N + 1) + am1;
        key = key * (N + 1) + am2;
        key = key * (2 * N + 1) + (n3 + N);
        return key;
    };

    std::vector<char> candidate(2 * N + 1, 0);
    const Quad tol_quad("1e-12");

    for (int k1 = -N; k1 <= N; ++k1)
        for (int k2 = -N; k2 <= N; ++k2) {
            const BigInt ck = BigInt(k1) * k1 * w1 + BigInt(k2) * k2 * w2;
            const Rational kh2_k = Rational(k1) * k1 * inv1 + Rational(k2) * k2 * inv2;
            for (int m1 = std::max(-N, -N - k1); m1 <= std::min(N, N - k1); ++m1)
                for (int m2 = std::max(-N, -N - k2); m2 <= std::min(N, N - k2); ++m2) {
                    const int n1 = k1 + m1, n2 = k2 + m2;
                    const BigInt cm = BigInt(m1) * m1 * w1 + BigInt(m2) * m2 * w2;
                    const BigInt cn = BigInt(n1) * n1 * w1 + BigInt(n2) * n2 * w2;
                    const Rational kh2_m =
                        Rational(m1) * m1 * inv1 + Rational(m2) * m2 * inv2;
                    for (int n3 = -N; n3 <= N; ++n3) {
                        std::fill(candidate.begin(), candidate.end(), char(0));
                        // Candidates from the elimination polynomial.
                        if (use_i256) {
                            const auto P = detail::build_elimination_poly<Int256>(
                                static_cast<Int256>(ck), static_cast<Int256>(cm),
                                static_cast<Int256>(cn), static_cast<Int256>(d3),
                                static_cast<Int256>(gp), static_cast<Int256>(gq), n3);
                            detail::mark_integer_roots(P, N, candidate);
                        } else {
                            const auto P = detail::build_elimination_poly<BigInt>(
                                ck, cm, cn, d3, gp, gq, n3);
                            detail::mark_integer_roots(P, N, candidate);
                        }
                        // Candidates from the printed closed-form polynomial.
                        {
                            const long long key = printed_key(std::abs(k1), std::abs(k2),
                                                              std::abs(m1), std::abs(m2), n3);
                            auto it = printed_cache.find(key);
                            if (it == printed_cache.end()) {
                                const auto A =
                                    resonance_poly_coeffs(kh2_k, kh2_m, n3, rc.F2);
                                PrintedEntry e;
                                auto cleared = clear_denominators(
                                    std::vector<Rational>(A.begin(), A.end()));
                                e.ci = std::move(cleared.first);
                                std::vector<double> dc(9);
                                for (int i = 0; i < 9; ++i) dc[i] = to_double(A[i]);
                                e.zero = poly_degree(e.ci) < 0;
                                e.bound = e.zero ? 0.0 : fujiwara_bound(dc);
                                it = printed_cache.emplace(key, std::move(e)).first;
                            }
                            const PrintedEntry& e = it->second;
                            if (e.zero) {
                                std::fill(candidate.begin(), candidate.end(), char(1));
                            } else {
                                const int lim =
                                    std::min<double>(N, std::floor(e.bound + 1e-9));
                                for (int k3 = -lim; k3 <= lim; ++k3)
                                    if (poly_eval(e.ci, BigInt(k3)) == 0)
                                        candidate[k3 + N] = 1;
                            }
                        }
                        // Exact verification of each candidate.
                        for (int k3 = -N; k3 <= N; ++k3) {
                            if (!candidate[k3 + N]) continue;
                            const int m3 = n3 - k3;
                            if (m3 < -N || m3 > N) continue;
                            const Int3 k = {k1, k2, k3};
                            const Int3 m = {m1, m2, m3};
                            const Int3 n = {n1, n2, n3};
                            if (k == Int3{0, 0, 0} || m == Int3{0, 0, 0} ||
                                n == Int3{0, 0, 0})
                                continue;
                            const Rational& A = osq[lat.index(k)];
                            const Rational& B = osq[lat.index(m)];
                            const Rational& C = osq[lat.index(n)];
                            const Quad wk = oq[lat.index(k)], wm = oq[lat.index(m)],
                                       wn = oq[lat.index(n)];
                            for (int sa : {-1, 1})
                                for (int sb : {-1, 1})
                                    for (int sc : {-1, 1}) {
                                        if (!exact_sqrt_sum_check(A, B, C, sa, sb, sc))
                                            continue;
                                        if (abs(sa * wk + sb * wm - sc * wn) > tol_quad)
                                            continue;  // spurious-root guard
                                        set.triples.push_back({k, m, n, sa, sb, sc});
                                    }
                        }
                    }
                }
        }
    std::sort(set.triples.begin(), set.triples.end());
    return set;
}

// ---------------------------------------------------------------------------
// Gap histogram.

struct GapHistogram {
    // bins[i] counts triples with min-over-signs gap in [10^(i-14), 10^(i-13)),
    // i = 0..16; bins[17] collects gaps >= 1e3.
    std::array<std::size_t, 18> bins{};
    double min_nonzero_gap = std::numeric_limits<double>::infinity();
    std::size_t total = 0;           ///< admissible (k, m, n) triples examined
    std::size_t resonant_count = 0;  ///< triples with some gap < 1e-12
};

inline GapHistogram resonance_gap_histogram(const TorusSpec& spec, int N) {
    if (N > 10)
        throw std::invalid_argument("resonance_gap_histogram: cost guard N <= 10 exceeded");
    FreqLattice lat(N);
    std::vector<double> om(lat.size(), 0.0);
    lat.for_each([&](std::size_t idx, const Int3& n) { om[idx] = omega_value(spec, n); });

    GapHistogram h;
    lat.for_each([&](std::size_t ki, const Int3& k) {
        if (k == Int3{0, 0, 0}) return;
        lat.for_each([&](std::size_t mi, const Int3& m) {
            if (m == Int3{0, 0, 0}) return;
            const Int3 n = {k[0] + m[0], k[1] + m[1], k[2] + m[2]};
            if (!lat.contains(n) || n == Int3{0, 0, 0}) return;
            const double wn = om[lat.index(n)];
            double gap = std::numeric_limits<double>::infinity();
            for (int sa : {-1, 1})
                for (int sb : {-1, 1})
                    for (int sc : {-1, 1})
                        gap = std::min(gap,
                                       std::abs(sa * om[ki] + sb * om[mi] - sc * wn));
            ++h.total;
            if (gap < 1e-12) {
                ++h.resonant_count;
            } else {
                h.min_nonzero_gap = std::min(h.min_nonzero_gap, gap);
            }
            int bin;
            if (gap <= 0.0) bin = 0;
            else bin = static_cast<int>(std::floor(std::log10(gap))) + 14;
            bin = std::clamp(bin, 0, 17);
            ++h.bins[static_cast<std::size_t>(bin)];
        });
    });
    return h;
}

// ---------------------------------------------------------------------------
// Condition (P).

struct ConditionPInputs {
    ExactValue r31;  ///< a3^2 / a1^2
    ExactValue r32;  ///< a3^2 / a2^2
    ExactValue F2;   ///< F^2
};

enum class ConditionPVerdict {
    HoldsByPart2,
    ResonanceFreeUpToN,
    FailsPart2AndResonantBelowN,
    Undetermined,
};

inline const char* to_string(ConditionPVerdict v) {
    switch (v) {
        case ConditionPVerdict::HoldsByPart2: return "holds-by-part-2";
        case ConditionPVerdict::ResonanceFreeUpToN: return "resonance-free-up-to-N";
        case ConditionPVerdict::FailsPart2AndResonantBelowN:
            return "fails-part-2-and-resonant-below-N";
        case ConditionPVerdict::Undetermined: return "undetermined";
    }
    return "?";
}

struct ConditionPReport {
    ConditionPVerdict verdict = ConditionPVerdict::Undetermined;
    Tri part2 = Tri::Unknown;
    bool enumeration_ran = false;
    std::size_t resonant_count = 0;
    int N_cert = 0;
    TorusSpec probe;  ///< torus used for the float certification (a3 = 1 gauge)
    std::string detail;
};

/// Decide condition (P): either the torus is non-resonant (certified here only
/// up to N_cert by float enumeration), or F^2 is rational and one side ratio
/// is rational while the other is algebraic of degree > 4.
inline ConditionPReport check_condition_P(const ConditionPInputs& in, int N_cert) {
    ConditionPReport rep;
    rep.N_cert = N_cert;

    // Validate algebraic inputs once (throws on malformed input).
    const auto validate = [](const ExactValue& v,
                             const char* name) -> std::optional<AlgebraicValidation> {
        if (v.kind != ExactValue::Kind::AlgebraicKind) return std::nullopt;
        AlgebraicValidation val = validate_algebraic(v.alg);
        if (!val.valid)
            throw std::invalid_argument(std::string("condition (P): malformed input ") + name +
                                        ": " + val.message);
        return val;
    };
    const auto v31 = validate(in.r31, "a3^2/a1^2");
    const auto v32 = validate(in.r32, "a3^2/a2^2");
    const auto vF2 = validate(in.F2, "F^2");

    const Tri f2_rat = is_rational_value(in.F2, vF2 ? &*vF2 : nullptr);
    const Tri r31_rat = is_rational_value(in.r31, v31 ? &*v31 : nullptr);
    const Tri r32_rat = is_rational_value(in.r32, v32 ? &*v32 : nullptr);
    const Tri r31_gt4 = algebraic_degree_gt4(in.r31, v31 ? &*v31 : nullptr);
    const Tri r32_gt4 = algebraic_degree_gt4(in.r32, v32 ? &*v32 : nullptr);

    rep.part2 = tri_and(f2_rat, tri_or(tri_and(r31_rat, r32_gt4), tri_and(r32_rat, r31_gt4)));

    if (rep.part2 == Tri::True) {
        rep.verdict = ConditionPVerdict::HoldsByPart2;
        rep.detail = "algebraic clause established (rational F^2, one ratio rational, "
                     "other of certified degree > 4)";
        return rep;
    }

    // Float certification of part 1 on the a3 = 1 gauge torus (resonance
    // depends only on the side ratios).
    const double r31d = in.r31.approx(), r32d = in.r32.approx(), F2d = in.F2.approx();
    if (!(r31d > 0) || !(r32d > 0) || !(F2d > 0))
        throw std::invalid_argument("condition (P): ratios and F^2 must be positive");
    rep.probe.a1 = 1.0 / std::sqrt(r31d);
    rep.probe.a2 = 1.0 / std::sqrt(r32d);
    rep.probe.a3 = 1.0;
    rep.probe.F = std::sqrt(F2d);

    const ResonantSet found = enumerate_resonances_float(rep.probe, N_cert, 1e-9);
    rep.enumeration_ran = true;
    rep.resonant_count = found.triples.size();

    if (found.triples.empty()) {
        rep.verdict = ConditionPVerdict::ResonanceFreeUpToN;
        rep.detail = "no resonances found up to N = " + std::to_string(N_cert) +
                     " (float certification, tol 1e-9)";
    } else if (rep.part2 == Tri::False) {
        rep.verdict = ConditionPVerdict::FailsPart2AndResonantBelowN;
        rep.detail = "algebraic clause decidably fails and " +
                     std::to_string(found.triples.size()) + " resonant triples exist below N";
    } else {
        rep.verdict = ConditionPVerdict::Undetermined;
        rep.detail = "resonances found but the algebraic clause could not be decided "
                     "(irreducibility not certified)";
    }
    return rep;
}

}  // namespace gsp
