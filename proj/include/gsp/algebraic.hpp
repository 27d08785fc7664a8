#pragma once

/// Certification machinery for algebraic-number inputs:
///   - isolating-interval validation via exact Sturm counting,
///   - squarefreeness (a repeated factor disqualifies a claimed minimal
///     polynomial immediately),
///   - bounded rational-root detection (a found root of a degree >= 2 input
///     proves reducibility),
///   - an irreducibility certificate over Q by exhibiting a prime p such that
///     the polynomial stays irreducible over F_p (distinct-degree criterion).
///
/// The certificate is sound but not complete: some irreducible polynomials
/// are reducible modulo every prime.  Callers treat "not certified" as
/// "degree unknown beyond the obvious upper bound".

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "gsp/exact.hpp"
#include "gsp/polynomial.hpp"

namespace gsp {

namespace modp {

using u64 = std::uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 p) { return (a * b) % p; }  // p < 2^31

inline u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

using PolyP = std::vector<u64>;  // ascending, entries in [0, p)

inline void trim(PolyP& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int deg(const PolyP& f) { return static_cast<int>(f.size()) - 1; }

inline PolyP mul(const PolyP& a, const PolyP& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    PolyP r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    trim(r);
    return r;
}

/// Remainder of a modulo monic-normalized f.
inline PolyP rem(PolyP a, const PolyP& f, u64 p) {
    trim(a);
    const int df = deg(f);
    const u64 inv_lead = invmod(f[df], p);
    while (deg(a) >= df) {
        const int da = deg(a);
        const u64 q = mulmod(a[da], inv_lead, p);
        for (int i = 0; i <= df; ++i) {
            u64 sub = mulmod(q, f[i], p);
            a[da - df + i] = (a[da - df + i] + p - sub) % p;
        }
        trim(a);
    }
    return a;
}

inline PolyP mulmod_poly(const PolyP& a, const PolyP& b, const PolyP& f, u64 p) {
    return rem(mul(a, b, p), f, p);
}

inline PolyP powmod_poly(PolyP base, u64 e, const PolyP& f, u64 p) {
    PolyP r = {1};
    base = rem(std::move(base), f, p);
    while (e) {
        if (e & 1) r = mulmod_poly(r, base, f, p);
        base = mulmod_poly(base, base, f, p);
        e >>= 1;
    }
    return r;
}

inline PolyP gcd(PolyP a, PolyP b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        PolyP r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    // monic-normalize
    if (!a.empty()) {
        const u64 inv = invmod(a.back(), p);
        for (u64& c : a) c = mulmod(c, inv, p);
    }
    return a;
}

/// Irreducibility of f over F_p (f of degree d >= 1, leading coeff != 0 mod p):
/// x^{p^d} == x (mod f) and gcd(x^{p^{d/q}} - x, f) = 1 for every prime q | d.
inline bool irreducible_mod_p(const PolyP& f, u64 p) {
    const int d = deg(f);
    if (d < 1) return false;
    if (d == 1) return true;
    // Frobenius iterates g_j = x^{p^j} mod f.
    std::vector<PolyP> frob(d + 1);
    frob[0] = {0, 1};  // x
    for (int j = 1; j <= d; ++j) frob[j] = powmod_poly(frob[j - 1], p, f, p);
    // x^{p^d} == x?
    PolyP diff = frob[d];
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (!diff.empty()) return false;
    // prime divisors of d
    int dd = d;
    for (int q = 2; q * q <= dd; ++q) {
        if (dd % q) continue;
        while (dd % q == 0) dd /= q;
        PolyP g = frob[d / q];
        if (g.size() < 2) g.resize(2, 0);
        g[1] = (g[1] + p - 1) % p;
        trim(g);
        if (deg(gcd(g, f, p)) != 0) return false;
    }
    if (dd > 1) {  // remaining prime factor
        PolyP g = frob[d / dd];
        if (g.size() < 2) g.resize(2, 0);
        g[1] = (g[1] + p - 1) % p;
        trim(g);
        if (deg(gcd(g, f, p)) != 0) return false;
    }
    return true;
}

inline std::vector<u64> primes_up_to(u64 limit) {
    std::vector<bool> sieve(limit + 1, true);
    std::vector<u64> out;
    for (u64 i = 2; i <= limit; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) sieve[j] = false;
    }
    return out;
}

}  // namespace modp

struct AlgebraicValidation {
    bool valid = false;                 ///< well-formed: squarefree + isolating interval OK
    bool irreducible_certified = false; ///< some prime certified irreducibility over Q
    int certifying_prime = 0;
    std::string message;
};

namespace detail {

/// Small divisors of |v| (trial division by primes <= 1000, plus |v| itself),
/// used for the bounded rational-root search.
inline std::vector<BigInt> small_divisors(BigInt v, std::size_t cap = 4096) {
    if (v < 0) v = -v;
    std::vector<BigInt> divs = {1};
    if (v == 0) return divs;
    static const std::vector<modp::u64> primes = modp::primes_up_to(1000);
    std::vector<std::pair<BigInt, int>> fact;
    for (modp::u64 p : primes) {
        int e = 0;
        while (v % p == 0) { v /= p; ++e; }
        if (e) fact.emplace_back(BigInt(p), e);
    }
    if (v > 1) fact.emplace_back(v, 1);  // large cofactor (may be composite; still a divisor source)
    for (const auto& [p, e] : fact) {
        const std::size_t base = divs.size();
        BigInt pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) {
                divs.push_back(divs[i] * pk);
                if (divs.size() >= cap) return divs;
            }
        }
    }
    return divs;
}

}  // namespace detail

/// Full validation of an AlgebraicNumber input.
inline AlgebraicValidation validate_algebraic(const AlgebraicNumber& a) {
    AlgebraicValidation out;
    std::vector<BigInt> c = a.minpoly;
    while (!c.empty() && c.back() == 0) c.pop_back();
    const int d = static_cast<int>(c.size()) - 1;
    if (d < 1) {
        out.message = "minimal polynomial must have degree >= 1";
        return out;
    }
    if (!(a.lo < a.hi)) {
        out.message = "isolating interval is empty";
        return out;
    }

    Poly<Rational> p(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) p[i] = Rational(c[i]);

    // Squarefreeness: the Sturm chain of a squarefree polynomial ends in a
    // nonzero constant; a higher-degree tail is (up to sign) gcd(p, p').
    const auto chain = sturm_sequence(p);
    if (chain.empty() || poly_degree(chain.back()) > 0) {
        out.message = "polynomial has a repeated factor (not squarefree, hence not minimal)";
        return out;
    }

    // Endpoints must not be roots (a rational root would make the number
    // rational; callers use the rational kind for that).
    if (poly_eval(p, a.lo) == 0 || poly_eval(p, a.hi) == 0) {
        out.message = "isolating interval endpoint is a root";
        return out;
    }
    const int nroots = sturm_count_roots(chain, a.lo, a.hi);
    if (nroots != 1) {
        out.message = "isolating interval contains " + std::to_string(nroots) +
                      " roots (need exactly 1)";
        return out;
    }

    // Bounded rational-root search: p/q with p | c_0, q | c_d.
    if (d >= 2 && c[0] != 0) {
        const auto ps = detail::small_divisors(c[0]);
        const auto qs = detail::small_divisors(c[d]);
        for (const BigInt& num : ps) {
            for (const BigInt& den : qs) {
                const Rational r(num, den);
                if (poly_eval(p, r) == 0 || poly_eval(p, Rational(-r)) == 0) {
                    out.message = "reducible: rational root found";
                    return out;
                }
            }
        }
    } else if (d >= 2 && c[0] == 0) {
        out.message = "reducible: zero constant term (root x = 0)";
        return out;
    }

    out.valid = true;

    if (d == 1) {
        out.irreducible_certified = true;  // linear polynomials are irreducible
        return out;
    }

    // Irreducibility certificate: find p with lead != 0 mod p and f irreducible
    // over F_p.
    static const std::vector<modp::u64> primes = modp::primes_up_to(997);
    for (modp::u64 prime : primes) {
        if (c[d] % prime == 0) continue;
        modp::PolyP f(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            BigInt r = c[i] % prime;
            if (r < 0) r += prime;
            f[i] = static_cast<modp::u64>(r);
        }
        if (modp::irreducible_mod_p(f, prime)) {
            out.irreducible_certified = true;
            out.certifying_prime = static_cast<int>(prime);
            return out;
        }
    }
    out.message = "well-formed, but irreducibility not certified by any prime <= 997";
    return out;
}

/// Tri-state logic used by the condition-(P) decision.
enum class Tri { False, True, Unknown };

inline Tri tri_and(Tri a, Tri b) {
    if (a == Tri::False || b == Tri::False) return Tri::False;
    if (a == Tri::True && b == Tri::True) return Tri::True;
    return Tri::Unknown;
}

inline Tri tri_or(Tri a, Tri b) {
    if (a == Tri::True || b == Tri::True) return Tri::True;
    if (a == Tri::False && b == Tri::False) return Tri::False;
    return Tri::Unknown;
}

/// Is the exact value a rational number?  Rational kind: yes.  Algebraic kind
/// with a certified-irreducible minpoly of degree >= 2: no.  Otherwise unknown
/// (the claimed minpoly might factor with a rational root we did not find).
inline Tri is_rational_value(const ExactValue& v, const AlgebraicValidation* preval = nullptr) {
    if (v.kind == ExactValue::Kind::RationalKind) return Tri::True;
    AlgebraicValidation val = preval ? *preval : validate_algebraic(v.alg);
    if (!val.valid) throw std::invalid_argument("malformed algebraic input: " + val.message);
    int d = v.alg.degree();
    if (d == 1) return Tri::True;  // linear minpoly encodes a rational
    return val.irreducible_certified ? Tri::False : Tri::Unknown;
}

/// Is the algebraic degree of the value > 4?  A supplied polynomial of degree
/// <= 4 bounds the true degree from above (False, decidable without any
/// certificate); degree >= 5 needs the irreducibility certificate for True.
inline Tri algebraic_degree_gt4(const ExactValue& v, const AlgebraicValidation* preval = nullptr) {
    if (v.kind == ExactValue::Kind::RationalKind) return Tri::False;  // degree 1
    AlgebraicValidation val = preval ? *preval : validate_algebraic(v.alg);
    if (!val.valid) throw std::invalid_argument("malformed algebraic input: " + val.message);
    const int d = v.alg.degree();
    if (d <= 4) return Tri::False;
    return val.irreducible_certified ? Tri::True : Tri::Unknown;
}

}  // namespace gsp
