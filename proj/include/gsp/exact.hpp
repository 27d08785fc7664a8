#pragma once

/// Exact-arithmetic value carriers: rationals and algebraic numbers given by
/// an integer-coefficient minimal polynomial plus an isolating interval.
/// These are plain data here; the certification machinery (irreducibility,
/// Sturm isolation) lives in algebraic.hpp.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gsp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Int256 = boost::multiprecision::int256_t;

inline double to_double(const Rational& r) { return static_cast<double>(r); }

/// Algebraic number: root of minpoly (integer coefficients, ascending order,
/// minpoly[deg] != 0) isolated inside [lo, hi] (rational endpoints).
struct AlgebraicNumber {
    std::vector<BigInt> minpoly;  ///< c_0 + c_1 x + ... + c_d x^d
    Rational lo, hi;              ///< isolating interval, lo <= root <= hi

    int degree() const { return static_cast<int>(minpoly.size()) - 1; }

    /// Numeric approximation by interval bisection on the sign change.
    double approx() const {
        Rational a = lo, b = hi;
        const Rational fa = eval(a);
        if (fa == 0) return static_cast<double>(a);
        if (eval(b) == 0) return static_cast<double>(b);
        const bool neg_at_a = fa < 0;
        for (int it = 0; it < 200; ++it) {
            const Rational mid = (a + b) / 2;
            const Rational fm = eval(mid);
            if (fm == 0) return static_cast<double>(mid);
            if ((fm < 0) == neg_at_a) a = mid; else b = mid;
            if (static_cast<double>(b - a) < 1e-17 * (1.0 + std::abs(static_cast<double>(a))))
                break;
        }
        return static_cast<double>((a + b) / 2);
    }

    Rational eval(const Rational& x) const {
        Rational v = 0;
        for (auto it = minpoly.rbegin(); it != minpoly.rend(); ++it)
            v = v * x + Rational(*it);
        return v;
    }
};

/// Tagged union of the two exact kinds.
struct ExactValue {
    enum class Kind { RationalKind, AlgebraicKind };
    Kind kind = Kind::RationalKind;
    Rational rat;
    AlgebraicNumber alg;

    static ExactValue rational(const Rational& r) {
        ExactValue v;
        v.kind = Kind::RationalKind;
        v.rat = r;
        return v;
    }
    static ExactValue algebraic(AlgebraicNumber a) {
        ExactValue v;
        v.kind = Kind::AlgebraicKind;
        v.alg = std::move(a);
        return v;
    }

    double approx() const {
        return kind == Kind::RationalKind ? to_double(rat) : alg.approx();
    }
};

}  // namespace gsp
