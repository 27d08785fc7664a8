#pragma once

/// Anisotropic torus description: T^3 = prod_i [0, 2*pi*a_i), Froude number F,
/// horizontal viscosities nu_h (velocity) and nu_h' (temperature).  Vertical
/// viscosities are identically zero.  Optional exact-arithmetic carriers for
/// a_i^2 and F^2 feed the exact resonance machinery.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "gsp/exact.hpp"

namespace gsp {

using Int3 = std::array<int, 3>;

struct TorusSpec {
    double a1 = 1.0, a2 = 1.0, a3 = 1.0;  ///< half-period scales, a_i > 0
    double F = 2.0;                        ///< Froude number, F > 0
    double nu_h = 1.0;                     ///< horizontal viscosity (velocity)
    double nu_h_prime = 1.0;               ///< horizontal diffusivity (temperature)

    /// Optional exact carriers; when present they must match the float values.
    std::optional<ExactValue> a1_sq, a2_sq, a3_sq, F_sq;

    void validate() const {
        if (!(a1 > 0.0 && a2 > 0.0 && a3 > 0.0))
            throw std::invalid_argument("TorusSpec: a_i must be positive");
        if (!(F > 0.0))
            throw std::invalid_argument("TorusSpec: F must be positive");
        if (!(nu_h > 0.0 && nu_h_prime > 0.0))
            throw std::invalid_argument("TorusSpec: viscosities must be positive");
        check_exact(a1_sq, a1 * a1, "a1^2");
        check_exact(a2_sq, a2 * a2, "a2^2");
        check_exact(a3_sq, a3 * a3, "a3^2");
        check_exact(F_sq, F * F, "F^2");
    }

    /// Checked wavenumber, componentwise n_i / a_i.
    std::array<double, 3> checked(const Int3& n) const {
        return {n[0] / a1, n[1] / a2, n[2] / a3};
    }
    double checked1(int n1) const { return n1 / a1; }
    double checked2(int n2) const { return n2 / a2; }
    double checked3(int n3) const { return n3 / a3; }

    /// |n_check_h|^2 and |n_check|^2 and the F-weighted square |n_check|_F^2.
    double kh2(const Int3& n) const {
        const double x = n[0] / a1, y = n[1] / a2;
        return x * x + y * y;
    }
    double k2(const Int3& n) const {
        const double z = n[2] / a3;
        return kh2(n) + z * z;
    }
    double kF2(const Int3& n) const {
        const double z = n[2] / a3;
        return kh2(n) + F * F * z * z;
    }

    /// True if exact rational carriers for all of a_i^2 and F^2 are present.
    bool has_rational_moduli() const {
        return is_rat(a1_sq) && is_rat(a2_sq) && is_rat(a3_sq) && is_rat(F_sq);
    }

    /// Convenience: build with rational moduli consistent across float/exact.
    static TorusSpec with_rational(const Rational& a1s, const Rational& a2s,
                                   const Rational& a3s, const Rational& Fs,
                                   double nu_h_ = 1.0, double nu_h_prime_ = 1.0) {
        TorusSpec t;
        t.a1 = std::sqrt(static_cast<double>(a1s));
        t.a2 = std::sqrt(static_cast<double>(a2s));
        t.a3 = std::sqrt(static_cast<double>(a3s));
        t.F = std::sqrt(static_cast<double>(Fs));
        t.nu_h = nu_h_;
        t.nu_h_prime = nu_h_prime_;
        t.a1_sq = ExactValue::rational(a1s);
        t.a2_sq = ExactValue::rational(a2s);
        t.a3_sq = ExactValue::rational(a3s);
        t.F_sq = ExactValue::rational(Fs);
        t.validate();
        return t;
    }

  private:
    static bool is_rat(const std::optional<ExactValue>& v) {
        return v && v->kind == ExactValue::Kind::RationalKind;
    }
    static void check_exact(const std::optional<ExactValue>& v, double target,
                            const char* what) {
        if (!v) return;
        const double approx = v->approx();
        if (std::abs(approx - target) > 1e-12 * std::max(1.0, std::abs(target)))
            throw std::invalid_argument(std::string("TorusSpec: exact carrier for ") +
                                        what + " inconsistent with float value");
    }
};

}  // namespace gsp
