#pragma once

/// Dense univariate polynomial helpers (ascending coefficients a_0..a_n),
/// generic over the coefficient ring, plus the Fujiwara root bound, numeric
/// root finding via the companion matrix, and Sturm sequences over the
/// rationals for exact real-root counting.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "gsp/exact.hpp"

namespace gsp {

template <class T>
using Poly = std::vector<T>;  // p(x) = sum_i c[i] x^i

template <class T>
void poly_trim(Poly<T>& p) {
    while (!p.empty() && p.back() == T(0)) p.pop_back();
}

template <class T>
int poly_degree(const Poly<T>& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (!(p[i] == T(0))) return i;
    return -1;  // zero polynomial
}

template <class T>
Poly<T> poly_add(const Poly<T>& a, const Poly<T>& b) {
    Poly<T> r(std::max(a.size(), b.size()), T(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

template <class T>
Poly<T> poly_sub(const Poly<T>& a, const Poly<T>& b) {
    Poly<T> r(std::max(a.size(), b.size()), T(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return r;
}

template <class T>
Poly<T> poly_mul(const Poly<T>& a, const Poly<T>& b) {
    if (a.empty() || b.empty()) return {};
    Poly<T> r(a.size() + b.size() - 1, T(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

template <class T>
Poly<T> poly_scale(const Poly<T>& a, const T& s) {
    Poly<T> r = a;
    for (T& c : r) c *= s;
    return r;
}

template <class T>
T poly_eval(const Poly<T>& p, const T& x) {
    T acc(0);
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) acc = acc * x + p[i];
    return acc;
}

template <class T>
Poly<T> poly_derivative(const Poly<T>& p) {
    if (p.size() <= 1) return {};
    Poly<T> r(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * T(static_cast<int>(i));
    return r;
}

/// Fujiwara bound: every complex root z of sum a_i x^i satisfies
/// |z| <= 2 max_k |a_{n-k}/a_n|^{1/k}.  Coefficients ascending; the leading
/// (highest nonzero) coefficient must exist.
inline double fujiwara_bound(const std::vector<double>& coeffs) {
    int n = -1;
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
        if (coeffs[i] != 0.0) { n = i; break; }
    if (n < 0) throw std::invalid_argument("fujiwara_bound: zero polynomial");
    if (n == 0) return 0.0;  // constants have no roots; harmless zero
    const double an = std::abs(coeffs[n]);
    double best = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double c = std::abs(coeffs[n - k]);
        if (c == 0.0) continue;
        best = std::max(best, std::pow(c / an, 1.0 / k));
    }
    return 2.0 * best;
}

/// All complex roots via the companion matrix (leading zeros trimmed first).
inline std::vector<std::complex<double>> numeric_roots(std::vector<double> coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n <= 0) return {};
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -coeffs[i] / coeffs[n];
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i);
    return roots;
}

// ---------------------------------------------------------------------------
// Sturm sequences over Q (for isolating-interval validation).

inline Poly<Rational> poly_remainder(Poly<Rational> a, const Poly<Rational>& b) {
    poly_trim(a);
    const int db = poly_degree(b);
    if (db < 0) throw std::invalid_argument("poly_remainder: division by zero polynomial");
    while (poly_degree(a) >= db) {
        const int da = poly_degree(a);
        const Rational q = a[da] / b[db];
        for (int i = 0; i <= db; ++i) a[da - db + i] -= q * b[i];
        a[da] = Rational(0);  // force exact cancellation of the leading term
        poly_trim(a);
    }
    return a;
}

/// Standard Sturm chain p, p', -rem(...), ...; ends before the zero polynomial.
inline std::vector<Poly<Rational>> sturm_sequence(Poly<Rational> p) {
    poly_trim(p);
    std::vector<Poly<Rational>> seq;
    if (poly_degree(p) < 0) return seq;
    seq.push_back(p);
    Poly<Rational> d = poly_derivative(p);
    poly_trim(d);
    if (poly_degree(d) < 0) return seq;
    seq.push_back(d);
    while (true) {
        Poly<Rational> r = poly_remainder(seq[seq.size() - 2], seq.back());
        if (poly_degree(r) < 0) break;
        for (Rational& c : r) c = -c;
        seq.push_back(std::move(r));
    }
    return seq;
}

inline int sturm_sign_changes(const std::vector<Poly<Rational>>& seq, const Rational& x) {
    int changes = 0, prev = 0;
    for (const auto& p : seq) {
        const Rational v = poly_eval(p, x);
        const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

/// Number of distinct real roots in (lo, hi]; requires a squarefree input for
/// the textbook guarantee (the last chain element then has degree 0).
inline int sturm_count_roots(const std::vector<Poly<Rational>>& seq, const Rational& lo,
                             const Rational& hi) {
    if (seq.empty()) return 0;
    return sturm_sign_changes(seq, lo) - sturm_sign_changes(seq, hi);
}

}  // namespace gsp
