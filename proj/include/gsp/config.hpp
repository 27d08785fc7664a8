#pragma once

/// Run configuration: flat "key = value" text with section dots, e.g.
///
///   torus.a1 = 1.0
///   torus.F2 = "rational:2/1"
///   torus.a3_sq = "algebraic:x^5-x-1:[1.16,1.17]"
///   lattice.N = 8
///   solver.dt = 1e-3
///   init.kind = qg-only
///   converge.eps_list = 1e-1,3e-2,1e-2
///
/// '#' starts a comment; values may be wrapped in double quotes.  Every
/// field has a default except the torus (at least one torus.* key must be
/// present); the experiment kind is selected by the CLI subcommand.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gsp/algebraic.hpp"
#include "gsp/exact.hpp"
#include "gsp/resonance.hpp"
#include "gsp/solvers.hpp"
#include "gsp/torus.hpp"

namespace gsp {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    TorusSpec torus;
    bool torus_given = false;
    int N = 8;  // lattice truncation
    SolverConfig solver;
    std::string experiment;  // optional; the CLI subcommand decides
    std::string init_kind = "random-div-free";
    std::uint64_t seed = 1;
    double amplitude = 0.25;
    double init_s = 2.0;
    double init_h_decay = 1.0;
    std::vector<double> eps_list{1e-1, 1e-2};
    double sigma = 1.0;
    int res_N = 0;  // resonance enumeration radius; 0 => lattice N
    double res_tol = 1e-9;
    std::string res_mode = "auto";  // exact | float | auto
    std::string out_dir = ".";
    int snapshot_every = 0;  // steps between snapshots; 0 disables
    double report_s = 2.0;   // s used for the series norms
    int jobs = 1;
};

namespace detail {

inline std::string config_trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double config_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

inline long long config_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for " + key + ": '" + v + "'");
    }
}

/// "p/q" or "p" with arbitrary-precision integers.
inline Rational parse_rational_text(const std::string& s) {
    const std::size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        const BigInt num(config_trim(s.substr(0, slash)));
        const BigInt den(config_trim(s.substr(slash + 1)));
        if (den == 0) throw std::runtime_error("zero denominator");
        return Rational(num, den);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: bad rational '") + s + "': " + e.what());
    }
}

/// Decimal or fraction text as an exact rational ("1.16" -> 116/100).
inline Rational parse_decimal_rational(const std::string& s0) {
    const std::string s = config_trim(s0);
    if (s.find('/') != std::string::npos) return parse_rational_text(s);
    const std::size_t dot = s.find('.');
    if (dot == std::string::npos) return parse_rational_text(s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    int sign = 1;
    if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
        if (digits[0] == '-') sign = -1;
        digits.erase(digits.begin());
    }
    // Strip leading zeros: the big-integer parser reads "0..." as octal.
    std::size_t nz = 0;
    while (nz + 1 < digits.size() && digits[nz] == '0') ++nz;
    digits.erase(0, nz);
    if (digits.empty() ||
        digits.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("config: bad decimal '" + s + "'");
    BigInt den = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    return Rational(sign * BigInt(digits), den);
}

/// Integer-coefficient polynomial in x, e.g. "x^5-x-1" or "3x^2+2".
inline std::vector<BigInt> parse_poly_text(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ConfigError("config: empty polynomial");
    std::vector<BigInt> coeffs;
    const auto bump = [&](int deg, const BigInt& c) {
        if (static_cast<int>(coeffs.size()) <= deg) coeffs.resize(deg + 1, BigInt(0));
        coeffs[deg] += c;
    };
    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = (s[i] == '-') ? -1 : 1;
            ++i;
        }
        std::string digits;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            digits.push_back(s[i++]);
        BigInt coeff = digits.empty() ? BigInt(1) : BigInt(digits);
        coeff *= sign;
        int deg = 0;
        if (i < s.size() && s[i] == 'x') {
            ++i;
            if (i < s.size() && s[i] == '*') ++i;  // tolerate "2*x" style? no: skip
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::string d;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                    d.push_back(s[i++]);
                if (d.empty()) throw ConfigError("config: bad exponent in polynomial");
                deg = std::stoi(d);
            }
        } else if (digits.empty()) {
            throw ConfigError("config: cannot parse polynomial '" + raw + "'");
        }
        bump(deg, coeff);
    }
    while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
    if (coeffs.size() < 2) throw ConfigError("config: polynomial must have degree >= 1");
    return coeffs;
}

}  // namespace detail

/// "rational:27/5" or "algebraic:x^5-x-1:[1.16,1.17]".
inline ExactValue parse_exact_value(const std::string& text) {
    const std::string s = detail::config_trim(text);
    if (s.rfind("rational:", 0) == 0)
        return ExactValue::rational(detail::parse_rational_text(s.substr(9)));
    if (s.rfind("algebraic:", 0) == 0) {
        const std::string body = s.substr(10);
        const std::size_t lb = body.rfind(":[");
        if (lb == std::string::npos || body.back() != ']')
            throw ConfigError("config: algebraic value needs ':[lo,hi]' interval: " + s);
        const std::string poly = body.substr(0, lb);
        const std::string iv = body.substr(lb + 2, body.size() - lb - 3);
        const std::size_t comma = iv.find(',');
        if (comma == std::string::npos)
            throw ConfigError("config: algebraic interval needs two endpoints: " + s);
        AlgebraicNumber a;
        a.minpoly = detail::parse_poly_text(poly);
        a.lo = detail::parse_decimal_rational(iv.substr(0, comma));
        a.hi = detail::parse_decimal_rational(iv.substr(comma + 1));
        const AlgebraicValidation val = validate_algebraic(a);
        if (!val.valid)
            throw ConfigError("config: invalid algebraic value '" + s + "': " + val.message);
        return ExactValue::algebraic(std::move(a));
    }
    throw ConfigError("config: exact value must start with 'rational:' or 'algebraic:': " + s);
}

inline RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::size_t pos = 0;
    int lineno = 0;
    const auto set_sq = [&](std::optional<ExactValue>& slot, double& plain,
                            const std::string& value, const std::string& key) {
        ExactValue v = parse_exact_value(value);
        const double sq = v.approx();
        if (!(sq > 0.0)) throw ConfigError("config: " + key + " must be positive");
        slot = std::move(v);
        plain = std::sqrt(sq);
    };
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = detail::config_trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::config_trim(line.substr(0, eq));
        std::string value = detail::config_trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty value for " +
                              key);

        if (key.rfind("torus.", 0) == 0) cfg.torus_given = true;
        if (key == "torus.a1") cfg.torus.a1 = detail::config_double(value, key);
        else if (key == "torus.a2") cfg.torus.a2 = detail::config_double(value, key);
        else if (key == "torus.a3") cfg.torus.a3 = detail::config_double(value, key);
        else if (key == "torus.F") cfg.torus.F = detail::config_double(value, key);
        else if (key == "torus.nu_h") cfg.torus.nu_h = detail::config_double(value, key);
        else if (key == "torus.nu_h_prime")
            cfg.torus.nu_h_prime = detail::config_double(value, key);
        else if (key == "torus.a1_sq") set_sq(cfg.torus.a1_sq, cfg.torus.a1, value, key);
        else if (key == "torus.a2_sq") set_sq(cfg.torus.a2_sq, cfg.torus.a2, value, key);
        else if (key == "torus.a3_sq") set_sq(cfg.torus.a3_sq, cfg.torus.a3, value, key);
        else if (key == "torus.F2") set_sq(cfg.torus.F_sq, cfg.torus.F, value, key);
        else if (key == "lattice.N") {
            cfg.N = static_cast<int>(detail::config_int(value, key));
            if (cfg.N <= 0) throw ConfigError("config: lattice.N must be positive");
        } else if (key == "solver.dt") {
            cfg.solver.dt = detail::config_double(value, key);
            if (!(cfg.solver.dt > 0.0)) throw ConfigError("config: solver.dt must be positive");
        } else if (key == "solver.T_final") {
            cfg.solver.T_final = detail::config_double(value, key);
            if (!(cfg.solver.T_final > 0.0))
                throw ConfigError("config: solver.T_final must be positive");
        } else if (key == "solver.eps") {
            cfg.solver.eps = detail::config_double(value, key);
            if (!(cfg.solver.eps > 0.0)) throw ConfigError("config: solver.eps must be positive");
        } else if (key == "solver.n_cut") {
            cfg.solver.n_cut = detail::config_double(value, key);
        } else if (key == "solver.cfl_safety") {
            cfg.solver.cfl_safety = detail::config_double(value, key);
            if (!(cfg.solver.cfl_safety > 0.0) || cfg.solver.cfl_safety > 1.0)
                throw ConfigError("config: solver.cfl_safety must lie in (0,1]");
        } else if (key == "solver.scheme") {
            if (value != "rk4-integrating-factor")
                throw ConfigError("config: unknown scheme '" + value + "'");
            cfg.solver.scheme = value;
        } else if (key == "experiment") {
            cfg.experiment = value;
        } else if (key == "init.kind") {
            try {
                parse_init_kind(value);  // validates
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
            cfg.init_kind = value;
        } else if (key == "init.seed") {
            cfg.seed = static_cast<std::uint64_t>(detail::config_int(value, key));
        } else if (key == "init.amplitude") {
            cfg.amplitude = detail::config_double(value, key);
        } else if (key == "init.s") {
            cfg.init_s = detail::config_double(value, key);
        } else if (key == "init.h_decay") {
            cfg.init_h_decay = detail::config_double(value, key);
        } else if (key == "converge.eps_list") {
            cfg.eps_list.clear();
            std::size_t p = 0;
            while (p <= value.size()) {
                std::size_t c = value.find(',', p);
                if (c == std::string::npos) c = value.size();
                const std::string item = detail::config_trim(value.substr(p, c - p));
                if (!item.empty()) cfg.eps_list.push_back(detail::config_double(item, key));
                p = c + 1;
            }
            if (cfg.eps_list.empty())
                throw ConfigError("config: converge.eps_list is empty");
        } else if (key == "converge.sigma") {
            cfg.sigma = detail::config_double(value, key);
        } else if (key == "resonance.N") {
            cfg.res_N = static_cast<int>(detail::config_int(value, key));
        } else if (key == "resonance.tol") {
            cfg.res_tol = detail::config_double(value, key);
        } else if (key == "resonance.mode") {
            if (value != "exact" && value != "float" && value != "auto")
                throw ConfigError("config: resonance.mode must be exact|float|auto");
            cfg.res_mode = value;
        } else if (key == "output.dir") {
            cfg.out_dir = value;
        } else if (key == "output.snapshot_every") {
            cfg.snapshot_every = static_cast<int>(detail::config_int(value, key));
        } else if (key == "output.report_s") {
            cfg.report_s = detail::config_double(value, key);
        } else if (key == "jobs") {
            cfg.jobs = static_cast<int>(detail::config_int(value, key));
            if (cfg.jobs < 1) throw ConfigError("config: jobs must be >= 1");
        } else {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
        }
    }
    if (!cfg.torus_given)
        throw ConfigError("config: torus configuration is required (no torus.* keys found)");
    if (!(cfg.torus.F > 0.0)) throw ConfigError("config: torus.F must be positive");
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Exact quotient x / r for a positive rational r.
///
/// For rational x this is a direct rational division.  For algebraic x with
/// minimal polynomial p(t) = sum a_k t^k of degree d, the quotient y = x / r
/// with r = p/q satisfies sum a_k (p/q)^k y^k = 0; clearing denominators
/// gives integer coefficients a_k * p^k * q^(d-k), and the isolating
/// interval scales by q/p.
inline ExactValue exact_div(const ExactValue& x, const Rational& r) {
    if (!(r > 0)) throw ConfigError("exact_div: divisor must be a positive rational");
    if (x.kind == ExactValue::Kind::RationalKind) return ExactValue::rational(x.rat / r);
    const BigInt p = boost::multiprecision::numerator(r);
    const BigInt q = boost::multiprecision::denominator(r);
    AlgebraicNumber y;
    const std::size_t d = x.alg.minpoly.size() - 1;
    y.minpoly.resize(x.alg.minpoly.size());
    BigInt pk = 1;
    for (std::size_t k = 0; k <= d; ++k) {
        BigInt qk = 1;
        for (std::size_t j = 0; j < d - k; ++j) qk *= q;
        y.minpoly[k] = x.alg.minpoly[k] * pk * qk;
        pk *= p;
    }
    const Rational inv = Rational(q, p);
    y.lo = x.alg.lo * inv;
    y.hi = x.alg.hi * inv;
    const AlgebraicValidation val = validate_algebraic(y);
    if (!val.valid)
        throw ConfigError(std::string("exact_div: scaled polynomial invalid: ") + val.message);
    return ExactValue::algebraic(std::move(y));
}

/// Canonical echo of the effective configuration, suitable for embedding in
/// run reports (stable formatting => byte-identical reruns).
inline std::string dump_config(const RunConfig& cfg) {
    std::ostringstream os;
    char b[96];
    const auto putd = [&](const char* k, double v) {
        std::snprintf(b, sizeof(b), "%s = %.17g\n", k, v);
        os << b;
    };
    putd("torus.a1", cfg.torus.a1);
    putd("torus.a2", cfg.torus.a2);
    putd("torus.a3", cfg.torus.a3);
    putd("torus.F", cfg.torus.F);
    putd("torus.nu_h", cfg.torus.nu_h);
    putd("torus.nu_h_prime", cfg.torus.nu_h_prime);
    os << "lattice.N = " << cfg.N << "\n";
    putd("solver.dt", cfg.solver.dt);
    putd("solver.T_final", cfg.solver.T_final);
    putd("solver.eps", cfg.solver.eps);
    putd("solver.n_cut", cfg.solver.n_cut);
    putd("solver.cfl_safety", cfg.solver.cfl_safety);
    os << "solver.scheme = " << cfg.solver.scheme << "\n";
    if (!cfg.experiment.empty()) os << "experiment = " << cfg.experiment << "\n";
    os << "init.kind = " << cfg.init_kind << "\n";
    os << "init.seed = " << cfg.seed << "\n";
    putd("init.amplitude", cfg.amplitude);
    putd("init.s", cfg.init_s);
    putd("init.h_decay", cfg.init_h_decay);
    os << "converge.eps_list = ";
    for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
        std::snprintf(b, sizeof(b), "%s%.17g", i ? "," : "", cfg.eps_list[i]);
        os << b;
    }
    os << "\n";
    putd("converge.sigma", cfg.sigma);
    os << "resonance.N = " << cfg.res_N << "\n";
    putd("resonance.tol", cfg.res_tol);
    os << "resonance.mode = " << cfg.res_mode << "\n";
    os << "output.dir = " << cfg.out_dir << "\n";
    os << "output.snapshot_every = " << cfg.snapshot_every << "\n";
    putd("output.report_s", cfg.report_s);
    os << "jobs = " << cfg.jobs << "\n";
    return os.str();
}

/// Exact reciprocal of a positive algebraic number: the minimal polynomial
/// coefficients reverse and the isolating interval inverts.
inline ExactValue exact_recip(const ExactValue& x) {
    if (x.kind == ExactValue::Kind::RationalKind) {
        if (x.rat == 0) throw ConfigError("exact_recip: value is zero");
        return ExactValue::rational(Rational(1) / x.rat);
    }
    if (!(x.alg.lo > 0))
        throw ConfigError("exact_recip: need a positive isolating interval");
    AlgebraicNumber y;
    y.minpoly.assign(x.alg.minpoly.rbegin(), x.alg.minpoly.rend());
    y.lo = Rational(1) / x.alg.hi;
    y.hi = Rational(1) / x.alg.lo;
    const AlgebraicValidation val = validate_algebraic(y);
    if (!val.valid)
        throw ConfigError(std::string("exact_recip: reversed polynomial invalid: ") +
                          val.message);
    return ExactValue::algebraic(std::move(y));
}

/// Exact quotient x / y for the decidable carrier combinations:
///   rational / rational, algebraic / rational, rational / algebraic, and
///   identical algebraic carriers (same polynomial and interval => ratio 1).
/// Incommensurate algebraic pairs are rejected.
inline ExactValue exact_ratio(const ExactValue& x, const ExactValue& y) {
    const bool xr = x.kind == ExactValue::Kind::RationalKind;
    const bool yr = y.kind == ExactValue::Kind::RationalKind;
    if (yr) return exact_div(x, y.rat);
    if (xr) {
        // x / y = (1/y) / (1/x), both divisions by positive rationals.
        if (!(x.rat > 0)) throw ConfigError("exact_ratio: need positive values");
        return exact_div(exact_recip(y), Rational(1) / x.rat);
    }
    if (x.alg.minpoly == y.alg.minpoly && x.alg.lo == y.alg.lo && x.alg.hi == y.alg.hi)
        return ExactValue::rational(Rational(1));
    throw ConfigError(
        "exact_ratio: cannot divide two distinct algebraic values exactly; provide "
        "commensurate carriers (identical algebraic values, or one rational)");
}

/// Exact moduli ratios (a3^2/a1^2, a3^2/a2^2, F^2) for the condition-(P)
/// checker.  Requires all four exact carriers; the horizontal carriers must
/// be rational or literally identical to the a3^2 carrier (commensurate),
/// since a fully general algebraic quotient is not implemented.
inline ConditionPInputs condition_p_inputs(const TorusSpec& t) {
    if (!t.a1_sq || !t.a2_sq || !t.a3_sq || !t.F_sq)
        throw ConfigError(
            "exact condition-(P) analysis requires exact carriers for a1_sq, a2_sq, a3_sq "
            "and F2 (use rational:p/q or algebraic:poly:[lo,hi] values)");
    ConditionPInputs in;
    in.r31 = exact_ratio(*t.a3_sq, *t.a1_sq);
    in.r32 = exact_ratio(*t.a3_sq, *t.a2_sq);
    in.F2 = *t.F_sq;
    return in;
}

}  // namespace gsp
