#pragma once

// Exact scalar type used throughout: arbitrary-precision rationals, always
// reduced with positive denominator (boost::multiprecision maintains both
// invariants), plus the floor/frac helpers the torus arithmetic needs.
// scalar_traits lets the geometry run either exactly (Rational) or in
// floating point (double, with a configurable epsilon for integrality tests).

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dsym {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline BigInt floor_big(const Rational& r) {
    BigInt n = rat_num(r), d = rat_den(r);
    BigInt q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

inline std::int64_t floor64(const Rational& r) {
    return floor_big(r).convert_to<std::int64_t>();
}

// fractional part in [0,1)
inline Rational frac_part(const Rational& r) { return r - Rational(floor_big(r)); }

// reduce into [0, m)
inline Rational mod_pos(const Rational& r, std::int64_t m) {
    Rational x = r - Rational(m) * Rational(floor_big(r / m));
    if (x < 0) x += m;
    if (x >= m) x -= m;
    return x;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
    if (rat_den(r) == 1) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

// Accepts "p/q", "-p/q" or plain integers.
inline Rational parse_rational(std::string_view s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) return Rational(BigInt(std::string(s)));
        BigInt n{std::string(s.substr(0, slash))};
        BigInt d{std::string(s.substr(slash + 1))};
        if (d == 0) throw std::invalid_argument("zero denominator");
        return Rational(n, d);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + std::string(s) + "'");
    }
}

// Integer-membership epsilon for floating-point twists.
inline double& floating_epsilon() {
    static double eps = 1e-9;
    return eps;
}

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static std::int64_t floor(const Rational& x) { return floor64(x); }
    static Rational frac(const Rational& x) { return frac_part(x); }
    static bool is_integer(const Rational& x) { return rat_den(x) == 1; }
    static Rational mod_positive(const Rational& x, std::int64_t m) { return mod_pos(x, m); }
    static Rational from_int(std::int64_t k) { return Rational(k); }
    static double to_double(const Rational& x) { return dsym::to_double(x); }
    static std::string str(const Rational& x) { return dsym::to_string(x); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static bool is_integer(double x) {
        return std::abs(x - std::round(x)) < floating_epsilon();
    }
    static std::int64_t floor(double x) {
        if (is_integer(x)) return static_cast<std::int64_t>(std::llround(x));
        return static_cast<std::int64_t>(std::floor(x));
    }
    static double frac(double x) {
        if (is_integer(x)) return 0.0;
        return x - std::floor(x);
    }
    static double mod_positive(double x, std::int64_t m) {
        double y = x - static_cast<double>(m) * std::floor(x / static_cast<double>(m));
        if (y < 0) y += static_cast<double>(m);
        if (y >= static_cast<double>(m)) y -= static_cast<double>(m);
        return y;
    }
    static double from_int(std::int64_t k) { return static_cast<double>(k); }
    static double to_double(double x) { return x; }
    static std::string str(double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }
};

}  // namespace dsym
