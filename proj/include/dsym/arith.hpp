#pragma once

// Multiplicative number theory kernel: trial-division factorization,
// Euler phi, Dedekind psi, divisor counts, restricted zeta(2) sums and
// the primitive lattice-vector sweep that drives the counting engine.

#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace dsym {

struct Factorization {
    std::int64_t n = 1;
    std::vector<std::pair<std::int64_t, int>> factors;  // (prime, exponent), primes increasing

    std::int64_t reconstruct() const {
        std::int64_t m = 1;
        for (auto [p, e] : factors)
            for (int i = 0; i < e; ++i) m *= p;
        return m;
    }
};

// Trial division with a 2/3 + 6k±1 wheel. Inputs here stay well below 10^9.
inline Factorization factorize(std::int64_t n) {
    if (n <= 0) throw std::domain_error("factorize: n must be >= 1");
    Factorization f;
    f.n = n;
    auto strip = [&](std::int64_t p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) f.factors.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (std::int64_t p = 5, step = 2; p * p <= n; p += step, step = 6 - step) strip(p);
    if (n > 1) f.factors.emplace_back(n, 1);
    return f;
}

inline std::int64_t euler_phi(std::int64_t n) {
    auto f = factorize(n);
    std::int64_t r = n;
    for (auto [p, e] : f.factors) r = r / p * (p - 1);
    return r;
}

inline std::int64_t dedekind_psi(std::int64_t n) {
    auto f = factorize(n);
    std::int64_t r = n;
    for (auto [p, e] : f.factors) r = r / p * (p + 1);
    return r;
}

inline std::int64_t divisor_count(std::int64_t n) {
    auto f = factorize(n);
    std::int64_t r = 1;
    for (auto [p, e] : f.factors) r *= (e + 1);
    return r;
}

// |SL2(Z)-orbit of a point of exact order n| = phi(n) psi(n) = n^2 prod (1 - 1/p^2)
inline std::int64_t orbit_size(std::int64_t n) {
    if (n <= 0) throw std::domain_error("orbit_size: n must be >= 1");
    return euler_phi(n) * dedekind_psi(n);
}

inline std::vector<std::int64_t> divisors(std::int64_t n) {
    auto f = factorize(n);
    std::vector<std::int64_t> ds{1};
    for (auto [p, e] : f.factors) {
        std::size_t old = ds.size();
        std::int64_t pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < old; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

// prod_{p | n} (1 - 1/p^2), exact
inline Rational coprime_zeta2_coefficient(std::int64_t n) {
    Rational r = 1;
    for (auto [p, e] : factorize(n).factors) r *= Rational(p * p - 1, p * p);
    return r;
}

// sum_{i >= 1, gcd(i,n)=1} 1/i^2 via the Euler product zeta(2) prod (1 - p^-2)
inline double coprime_zeta2(std::int64_t n) {
    if (n <= 0) throw std::domain_error("coprime_zeta2: n must be >= 1");
    const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
    return zeta2 * to_double(coprime_zeta2_coefficient(n));
}

// truncated direct sum over i <= max_i, for cross-checking (tail < 1/max_i)
inline double coprime_zeta2_partial(std::int64_t n, std::int64_t max_i) {
    double s = 0.0;
    for (std::int64_t i = max_i; i >= 1; --i)
        if (std::gcd(i, n) == 1) s += 1.0 / (static_cast<double>(i) * static_cast<double>(i));
    return s;
}

// Primitive vectors (p,q), gcd(|p|,|q|)=1, p^2+q^2 <= T^2, both orientations
// as distinct items. Fixed row-major order (p ascending, then q) so that
// worker partitions are reproducible.
template <class F>
inline void for_each_primitive(double T, F&& f) {
    if (T <= 0) throw std::domain_error("for_each_primitive: T must be > 0");
    auto P = static_cast<std::int64_t>(T);
    while (static_cast<double>((P + 1)) * static_cast<double>(P + 1) <= T * T) ++P;
    while (P > 0 && static_cast<double>(P) * static_cast<double>(P) > T * T) --P;
    for (std::int64_t p = -P; p <= P; ++p) {
        double rest = T * T - static_cast<double>(p) * static_cast<double>(p);
        auto Q = static_cast<std::int64_t>(std::sqrt(std::max(0.0, rest)));
        while (static_cast<double>((Q + 1)) * static_cast<double>(Q + 1) <= rest) ++Q;
        while (Q > 0 && static_cast<double>(Q) * static_cast<double>(Q) > rest) --Q;
        for (std::int64_t q = -Q; q <= Q; ++q)
            if (std::gcd(std::abs(p), std::abs(q)) == 1) f(p, q);
    }
}

// Column slice p ≡ slice (mod nslices) of the same sweep; the full sweep is
// the disjoint union over slices, so partial sums merge by plain addition.
template <class F>
inline void for_each_primitive_slice(double T, int slice, int nslices, F&& f) {
    auto P = static_cast<std::int64_t>(T);
    while (static_cast<double>((P + 1)) * static_cast<double>(P + 1) <= T * T) ++P;
    while (P > 0 && static_cast<double>(P) * static_cast<double>(P) > T * T) --P;
    for (std::int64_t p = -P; p <= P; ++p) {
        if (((p + P) % nslices) != slice) continue;
        double rest = T * T - static_cast<double>(p) * static_cast<double>(p);
        auto Q = static_cast<std::int64_t>(std::sqrt(std::max(0.0, rest)));
        while (static_cast<double>((Q + 1)) * static_cast<double>(Q + 1) <= rest) ++Q;
        while (Q > 0 && static_cast<double>(Q) * static_cast<double>(Q) > rest) --Q;
        for (std::int64_t q = -Q; q <= Q; ++q)
            if (std::gcd(std::abs(p), std::abs(q)) == 1) f(p, q);
    }
}

inline std::vector<std::pair<std::int64_t, std::int64_t>> primitive_vectors(double T) {
    std::vector<std::pair<std::int64_t, std::int64_t>> v;
    for_each_primitive(T, [&](std::int64_t p, std::int64_t q) { v.emplace_back(p, q); });
    return v;
}

}  // namespace dsym
