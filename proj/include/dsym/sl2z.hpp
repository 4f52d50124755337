#pragma once

// SL2(Z) acting on torus points: matrix action, reduction of a primitive
// direction to horizontal, breadth-first orbit closure under the generators
// S and T, torsion-point enumeration, cusp (⟨T⟩-orbit) decompositions and
// congruence-subgroup membership.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "arith.hpp"
#include "rational.hpp"

namespace dsym {

struct IntMat2 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;  // row-major [[a,b],[c,d]]

    std::int64_t det() const { return a * d - b * c; }

    static IntMat2 identity() { return {1, 0, 0, 1}; }
    static IntMat2 gen_S() { return {0, -1, 1, 0}; }
    static IntMat2 gen_T() { return {1, 1, 0, 1}; }

    IntMat2 operator*(const IntMat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    bool operator==(const IntMat2& o) const = default;
};

// Point of T^2_d = R^2 / dZ^2, exact coordinates reduced into [0, d).
struct TorusPoint {
    Rational x, y;
    std::int64_t modulus = 1;

    bool operator==(const TorusPoint& o) const {
        return modulus == o.modulus && x == o.x && y == o.y;
    }
};

inline TorusPoint make_torus_point(Rational x, Rational y, std::int64_t d) {
    if (d <= 0) throw std::domain_error("make_torus_point: modulus must be >= 1");
    return TorusPoint{mod_pos(x, d), mod_pos(y, d), d};
}

inline TorusPoint act(const IntMat2& A, const TorusPoint& p) {
    if (A.det() != 1) throw std::invalid_argument("act: matrix is not in SL2(Z)");
    return make_torus_point(A.a * p.x + A.b * p.y, A.c * p.x + A.d * p.y, p.modulus);
}

// A in SL2(Z) with A (p,q)^T = (1,0)^T via the extended Euclidean algorithm.
// Canonical choice: the Bezout coefficient u is reduced into (-|q|/2, |q|/2],
// which fixes the free stabilizer parameter.
inline IntMat2 reduce_to_horizontal(std::int64_t p, std::int64_t q) {
    if (std::gcd(std::abs(p), std::abs(q)) != 1)
        throw std::invalid_argument("reduce_to_horizontal: (p,q) must be primitive");
    // extended gcd: u*p + v*q = 1
    std::int64_t old_r = p, r = q, old_u = 1, u = 0, old_v = 0, v = 1;
    while (r != 0) {
        std::int64_t k = old_r / r;
        std::int64_t t;
        t = old_r - k * r; old_r = r; r = t;
        t = old_u - k * u; old_u = u; u = t;
        t = old_v - k * v; old_v = v; v = t;
    }
    if (old_r < 0) { old_r = -old_r; old_u = -old_u; old_v = -old_v; }
    // old_r == 1 by primitivity
    std::int64_t bu = old_u, bv = old_v;
    if (q != 0) {
        std::int64_t qa = std::abs(q);
        std::int64_t r2 = ((bu % qa) + qa) % qa;
        if (2 * r2 > qa) r2 -= qa;  // now in (-qa/2, qa/2]
        std::int64_t t = (r2 - bu) / q;
        bu += t * q;
        bv -= t * p;
    }
    IntMat2 A{bu, bv, -q, p};
    if (A.det() != 1) throw std::logic_error("reduce_to_horizontal: internal error");
    return A;
}

// Finite SL2(Z)-orbit on T^2_d. All points share one denominator: the point
// list stores numerator pairs (nx, ny) with coordinate = n/denom in [0, d).
struct OrbitSet {
    std::int64_t modulus = 1;  // d
    std::int64_t denom = 1;    // q, common denominator
    std::vector<std::pair<std::int64_t, std::int64_t>> pts;  // sorted
    TorusPoint seed;

    std::size_t size() const { return pts.size(); }

    TorusPoint point(std::size_t i) const {
        return TorusPoint{Rational(pts[i].first, denom), Rational(pts[i].second, denom), modulus};
    }

    bool contains(const TorusPoint& p) const {
        if (p.modulus != modulus) return false;
        Rational nx = p.x * denom, ny = p.y * denom;
        if (rat_den(nx) != 1 || rat_den(ny) != 1) return false;
        std::pair<std::int64_t, std::int64_t> key{nx.convert_to<std::int64_t>(),
                                                  ny.convert_to<std::int64_t>()};
        return std::binary_search(pts.begin(), pts.end(), key);
    }
};

namespace detail {

// BFS closure of integer pairs mod M under S: (x,y) -> (-y,x) and
// T: (x,y) -> (x+y,y). On a finite set the monoid closure equals the group
// closure, so the two generators suffice.
inline std::vector<std::pair<std::int64_t, std::int64_t>> bfs_closure(
    std::int64_t M, std::vector<std::pair<std::int64_t, std::int64_t>> seeds) {
    auto key = [M](std::int64_t x, std::int64_t y) {
        return static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(M) +
               static_cast<std::uint64_t>(y);
    };
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::pair<std::int64_t, std::int64_t>> queue = seeds, out;
    for (auto& s : seeds) seen.insert(key(s.first, s.second));
    while (!queue.empty()) {
        auto [x, y] = queue.back();
        queue.pop_back();
        out.emplace_back(x, y);
        std::pair<std::int64_t, std::int64_t> nb[2] = {
            {((-y) % M + M) % M, x},   // S
            {(x + y) % M, y},          // T
        };
        for (auto [nx, ny] : nb)
            if (seen.insert(key(nx, ny)).second) queue.emplace_back(nx, ny);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// Breadth-first closure of a rational seed under S and T. Torsion seeds have
// finite orbits; the companion overload for twist points rejects floating
// (irrational) input, which would have an infinite orbit.
inline OrbitSet orbit_enumerate(const TorusPoint& seed) {
    std::int64_t qx = rat_den(seed.x).convert_to<std::int64_t>();
    std::int64_t qy = rat_den(seed.y).convert_to<std::int64_t>();
    std::int64_t q = std::lcm(qx, qy);
    std::int64_t M = seed.modulus * q;
    std::int64_t nx = (seed.x * q).convert_to<std::int64_t>();
    std::int64_t ny = (seed.y * q).convert_to<std::int64_t>();
    OrbitSet orbit;
    orbit.modulus = seed.modulus;
    orbit.denom = q;
    orbit.seed = seed;
    orbit.pts = detail::bfs_closure(M, {{nx, ny}});
    return orbit;
}

// All points of T^2_d of exact order n: (i d/n, j d/n) with gcd(i,j,n) = 1.
// These form a single SL2(Z)-orbit of size phi(n) psi(n); the enumeration is
// the oracle for that closed form.
inline OrbitSet torsion_points(std::int64_t d, std::int64_t n) {
    if (d <= 0 || n <= 0) throw std::domain_error("torsion_points: d, n must be >= 1");
    OrbitSet orbit;
    orbit.modulus = d;
    orbit.denom = n;
    orbit.seed = make_torus_point(Rational(d, n), Rational(0), d);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j)
            if (std::gcd(std::gcd(i, j), n) == 1)
                orbit.pts.emplace_back(i * d % (d * n), j * d % (d * n));
    std::sort(orbit.pts.begin(), orbit.pts.end());
    return orbit;
}

// Number of SL2(Z)-orbits on the m-torsion kernel T^2_d[m], by explicit
// BFS partition. Equals D(m), one orbit per exact order dividing m.
inline std::int64_t orbit_classes_on_kernel(std::int64_t d, std::int64_t m) {
    if (d <= 0 || m <= 0) throw std::domain_error("orbit_classes_on_kernel: d, m must be >= 1");
    // points (i d/m, j d/m) (i,j in [0,m)) as numerators over denom m, mod M = d*m
    std::int64_t M = d * m;
    std::set<std::pair<std::int64_t, std::int64_t>> left;
    for (std::int64_t i = 0; i < m; ++i)
        for (std::int64_t j = 0; j < m; ++j) left.insert({i * d, j * d});
    std::int64_t classes = 0;
    while (!left.empty()) {
        auto seed = *left.begin();
        auto orbit = detail::bfs_closure(M, {seed});
        for (auto& pt : orbit) left.erase(pt);
        ++classes;
    }
    return classes;
}

struct CuspDecomposition {
    struct Cusp {
        std::pair<std::int64_t, std::int64_t> representative;  // numerators over denom
        std::int64_t width;
    };
    std::int64_t modulus = 1;
    std::int64_t denom = 1;
    bool sign_identified = false;
    std::vector<Cusp> cusps;
    std::int64_t total = 0;  // sum of widths
};

// Partition of an orbit into ⟨T⟩-orbits; the part sizes are the relative cusp
// widths. With identify_sign, points p and -p are merged first.
inline CuspDecomposition cusp_decomposition(const OrbitSet& orbit, bool identify_sign) {
    std::int64_t M = orbit.modulus * orbit.denom;
    auto canon = [&](std::pair<std::int64_t, std::int64_t> p) {
        if (!identify_sign) return p;
        std::pair<std::int64_t, std::int64_t> neg{(M - p.first) % M, (M - p.second) % M};
        return std::min(p, neg);
    };
    std::set<std::pair<std::int64_t, std::int64_t>> left;
    for (auto& p : orbit.pts) left.insert(canon(p));
    CuspDecomposition dec;
    dec.modulus = orbit.modulus;
    dec.denom = orbit.denom;
    dec.sign_identified = identify_sign;
    while (!left.empty()) {
        auto start = *left.begin();
        auto cur = start;
        std::int64_t width = 0;
        do {
            left.erase(cur);
            ++width;
            cur = canon({(cur.first + cur.second) % M, cur.second});  // T
        } while (cur != start);
        dec.cusps.push_back({start, width});
        dec.total += width;
    }
    std::sort(dec.cusps.begin(), dec.cusps.end(),
              [](auto& a, auto& b) { return a.representative < b.representative; });
    return dec;
}

// cu(n) = 1/2 sum_{l|n} phi(n/l) phi(l) for n >= 3, and 2 for n = 2.
// The value is half the plain ⟨T⟩-orbit count on the order-n set and is not
// always an integer (n = 4 gives 5/2), hence the rational return type.
inline Rational cusp_count_formula(std::int64_t n) {
    if (n < 2) throw std::domain_error("cusp_count_formula: n must be >= 2");
    if (n == 2) return Rational(2);
    std::int64_t s = 0;
    for (std::int64_t l : divisors(n)) s += euler_phi(n / l) * euler_phi(l);
    return Rational(s, 2);
}

// A is in Gamma_1(n) iff a = 1, c = 0, d = 1 mod n (d = 1 follows from the
// determinant once a = 1, c = 0).
inline bool gamma1_membership(const IntMat2& A, std::int64_t n) {
    if (A.det() != 1) throw std::invalid_argument("gamma1_membership: matrix is not in SL2(Z)");
    if (n <= 0) throw std::domain_error("gamma1_membership: n must be >= 1");
    auto md = [n](std::int64_t x) { return ((x % n) + n) % n; };
    return md(A.a - 1) == 0 && md(A.c) == 0 && md(A.d - 1) == 0;
}

}  // namespace dsym
