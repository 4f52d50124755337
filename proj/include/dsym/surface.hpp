#pragma once

// The d-symmetric cover of the unit torus with twist (t_h, t_v): d sheets of
// [0,1)^2 glued along a slit path. Sheet transitions when the straight-line
// flow crosses the three wall pieces:
//
//   vertical circle  {x in Z}, crossed rightward:  sheet += [t_v]
//   horizontal circle {y in Z}, crossed upward:    sheet -= [t_h]
//   open slit from (0,0) to ({t_h},{t_v}):         sheet += 1 when the flow
//     crosses from the slit's left side to its right side, i.e. when
//     u × w < 0 for u the slit vector and w the flow direction.
//
// The opposite chirality of the two circle rules is forced: with the slit
// rule normalized as above, the horizontal foliation must see monodromies
// [t_v] and [t_v]+1 and the vertical foliation (h+[x<{t_h}] up to global
// sign) must see [t_h] and [t_h]+1; a same-sign convention would produce
// gcd([t_h]-1, d) vertical cylinders instead.
//
// decompose_direction computes cylinder decompositions from the closed-form
// gcd rule; trace_decompose re-derives them by following the flow through
// actual crossings and serves as an independent oracle.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <variant>
#include <vector>

#include "rational.hpp"
#include "sl2z.hpp"

namespace dsym {

template <class S>
struct TwistOf {
    S h{}, v{};
    std::int64_t d = 1;
};

template <class S>
struct SurfaceOf {
    std::int64_t d = 1;
    TwistOf<S> twist;           // normalized into [0,d)^2
    bool degenerate = false;    // twist on the integer lattice
    std::int64_t slit_h = 0;    // h = [t_h]
    std::int64_t slit_v = 0;    // v = [t_v]
    S frac_h{}, frac_v{};       // fractional slit endpoint ({t_h},{t_v})
};

using ExactSurface = SurfaceOf<Rational>;
using RealSurface = SurfaceOf<double>;

template <class S>
inline SurfaceOf<S> build(std::int64_t d, S th, S tv) {
    if (d <= 0) throw std::domain_error("build: d must be >= 1");
    using tr = scalar_traits<S>;
    SurfaceOf<S> s;
    s.d = d;
    s.twist = {tr::mod_positive(th, d), tr::mod_positive(tv, d), d};
    s.slit_h = tr::floor(s.twist.h);
    s.slit_v = tr::floor(s.twist.v);
    s.frac_h = tr::frac(s.twist.h);
    s.frac_v = tr::frac(s.twist.v);
    s.degenerate = tr::is_integer(s.twist.h) && tr::is_integer(s.twist.v);
    return s;
}

// ---------------------------------------------------------------------------
// cylinder decompositions

// A group of identical cylinders in direction (p,q). Geometric width is
// width_units * |(p,q)| and geometric height is height_units / |(p,q)|, so
// sum count * width_units * height_units == d exactly in exact mode.
template <class S>
struct CylinderGroupOf {
    std::int64_t count = 0;
    std::int64_t width_units = 0;
    S height_units{};
};

template <class S>
struct DecompositionOf {
    std::int64_t p = 1, q = 0;
    std::vector<CylinderGroupOf<S>> groups;

    double norm() const {
        return std::sqrt(static_cast<double>(p * p + q * q));
    }
    double width(std::size_t i) const { return static_cast<double>(groups[i].width_units) * norm(); }
    double height(std::size_t i) const {
        return scalar_traits<S>::to_double(groups[i].height_units) / norm();
    }
    S area_units() const {
        S a{};
        for (auto& g : groups) a += scalar_traits<S>::from_int(g.count * g.width_units) * g.height_units;
        return a;
    }
    std::int64_t total_cylinders() const {
        std::int64_t n = 0;
        for (auto& g : groups) n += g.count;
        return n;
    }
};

struct trace_hit_cone_point : std::runtime_error {
    trace_hit_cone_point() : std::runtime_error("trace hit a cone point (singular leaf)") {}
};

namespace detail {

inline std::int64_t mod_i64(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

inline std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c) {
    return std::gcd(std::gcd(std::abs(a), std::abs(b)), c);
}

// crossing rule for the slit, keyed by the sign of u × w
inline std::int64_t slit_jump(int sign_of_cross) { return sign_of_cross < 0 ? +1 : -1; }

// orbit length of 0 under sheet shift +mu on Z/d (first-return period)
inline std::int64_t shift_period(std::int64_t mu, std::int64_t d) {
    std::int64_t j = mod_i64(mu, d), k = 1;
    while (j != 0) {
        j = mod_i64(j + mu, d);
        ++k;
    }
    return k;
}

// number of orbits of the shift +mu on Z/d, by explicit marking
inline std::int64_t shift_orbit_count(std::int64_t mu, std::int64_t d) {
    std::vector<char> seen(static_cast<std::size_t>(d), 0);
    std::int64_t orbits = 0;
    for (std::int64_t s = 0; s < d; ++s) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        ++orbits;
        std::int64_t j = s;
        do {
            seen[static_cast<std::size_t>(j)] = 1;
            j = mod_i64(j + mu, d);
        } while (j != s);
    }
    return orbits;
}

template <class S>
bool near_zero(const S& x) {
    if constexpr (scalar_traits<S>::exact)
        return x == 0;
    else
        return std::abs(x) < floating_epsilon();
}

// Net sheet jump over one base period of the flow from (x0,y0) in direction
// (p,q): circle crossings contribute p*[t_v] - q*[t_h] in total; slit
// crossings are found by intersecting the period segment with every slit
// translate. Throws if the leaf passes through a cone point.
template <class S>
std::int64_t base_period_jump(const SurfaceOf<S>& s, std::int64_t p, std::int64_t q,
                              const S& x0, const S& y0) {
    using tr = scalar_traits<S>;
    const S inv = S(q) * x0 - S(p) * y0;  // leaf invariant c = q x - p y (mod 1)
    if (near_zero(tr::frac(inv))) throw trace_hit_cone_point{};
    const S c1 = S(q) * s.frac_h - S(p) * s.frac_v;
    if (near_zero(tr::frac(inv - c1))) throw trace_hit_cone_point{};

    std::int64_t jump = p * s.slit_v - q * s.slit_h;

    const S cross = s.frac_h * S(q) - s.frac_v * S(p);  // u × w
    if (!near_zero(cross)) {
        const std::int64_t sgn_jump = slit_jump(cross < S(0) ? -1 : +1);
        const std::int64_t mx0 = tr::floor(x0), my0 = tr::floor(y0);
        const std::int64_t mlo = std::min(mx0, mx0 + p) - 1, mhi = std::max(mx0, mx0 + p) + 1;
        const std::int64_t klo = std::min(my0, my0 + q) - 1, khi = std::max(my0, my0 + q) + 1;
        for (std::int64_t m = mlo; m <= mhi; ++m) {
            for (std::int64_t k = klo; k <= khi; ++k) {
                const S A = S(m) - x0, B = S(k) - y0;
                const S t = (s.frac_h * B - s.frac_v * A) / cross;
                const S ss = (S(p) * B - S(q) * A) / cross;
                if (t >= S(0) && t < S(1) && ss > S(0) && ss < S(1)) jump += sgn_jump;
            }
        }
    }
    return jump;
}

}  // namespace detail

template <class S>
inline void require_primitive_direction(std::int64_t p, std::int64_t q) {
    if (std::gcd(std::abs(p), std::abs(q)) != 1)
        throw std::invalid_argument("direction (p,q) must be primitive");
}

// Closed-form decomposition: reduce (p,q) to horizontal, read off the
// transformed vertical twist t_v' and apply the gcd rule, with (0,d) = d.
// The group indexed i+1 carries total area d*{t_v'}.
template <class S>
inline DecompositionOf<S> decompose_direction(const SurfaceOf<S>& s, std::int64_t p, std::int64_t q) {
    require_primitive_direction<S>(p, q);
    if (s.degenerate) throw std::invalid_argument("decompose_direction: degenerate surface");
    using tr = scalar_traits<S>;
    const IntMat2 A = reduce_to_horizontal(p, q);  // second row is (-q, p)
    const S tv2 = tr::mod_positive(S(A.c) * s.twist.h + S(A.d) * s.twist.v, s.d);
    DecompositionOf<S> dec;
    dec.p = p;
    dec.q = q;
    if (tr::is_integer(tv2)) {
        const std::int64_t i = detail::mod_i64(tr::floor(tv2), s.d);
        const std::int64_t g = std::gcd(i, s.d);
        dec.groups.push_back({g, s.d / g, tr::from_int(1)});
        return dec;
    }
    const std::int64_t i = tr::floor(tv2);
    const S fr = tr::frac(tv2);
    const std::int64_t g1 = std::gcd(i, s.d);
    const std::int64_t g2 = std::gcd(i + 1, s.d);
    dec.groups.push_back({g1, s.d / g1, S(1) - fr});
    dec.groups.push_back({g2, s.d / g2, fr});
    return dec;
}

struct LeafTrace {
    std::int64_t monodromy = 0;  // net sheet jump over one base period
    std::int64_t period = 1;     // base periods until first return (width units)
    std::int64_t cylinders = 1;  // sheet orbits over this leaf
};

// Trace the single leaf through (x0, y0). Throws trace_hit_cone_point when
// the start sits on a singular leaf; the caller perturbs the start.
template <class S>
inline LeafTrace trace_leaf(const SurfaceOf<S>& s, std::int64_t p, std::int64_t q, const S& x0,
                            const S& y0) {
    require_primitive_direction<S>(p, q);
    if (s.degenerate) throw std::invalid_argument("trace_leaf: degenerate surface");
    const std::int64_t mu = detail::base_period_jump(s, p, q, x0, y0);
    return {mu, detail::shift_period(mu, s.d), detail::shift_orbit_count(mu, s.d)};
}

// Oracle decomposition by straight-line tracing. The leaf space of the base
// direction-(p,q) foliation is a circle with coordinate c = q x - p y mod 1;
// the singular leaves sit at c = 0 and c = c1 (the leaf of the slit tip).
// Each complementary band is probed at its midpoint: one traced base period
// yields the sheet monodromy, first returns give widths, explicit orbit
// marking gives cylinder counts.
template <class S>
inline DecompositionOf<S> trace_decompose(const SurfaceOf<S>& s, std::int64_t p, std::int64_t q) {
    require_primitive_direction<S>(p, q);
    if (s.degenerate) throw std::invalid_argument("trace_decompose: degenerate surface");
    using tr = scalar_traits<S>;
    const S c1 = tr::frac(S(q) * s.frac_h - S(p) * s.frac_v);
    std::vector<std::pair<S, S>> bands;
    if (detail::near_zero(c1))
        bands.push_back({S(0), S(1)});
    else {
        bands.push_back({S(0), c1});
        bands.push_back({c1, S(1)});
    }
    // integers alpha, beta with q*alpha - p*beta = 1
    const IntMat2 R = reduce_to_horizontal(q, -p);  // first row (u,v): u q - v p = 1
    const std::int64_t alpha = R.a, beta = R.b;

    DecompositionOf<S> dec;
    dec.p = p;
    dec.q = q;
    for (auto& [lo, hi] : bands) {
        const S cmid = (lo + hi) / 2;
        const LeafTrace leaf = trace_leaf(s, p, q, S(alpha) * cmid, S(beta) * cmid);
        dec.groups.push_back({leaf.cylinders, leaf.period, hi - lo});
    }
    return dec;
}

// ---------------------------------------------------------------------------
// degenerate surfaces

// A lattice twist (j,k) glues d tori along the identified lattice point.
// Connectivity of the sheet graph under steps +j and +k gives the component
// count; cycle structure of the two shifts gives the cylinder data.
struct DegenerateComponents {
    std::int64_t components = 0;
    std::int64_t area_per_component = 0;
    std::int64_t h_cylinders_per_component = 0;
    std::int64_t h_width = 0;
    std::int64_t v_cylinders_per_component = 0;
    std::int64_t v_width = 0;
};

template <class S>
inline DegenerateComponents components(const SurfaceOf<S>& s) {
    if (!s.degenerate) throw std::invalid_argument("components: surface is not degenerate");
    const std::int64_t d = s.d;
    const std::int64_t j = detail::mod_i64(s.slit_h, d);
    const std::int64_t k = detail::mod_i64(s.slit_v, d);

    // sheet connectivity under the two monodromy shifts
    std::vector<char> seen(static_cast<std::size_t>(d), 0);
    std::int64_t comps = 0;
    for (std::int64_t start = 0; start < d; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        ++comps;
        std::vector<std::int64_t> stack{start};
        seen[static_cast<std::size_t>(start)] = 1;
        while (!stack.empty()) {
            std::int64_t u = stack.back();
            stack.pop_back();
            for (std::int64_t w : {detail::mod_i64(u + j, d), detail::mod_i64(u + k, d)}) {
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    const std::int64_t g = detail::gcd3(j, k, d);
    if (comps != g) throw std::logic_error("components: connectivity disagrees with gcd(j,k,d)");

    DegenerateComponents out;
    out.components = comps;
    out.area_per_component = d / comps;
    // horizontal flow jumps by +k per loop, vertical flow by +j
    const std::int64_t h_total = detail::shift_orbit_count(k, d);
    const std::int64_t v_total = detail::shift_orbit_count(j, d);
    out.h_width = detail::shift_period(k, d);
    out.v_width = detail::shift_period(j, d);
    out.h_cylinders_per_component = h_total / comps;
    out.v_cylinders_per_component = v_total / comps;
    return out;
}

// ---------------------------------------------------------------------------
// saddle connections

struct SaddleConnection {
    double hx = 0, hy = 0;   // holonomy
    Rational ex, ey;         // exact holonomy (exact-mode surfaces)
    bool exact = false;
    std::int64_t base_multiplicity = 1;  // d lifts per base segment
    std::int64_t m_class = 1;            // gcd of the collapse endpoint (twist - v) with d
};

namespace detail {

// offsets (m,k) with |w + (m,k)| <= T, visited column-major
template <class F>
void for_each_offset(double wx, double wy, double T, F&& f) {
    auto mlo = static_cast<std::int64_t>(std::floor(-T - wx)) - 1;
    auto mhi = static_cast<std::int64_t>(std::ceil(T - wx)) + 1;
    for (std::int64_t m = mlo; m <= mhi; ++m) {
        double vx = wx + static_cast<double>(m);
        double rest = T * T - vx * vx;
        if (rest < 0) continue;
        double r = std::sqrt(rest);
        auto klo = static_cast<std::int64_t>(std::floor(-r - wy)) - 1;
        auto khi = static_cast<std::int64_t>(std::ceil(r - wy)) + 1;
        for (std::int64_t k = klo; k <= khi; ++k) {
            double vy = wy + static_cast<double>(k);
            if (vx * vx + vy * vy <= T * T) f(m, k);
        }
    }
}

}  // namespace detail

// Base-torus holonomies of saddle connections joining the two cone points,
// both orientations, |v| <= T. A candidate v with twist ≡ v (mod Z^2) is a
// genuine connection iff the open segment (0,v) misses both marked lattices;
// the two avoidance conditions coincide and reduce to gcd(|a|,|b|) <= Q for
// v = (a/Q, b/Q). For irrational twists generic position is assumed (no
// interior hits occur).
template <class S>
inline std::vector<SaddleConnection> saddle_connections_upto(const SurfaceOf<S>& s, double T) {
    if (s.degenerate) throw std::invalid_argument("saddle_connections_upto: degenerate surface");
    if (T <= 0) throw std::domain_error("saddle_connections_upto: T must be > 0");
    using tr = scalar_traits<S>;
    const std::int64_t d = s.d;
    const std::int64_t Jh = s.slit_h, Jv = s.slit_v;
    const double wx = tr::to_double(s.frac_h), wy = tr::to_double(s.frac_v);

    std::vector<SaddleConnection> out;

    std::int64_t Q = 0, c = 0, e = 0;
    if constexpr (tr::exact) {
        Q = std::lcm(rat_den(s.frac_h).template convert_to<std::int64_t>(),
                     rat_den(s.frac_v).template convert_to<std::int64_t>());
        c = (s.frac_h * Q).template convert_to<std::int64_t>();
        e = (s.frac_v * Q).template convert_to<std::int64_t>();
    }

    auto emit = [&](int orient, std::int64_t m, std::int64_t k) {
        // orient +1: v = w + (m,k), collapse endpoint twist - v = J - (m,k)
        // orient -1: v = -w + (m,k), collapse endpoint twist + v = J + (m,k)
        SaddleConnection sc;
        sc.base_multiplicity = d;
        sc.m_class = detail::gcd3(detail::mod_i64(Jh - orient * m, d),
                                  detail::mod_i64(Jv - orient * k, d), d);
        if constexpr (tr::exact) {
            sc.exact = true;
            sc.ex = Rational(orient * c + m * Q, Q);
            sc.ey = Rational(orient * e + k * Q, Q);
            sc.hx = to_double(sc.ex);
            sc.hy = to_double(sc.ey);
        } else {
            sc.hx = orient * wx + static_cast<double>(m);
            sc.hy = orient * wy + static_cast<double>(k);
        }
        out.push_back(sc);
    };

    const bool self_symmetric = tr::exact && detail::mod_i64(2 * c, Q) == 0 &&
                                detail::mod_i64(2 * e, Q) == 0;

    for (int orient : {+1, -1}) {
        if (orient == -1 && self_symmetric) break;
        const double ox = orient * wx, oy = orient * wy;
        detail::for_each_offset(ox, oy, T, [&](std::int64_t m, std::int64_t k) {
            if constexpr (tr::exact) {
                const std::int64_t a = orient * c + m * Q, b = orient * e + k * Q;
                if (std::gcd(std::abs(a), std::abs(b)) > Q) return;  // interior lattice hit
            }
            emit(orient, m, k);
        });
    }
    std::sort(out.begin(), out.end(), [](const SaddleConnection& l, const SaddleConnection& r) {
        double nl = l.hx * l.hx + l.hy * l.hy, nr = r.hx * r.hx + r.hy * r.hy;
        if (nl != nr) return nl < nr;
        if (l.hx != r.hx) return l.hx < r.hx;
        return l.hy < r.hy;
    });
    return out;
}

// ---------------------------------------------------------------------------
// cone data

struct ConeData {
    std::int64_t cone_points = 0;
    std::int64_t cone_angle_turns = 0;  // cone angle = 2*pi*turns
    std::int64_t genus = 0;
};

// Both cone points and the genus, recomputed from the crossing rules: a CCW
// loop around the origin crosses the two wall circles with cancelling jumps
// and the slit once with u×w > 0; around the slit tip only the slit, with
// u×w < 0. The cycle counts of the two local monodromies feed the Euler
// characteristic of the square complex (V - 3d + d = 2 - 2g).
template <class S>
inline ConeData cone_data(const SurfaceOf<S>& s) {
    if (s.degenerate) throw std::invalid_argument("cone_data: degenerate surface");
    const std::int64_t d = s.d;
    const std::int64_t jump0 = detail::slit_jump(+1);  // around the origin
    const std::int64_t jump1 = detail::slit_jump(-1);  // around the slit tip
    const std::int64_t cycles0 = detail::shift_orbit_count(jump0, d);
    const std::int64_t cycles1 = detail::shift_orbit_count(jump1, d);
    const std::int64_t V = cycles0 + cycles1;
    const std::int64_t chi = V - 3 * d + d;
    ConeData cd;
    cd.cone_points = V;
    cd.cone_angle_turns = detail::shift_period(jump0, d);
    cd.genus = (2 - chi) / 2;
    if (cd.genus != d || V != 2)
        throw std::logic_error("cone_data: Euler characteristic self-check failed");
    return cd;
}

// ---------------------------------------------------------------------------
// tagged twist for mode-dispatching front ends

using TwistPoint = std::variant<TwistOf<Rational>, TwistOf<double>>;

enum class Exactness { exact, floating };

inline Exactness twist_mode(const TwistPoint& t) {
    return std::holds_alternative<TwistOf<Rational>>(t) ? Exactness::exact : Exactness::floating;
}

// Orbit closure of a twist point; floating twists are rejected since a
// non-torsion point has an infinite (dense) orbit.
inline OrbitSet orbit_enumerate(const TwistPoint& t) {
    if (auto* e = std::get_if<TwistOf<Rational>>(&t))
        return orbit_enumerate(make_torus_point(e->h, e->v, e->d));
    throw std::domain_error("infinite orbit: irrational seed");
}

// order of the twist on T^2_d (smallest n with n*t in dZ^2)
inline std::int64_t twist_order(const TwistOf<Rational>& t) {
    auto coord_order = [&](const Rational& x) {
        const Rational xr = mod_pos(x, t.d);
        const std::int64_t p = rat_num(xr).convert_to<std::int64_t>();
        const std::int64_t q = rat_den(xr).convert_to<std::int64_t>();
        const std::int64_t dq = t.d * q;
        return dq / std::gcd(p, dq);  // gcd(0, dq) = dq
    };
    return std::lcm(coord_order(t.h), coord_order(t.v));
}

// order of the base marking t mod Z^2 on the unit torus
inline std::int64_t base_marking_order(const TwistOf<Rational>& t) {
    const std::int64_t qx = rat_den(frac_part(t.h)).convert_to<std::int64_t>();
    const std::int64_t qy = rat_den(frac_part(t.v)).convert_to<std::int64_t>();
    return std::lcm(qx, qy);
}

}  // namespace dsym
