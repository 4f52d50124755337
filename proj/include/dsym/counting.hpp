#pragma once

// Brute-force counting engine. Cylinders are counted by sweeping every
// primitive direction and reading the closed-form decomposition; saddle
// connections by enumerating base holonomies directly. The sweep domain is
// cut into a fixed number of column slices; each worker owns whole slices
// and partial sums merge by integer addition, so the result is independent
// of the worker count and of scheduling.

#include <atomic>
#include <cstdint>
#include <map>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "arith.hpp"
#include "constants.hpp"
#include "surface.hpp"

namespace dsym {

// pi / zeta(2) = 6 / pi, the quadratic density normalization
inline double quadratic_density() { return 6.0 / std::numbers::pi; }

namespace detail {

constexpr int kSliceCount = 64;

template <class Fn>
inline std::int64_t sum_over_slices(int workers, Fn&& per_slice) {
    std::vector<std::int64_t> partial(kSliceCount, 0);
    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            int s = next.fetch_add(1);
            if (s >= kSliceCount) break;
            partial[static_cast<std::size_t>(s)] = per_slice(s);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    std::int64_t total = 0;
    for (auto v : partial) total += v;
    return total;
}

struct TwistInts {
    std::int64_t Q = 1, nh = 0, nv = 0;
};

inline TwistInts twist_ints(const SurfaceOf<Rational>& s) {
    const std::int64_t qh = rat_den(s.twist.h).convert_to<std::int64_t>();
    const std::int64_t qv = rat_den(s.twist.v).convert_to<std::int64_t>();
    TwistInts t;
    t.Q = std::lcm(qh, qv);
    t.nh = (s.twist.h * t.Q).convert_to<std::int64_t>();
    t.nv = (s.twist.v * t.Q).convert_to<std::int64_t>();
    return t;
}

}  // namespace detail

// N(Cyl, T): cylinders of core length < T over all primitive oriented
// directions with |(p,q)| <= T. Strict inequality at the cutoff.
template <class S>
inline std::int64_t count_cylinders(const SurfaceOf<S>& s, double T, int workers = 1) {
    if (s.degenerate) throw std::invalid_argument("count_cylinders: degenerate surface");
    if (T <= 0) throw std::domain_error("count_cylinders: T must be > 0");
    const std::int64_t d = s.d;
    const double T2 = T * T;

    if constexpr (scalar_traits<S>::exact) {
        const auto ti = detail::twist_ints(s);
        const std::int64_t M = d * ti.Q;
        return detail::sum_over_slices(workers, [&](int slice) {
            std::int64_t N = 0;
            for_each_primitive_slice(T, slice, detail::kSliceCount, [&](std::int64_t p, std::int64_t q) {
                const std::int64_t L2 = p * p + q * q;
                const std::int64_t t = detail::mod_i64(-q * ti.nh + p * ti.nv, M);
                const std::int64_t i = t / ti.Q;
                const std::int64_t g1 = std::gcd(i, d);
                const std::int64_t w1 = d / g1;
                if (static_cast<double>(w1 * w1 * L2) < T2) N += g1;
                if (t % ti.Q != 0) {
                    const std::int64_t g2 = std::gcd(i + 1, d);
                    const std::int64_t w2 = d / g2;
                    if (static_cast<double>(w2 * w2 * L2) < T2) N += g2;
                }
            });
            return N;
        });
    } else {
        const double th = s.twist.h, tv = s.twist.v;
        const double dd = static_cast<double>(d);
        return detail::sum_over_slices(workers, [&](int slice) {
            std::int64_t N = 0;
            for_each_primitive_slice(T, slice, detail::kSliceCount, [&](std::int64_t p, std::int64_t q) {
                const std::int64_t L2 = p * p + q * q;
                double t = -static_cast<double>(q) * th + static_cast<double>(p) * tv;
                t -= dd * std::floor(t / dd);
                if (t >= dd) t -= dd;
                std::int64_t i;
                bool boundary;
                if (scalar_traits<double>::is_integer(t)) {
                    i = detail::mod_i64(std::llround(t), d);
                    boundary = true;
                } else {
                    i = static_cast<std::int64_t>(std::floor(t));
                    boundary = false;
                }
                const std::int64_t g1 = std::gcd(i, d);
                const std::int64_t w1 = d / g1;
                if (static_cast<double>(w1 * w1 * L2) < T2) N += g1;
                if (!boundary) {
                    const std::int64_t g2 = std::gcd(i + 1, d);
                    const std::int64_t w2 = d / g2;
                    if (static_cast<double>(w2 * w2 * L2) < T2) N += g2;
                }
            });
            return N;
        });
    }
}

struct SaddleFilter {
    bool all = true;
    std::int64_t m = 1;

    static SaddleFilter everything() { return SaddleFilter{true, 1}; }
    static SaddleFilter m_class(std::int64_t m) { return SaddleFilter{false, m}; }
};

namespace detail {

// Visits every base holonomy with |v| <= T (both orientation classes,
// deduplicated when they coincide) and reports its gcd-class. Columns are
// sliced on the first offset coordinate.
template <class S, class Sink>
inline void saddle_sweep_slice(const SurfaceOf<S>& s, double T, int slice, int nslices,
                               Sink&& sink) {
    using tr = scalar_traits<S>;
    const std::int64_t d = s.d;
    const std::int64_t Jh = s.slit_h, Jv = s.slit_v;
    const double wx = tr::to_double(s.frac_h), wy = tr::to_double(s.frac_v);

    std::int64_t Q = 1, c = 0, e = 0;
    bool self_symmetric = false;
    if constexpr (tr::exact) {
        Q = std::lcm(rat_den(s.frac_h).template convert_to<std::int64_t>(),
                     rat_den(s.frac_v).template convert_to<std::int64_t>());
        c = (s.frac_h * Q).template convert_to<std::int64_t>();
        e = (s.frac_v * Q).template convert_to<std::int64_t>();
        self_symmetric = mod_i64(2 * c, Q) == 0 && mod_i64(2 * e, Q) == 0;
    }

    for (int orient : {+1, -1}) {
        if (orient == -1 && self_symmetric) break;
        const double ox = orient * wx, oy = orient * wy;
        const auto mlo = static_cast<std::int64_t>(std::floor(-T - ox)) - 1;
        const auto mhi = static_cast<std::int64_t>(std::ceil(T - ox)) + 1;
        for (std::int64_t m = mlo; m <= mhi; ++m) {
            if (detail::mod_i64(m - mlo, nslices) != slice) continue;
            const double vx = ox + static_cast<double>(m);
            const double rest = T * T - vx * vx;
            if (rest < 0) continue;
            const double r = std::sqrt(rest);
            const auto klo = static_cast<std::int64_t>(std::floor(-r - oy)) - 1;
            const auto khi = static_cast<std::int64_t>(std::ceil(r - oy)) + 1;
            for (std::int64_t k = klo; k <= khi; ++k) {
                const double vy = oy + static_cast<double>(k);
                if (vx * vx + vy * vy > T * T) continue;
                if constexpr (tr::exact) {
                    const std::int64_t a = orient * c + m * Q;
                    const std::int64_t b = orient * e + k * Q;
                    if (std::gcd(std::abs(a), std::abs(b)) > Q) continue;  // interior lattice hit
                }
                const std::int64_t cls = gcd3(mod_i64(Jh - orient * m, d),
                                              mod_i64(Jv - orient * k, d), d);
                sink(cls);
            }
        }
    }
}

}  // namespace detail

// Saddle connections joining the two cone points: d lifts per base holonomy,
// oriented convention, optional restriction to one m-homologous class.
template <class S>
inline std::int64_t count_saddles(const SurfaceOf<S>& s, double T, SaddleFilter filter,
                                  int workers = 1) {
    if (s.degenerate) throw std::invalid_argument("count_saddles: degenerate surface");
    if (T <= 0) throw std::domain_error("count_saddles: T must be > 0");
    if (!filter.all && (filter.m <= 0 || s.d % filter.m != 0))
        throw std::domain_error("count_saddles: filter class must divide d");
    const std::int64_t base = detail::sum_over_slices(workers, [&](int slice) {
        std::int64_t n = 0;
        detail::saddle_sweep_slice(s, T, slice, detail::kSliceCount, [&](std::int64_t cls) {
            if (filter.all || cls == filter.m) ++n;
        });
        return n;
    });
    return s.d * base;
}

// one sweep, tallies for every class m | d at once
template <class S>
inline std::map<std::int64_t, std::int64_t> count_saddles_by_class(const SurfaceOf<S>& s, double T,
                                                                   int workers = 1) {
    if (s.degenerate) throw std::invalid_argument("count_saddles_by_class: degenerate surface");
    const auto ds = divisors(s.d);
    std::vector<std::vector<std::int64_t>> partial(
        static_cast<std::size_t>(detail::kSliceCount), std::vector<std::int64_t>(ds.size(), 0));
    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            int slice = next.fetch_add(1);
            if (slice >= detail::kSliceCount) break;
            detail::saddle_sweep_slice(s, T, slice, detail::kSliceCount, [&](std::int64_t cls) {
                auto it = std::lower_bound(ds.begin(), ds.end(), cls);
                ++partial[static_cast<std::size_t>(slice)]
                         [static_cast<std::size_t>(it - ds.begin())];
            });
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    std::map<std::int64_t, std::int64_t> out;
    for (std::size_t j = 0; j < ds.size(); ++j) {
        std::int64_t sum = 0;
        for (auto& row : partial) sum += row[j];
        out[ds[j]] = s.d * sum;
    }
    return out;
}

// ---------------------------------------------------------------------------
// growth reports

enum class CountKind { cylinders, saddles_all, saddles_class };

struct GrowthRow {
    double T = 0;
    std::int64_t N = 0;
    double n_over_t2 = 0;
    double predicted = 0;  // (pi/zeta(2)) * c
    double rel_error = 0;
};

struct GrowthReport {
    std::string surface;
    CountKind kind = CountKind::cylinders;
    std::int64_t m = 0;  // class filter, when kind == saddles_class
    Constant constant;   // the asymptotic constant c used for the prediction
    double predicted_rate = 0;
    std::vector<GrowthRow> rows;
};

// Prediction dispatch: rational twists get the finite-orbit constants,
// irrational twists the generic ones.
template <class S>
inline Constant predicted_constant(const SurfaceOf<S>& s, CountKind kind, SaddleFilter filter) {
    if constexpr (scalar_traits<S>::exact) {
        switch (kind) {
            case CountKind::cylinders:
                // equal to finite_orbit_from_fiber on the order-n orbit, in O(n)
                return torsion_cylinder_constant(s.d, twist_order(s.twist));
            case CountKind::saddles_all: {
                Constant c = saddle_orbit_constant(base_marking_order(s.twist));
                c.coefficient *= s.d;
                c.description = "cover saddle constant, orbit-restricted sum";
                return c;
            }
            case CountKind::saddles_class:
                return m_homologous_finite(s.d, twist_order(s.twist), filter.m).all_connections;
        }
    } else {
        switch (kind) {
            case CountKind::cylinders: return generic_cylinder_constant(s.d);
            case CountKind::saddles_all: return saddle_generic_cover_constant(s.d);
            case CountKind::saddles_class: return m_homologous_generic_all(s.d, filter.m);
        }
    }
    throw std::logic_error("predicted_constant: unreachable");
}

template <class S>
inline GrowthReport growth_report(const SurfaceOf<S>& s, const std::vector<double>& Ts,
                                  CountKind kind, SaddleFilter filter = SaddleFilter::everything(),
                                  int workers = 1) {
    if (Ts.empty()) throw std::domain_error("growth_report: empty T list");
    for (std::size_t i = 1; i < Ts.size(); ++i)
        if (Ts[i] <= Ts[i - 1]) throw std::domain_error("growth_report: T list must ascend");
    GrowthReport rep;
    using tr = scalar_traits<S>;
    rep.surface = "d=" + std::to_string(s.d) + " twist=(" + tr::str(s.twist.h) + "," +
                  tr::str(s.twist.v) + ")" + (tr::exact ? " [exact]" : " [floating]");
    rep.kind = kind;
    rep.m = kind == CountKind::saddles_class ? filter.m : 0;
    rep.constant = predicted_constant(s, kind, filter);
    rep.predicted_rate = quadratic_density() * rep.constant.value();
    for (double T : Ts) {
        GrowthRow row;
        row.T = T;
        switch (kind) {
            case CountKind::cylinders: row.N = count_cylinders(s, T, workers); break;
            case CountKind::saddles_all:
                row.N = count_saddles(s, T, SaddleFilter::everything(), workers);
                break;
            case CountKind::saddles_class: row.N = count_saddles(s, T, filter, workers); break;
        }
        row.n_over_t2 = static_cast<double>(row.N) / (T * T);
        row.predicted = rep.predicted_rate;
        // a class can carry constant 0 (no spine intersections); the count is
        // then 0 as well and the error is defined as 0
        row.rel_error = row.predicted > 0
                            ? std::abs(row.n_over_t2 - row.predicted) / row.predicted
                            : (row.N == 0 ? 0.0 : std::numeric_limits<double>::infinity());
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace dsym
