#pragma once

// The modular fiber of d-symmetric covers: the torus T^2_d minus its integer
// lattice, decomposed into d horizontal cylinders of width d and height 1.
// Surfaces inside cylinder i share one horizontal width-list; surfaces on
// the bottom boundary line t_v = i share another. The horizontal spine (the
// unit segments joining lattice points) classifies degenerations by the
// gcd-class of the endpoint.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "arith.hpp"
#include "sl2z.hpp"
#include "surface.hpp"

namespace dsym {

struct WidthEntry {
    std::int64_t count = 0;
    std::int64_t width = 0;

    bool operator==(const WidthEntry&) const = default;
};

struct FiberCylinder {
    std::int64_t index = 0;
    std::int64_t area = 0;  // = d
    std::vector<WidthEntry> interior;      // widths for surfaces inside C_i
    std::vector<WidthEntry> boundary_btm;  // widths for surfaces on t_v = i
};

struct FiberDecomposition {
    std::int64_t d = 1;
    std::vector<FiberCylinder> cylinders;

    std::int64_t area() const { return d * d; }
};

inline FiberDecomposition build_fiber_decomposition(std::int64_t d) {
    if (d <= 0) throw std::domain_error("build_fiber_decomposition: d must be >= 1");
    FiberDecomposition f;
    f.d = d;
    for (std::int64_t i = 0; i < d; ++i) {
        FiberCylinder c;
        c.index = i;
        c.area = d;
        const std::int64_t g1 = std::gcd(i, d);       // gcd(0,d) = d
        const std::int64_t g2 = std::gcd(i + 1, d);
        c.interior = {{g1, d / g1}, {g2, d / g2}};
        c.boundary_btm = {{g1, d / g1}};
        f.cylinders.push_back(std::move(c));
    }
    return f;
}

// cylinder membership of a twist point: index i = [t_v], boundary iff t_v in Z
template <class S>
inline std::pair<std::int64_t, bool> fiber_cylinder_index(const TwistOf<S>& t) {
    using tr = scalar_traits<S>;
    const S tv = tr::mod_positive(t.v, t.d);
    if (tr::is_integer(tv)) {
        std::int64_t i = tr::floor(tv) % t.d;
        return {i, true};
    }
    return {tr::floor(tv), false};
}

// |L_{a d/n} ∩ T^2_d(n)| = n * phi((a,n)) / (a,n): order-n points on the
// horizontal leaf at height a d / n.
inline std::int64_t leaf_torsion_count(std::int64_t d, std::int64_t n, std::int64_t a) {
    if (d <= 0 || n <= 0) throw std::domain_error("leaf_torsion_count: d, n must be >= 1");
    if (a < 1 || a > n) throw std::domain_error("leaf_torsion_count: need 1 <= a <= n");
    const std::int64_t g = std::gcd(a, n);
    return n / g * euler_phi(g);
}

struct OrbitCylinderCounts {
    std::vector<std::int64_t> interior;  // |O ∩ C_i|
    std::vector<std::int64_t> boundary;  // |O ∩ ∂btm C_i| (line t_v = i)
};

inline OrbitCylinderCounts orbit_cylinder_intersections(const OrbitSet& orbit, std::int64_t d) {
    if (orbit.modulus != d)
        throw std::invalid_argument("orbit_cylinder_intersections: orbit lives on a different torus");
    OrbitCylinderCounts out;
    out.interior.assign(static_cast<std::size_t>(d), 0);
    out.boundary.assign(static_cast<std::size_t>(d), 0);
    const std::int64_t q = orbit.denom;
    for (auto& [nx, ny] : orbit.pts) {
        const std::int64_t i = ny / q;
        if (ny % q == 0)
            ++out.boundary[static_cast<std::size_t>(i)];
        else
            ++out.interior[static_cast<std::size_t>(i)];
    }
    return out;
}

// Horizontal spine segment from (j,k) to (j+1,k) on T^2_d, tagged with the
// gcd-classes of its two endpoints.
struct SpineSegment {
    std::int64_t j = 0, k = 0;
    std::int64_t class_left = 1;
    std::int64_t class_right = 1;
};

inline std::int64_t lattice_class(std::int64_t j, std::int64_t k, std::int64_t d) {
    return std::gcd(std::gcd(((j % d) + d) % d, ((k % d) + d) % d), d);
}

// all horizontal spine segments with an endpoint of class m
inline std::vector<SpineSegment> spine_segments(std::int64_t d, std::int64_t m) {
    if (d <= 0) throw std::domain_error("spine_segments: d must be >= 1");
    if (m <= 0 || d % m != 0) throw std::domain_error("spine_segments: m must divide d");
    std::vector<SpineSegment> out;
    for (std::int64_t k = 0; k < d; ++k) {
        for (std::int64_t j = 0; j < d; ++j) {
            SpineSegment seg{j, k, lattice_class(j, k, d), lattice_class(j + 1, k, d)};
            if (seg.class_left == m || seg.class_right == m) out.push_back(seg);
        }
    }
    return out;
}

}  // namespace dsym
