#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "dsym/surface.hpp"

using namespace dsym;

namespace {

// multiset comparison of (count, width_units, height) with exact heights
bool same_decomposition(const DecompositionOf<Rational>& a, const DecompositionOf<Rational>& b) {
    if (a.groups.size() != b.groups.size()) return false;
    auto key = [](const CylinderGroupOf<Rational>& g) {
        return std::tuple(g.width_units, g.count, g.height_units);
    };
    auto ga = a.groups, gb = b.groups;
    std::sort(ga.begin(), ga.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    std::sort(gb.begin(), gb.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    for (std::size_t i = 0; i < ga.size(); ++i)
        if (key(ga[i]) != key(gb[i])) return false;
    return true;
}

std::vector<std::pair<std::int64_t, std::int64_t>> primitive_directions(int bound) {
    std::vector<std::pair<std::int64_t, std::int64_t>> dirs;
    for (std::int64_t p = -bound; p <= bound; ++p)
        for (std::int64_t q = -bound; q <= bound; ++q)
            if (std::gcd(std::abs(p), std::abs(q)) == 1) dirs.emplace_back(p, q);
    return dirs;
}

}  // namespace

TEST_CASE("build normalizes and flags degenerate twists", "[surface]") {
    auto marked = build<Rational>(1, Rational(1, 2), Rational(0));
    CHECK_FALSE(marked.degenerate);
    CHECK(marked.twist.h == Rational(1, 2));

    auto g2 = build<Rational>(2, Rational(3, 2), Rational(5, 2));
    CHECK_FALSE(g2.degenerate);
    CHECK(g2.twist.h == Rational(3, 2));
    CHECK(g2.twist.v == Rational(1, 2));  // 5/2 mod 2
    CHECK(g2.slit_h == 1);
    CHECK(g2.frac_h == Rational(1, 2));

    auto dg = build<Rational>(3, Rational(3), Rational(0));
    CHECK(dg.degenerate);
    CHECK(dg.twist.h == 0);

    auto fl = build<double>(4, 0.3, 1.7);
    CHECK_FALSE(fl.degenerate);
    CHECK(fl.slit_v == 1);
}

TEST_CASE("horizontal decomposition follows the gcd rule", "[surface]") {
    // d of width 1 on top of one cylinder of width d, for 0 < t_v < 1
    for (std::int64_t d : {1, 2, 3, 5, 6}) {
        auto s = build<Rational>(d, Rational(1, 3), Rational(1, 4));
        auto dec = decompose_direction(s, 1, 0);
        REQUIRE(dec.groups.size() == 2);
        CHECK(dec.groups[0].count == d);          // gcd(0,d) cylinders of width 1
        CHECK(dec.groups[0].width_units == 1);
        CHECK(dec.groups[1].count == 1);          // one cylinder of width d
        CHECK(dec.groups[1].width_units == d);
        CHECK(dec.area_units() == Rational(d));
    }
}

TEST_CASE("d=4 example decompositions", "[surface]") {
    auto s = build<double>(4, 0.3, 1.7);
    auto dec = decompose_direction(s, 1, 0);
    REQUIRE(dec.groups.size() == 2);
    // i = 1: one cylinder of width 4, then gcd(2,4)=2 cylinders of width 2
    CHECK(dec.groups[0].count == 1);
    CHECK(dec.groups[0].width_units == 4);
    CHECK(dec.groups[0].height_units == Catch::Approx(0.3));
    CHECK(dec.groups[1].count == 2);
    CHECK(dec.groups[1].width_units == 2);
    CHECK(dec.groups[1].height_units == Catch::Approx(0.7));

    auto sb = build<double>(4, 0.3, 2.0);
    auto db = decompose_direction(sb, 1, 0);
    REQUIRE(db.groups.size() == 1);
    CHECK(db.groups[0].count == 2);
    CHECK(db.groups[0].width_units == 2);
    CHECK(db.groups[0].height_units == Catch::Approx(1.0));
}

TEST_CASE("marked torus splits into two cylinders", "[surface]") {
    auto s = build<Rational>(1, Rational(2, 7), Rational(3, 5));
    auto dec = trace_decompose(s, 1, 0);
    REQUIRE(dec.groups.size() == 2);
    CHECK(dec.groups[0].count == 1);
    CHECK(dec.groups[1].count == 1);
    CHECK(dec.groups[0].width_units == 1);
    CHECK(dec.groups[1].width_units == 1);
    std::vector<Rational> hs{dec.groups[0].height_units, dec.groups[1].height_units};
    std::sort(hs.begin(), hs.end());
    CHECK(hs == std::vector<Rational>{Rational(2, 5), Rational(3, 5)});
    CHECK(same_decomposition(dec, decompose_direction(s, 1, 0)));
}

TEST_CASE("tracer equivalence at named twists", "[surface][oracle]") {
    auto s2 = build<Rational>(2, Rational(1, 3), Rational(1, 2));
    CHECK(same_decomposition(trace_decompose(s2, 1, 0), decompose_direction(s2, 1, 0)));

    auto s3 = build<Rational>(3, Rational(1, 2), Rational(1, 2));
    auto t = trace_decompose(s3, 1, 1);
    CHECK(same_decomposition(t, decompose_direction(s3, 1, 1)));
    for (std::size_t i = 0; i < t.groups.size(); ++i)  // widths carry the |(1,1)| factor
        CHECK(t.width(i) ==
              Catch::Approx(static_cast<double>(t.groups[i].width_units) * std::sqrt(2.0)));
}

TEST_CASE("tracer agrees with the closed form", "[surface][oracle]") {
    std::mt19937_64 rng(20250810);
    std::uniform_int_distribution<std::int64_t> num(0, 59);
    auto dirs = primitive_directions(5);
    for (std::int64_t d = 1; d <= 6; ++d) {
        for (int trial = 0; trial < 6; ++trial) {
            Rational th(num(rng), 60), tv(num(rng), 60);
            th *= d;
            tv *= d;
            auto s = build<Rational>(d, th, tv);
            if (s.degenerate) continue;
            for (auto [p, q] : dirs) {
                auto a = decompose_direction(s, p, q);
                auto b = trace_decompose(s, p, q);
                INFO("d=" << d << " twist=(" << to_string(th) << "," << to_string(tv)
                          << ") dir=(" << p << "," << q << ")");
                CHECK(same_decomposition(a, b));
                CHECK(a.area_units() == Rational(d));
            }
        }
    }
}

TEST_CASE("tracer agrees in floating mode", "[surface][oracle]") {
    auto s = build<double>(5, 0.37244, 2.91157);
    for (auto [p, q] : primitive_directions(3)) {
        auto a = decompose_direction(s, p, q);
        auto b = trace_decompose(s, p, q);
        REQUIRE(a.groups.size() == b.groups.size());
        auto key = [](const CylinderGroupOf<double>& g) {
            return std::pair(g.width_units, g.count);
        };
        auto ga = a.groups, gb = b.groups;
        std::sort(ga.begin(), ga.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
        std::sort(gb.begin(), gb.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
        double area = 0;
        for (std::size_t i = 0; i < ga.size(); ++i) {
            CHECK(key(ga[i]) == key(gb[i]));
            CHECK(std::abs(ga[i].height_units - gb[i].height_units) < 1e-12);
            area += static_cast<double>(ga[i].count * ga[i].width_units) * ga[i].height_units;
        }
        CHECK(std::abs(area - 5.0) < 1e-12);
    }
}

TEST_CASE("rotation symmetry: horizontal of t equals vertical of r90 t", "[surface]") {
    for (std::int64_t d : {2, 3, 4, 6}) {
        auto s = build<Rational>(d, Rational(5, 7), Rational(9, 11));
        auto rot = build<Rational>(d, Rational(-9, 11), Rational(5, 7));  // r90 (x,y) = (-y,x)
        CHECK(same_decomposition(decompose_direction(s, 1, 0), decompose_direction(rot, 0, 1)));
    }
}

TEST_CASE("involution symmetry: twist and -twist decompose identically", "[surface]") {
    auto dirs = primitive_directions(3);
    for (std::int64_t d : {2, 3, 5}) {
        auto s = build<Rational>(d, Rational(3, 7), Rational(12, 5));
        auto neg = build<Rational>(d, Rational(-3, 7), Rational(-12, 5));
        for (auto [p, q] : dirs)
            CHECK(same_decomposition(decompose_direction(s, p, q),
                                     decompose_direction(neg, p, q)));
    }
}

TEST_CASE("stabilizer coset does not change the decomposition", "[surface]") {
    // u_t A also reduces (p,q); the transformed vertical twist is unchanged
    auto s = build<Rational>(4, Rational(2, 9), Rational(7, 9));
    IntMat2 A = reduce_to_horizontal(3, 2);
    for (std::int64_t t : {-2, -1, 1, 3}) {
        IntMat2 U{1, t, 0, 1};
        IntMat2 B = U * A;
        Rational tv1 = mod_pos(Rational(A.c) * s.twist.h + Rational(A.d) * s.twist.v, 4);
        Rational tv2 = mod_pos(Rational(B.c) * s.twist.h + Rational(B.d) * s.twist.v, 4);
        CHECK(tv1 == tv2);
    }
}

TEST_CASE("simple directions are exactly the boundary landings", "[surface]") {
    // one band <=> t_v' integral <=> k = gcd(i,d) cylinders in a single orbit
    auto dirs = primitive_directions(3);
    for (std::int64_t d = 2; d <= 6; ++d) {
        for (std::int64_t n : {3, 4, 5}) {
            auto s = build<Rational>(d, Rational(d, n), Rational(0));
            if (s.degenerate) continue;
            for (auto [p, q] : dirs) {
                auto dec = trace_decompose(s, p, q);
                IntMat2 A = reduce_to_horizontal(p, q);
                Rational tv = mod_pos(Rational(A.c) * s.twist.h + Rational(A.d) * s.twist.v, d);
                bool boundary = rat_den(tv) == 1;
                CHECK((dec.groups.size() == 1) == boundary);
                if (boundary) {
                    std::int64_t k = dec.groups[0].count;
                    CHECK(d % k == 0);
                    CHECK(k == std::gcd(floor64(tv), d));
                }
            }
        }
    }
}

TEST_CASE("degenerate components match the gcd description", "[surface]") {
    auto c1 = components(build<Rational>(6, Rational(2), Rational(4)));
    CHECK(c1.components == 2);
    CHECK(c1.area_per_component == 3);
    CHECK(c1.h_cylinders_per_component == 1);
    CHECK(c1.h_width == 3);

    auto c2 = components(build<Rational>(5, Rational(0), Rational(0)));
    CHECK(c2.components == 5);
    CHECK(c2.area_per_component == 1);

    auto c3 = components(build<Rational>(5, Rational(1), Rational(0)));
    CHECK(c3.components == 1);
    CHECK(c3.area_per_component == 5);

    CHECK_THROWS_AS(components(build<Rational>(3, Rational(1, 2), Rational(0))),
                    std::invalid_argument);
}

TEST_CASE("degenerate structure across all residues", "[surface]") {
    for (std::int64_t d = 1; d <= 8; ++d) {
        for (std::int64_t j = 0; j < d; ++j) {
            for (std::int64_t k = 0; k < d; ++k) {
                auto s = build<Rational>(d, Rational(j), Rational(k));
                auto c = components(s);
                std::int64_t g = std::gcd(std::gcd(j, k), d);
                CHECK(c.components == g);
                CHECK(c.area_per_component == d / g);
                CHECK(c.h_cylinders_per_component == std::gcd(k, d) / g);
                CHECK(c.h_width == d / std::gcd(k, d));
                CHECK(c.v_cylinders_per_component == std::gcd(j, d) / g);
                CHECK(c.v_width == d / std::gcd(j, d));
            }
        }
    }
}

TEST_CASE("saddle connections of the half marking", "[surface]") {
    auto s = build<Rational>(1, Rational(1, 2), Rational(0));
    auto sc6 = saddle_connections_upto(s, 0.6);
    REQUIRE(sc6.size() == 2);
    CHECK(sc6[0].ex == Rational(-1, 2));
    CHECK(sc6[1].ex == Rational(1, 2));

    // frozen by exhaustive rational enumeration: (±1/2, 0), (±1/2, ±1)
    auto sc12 = saddle_connections_upto(s, 1.2);
    CHECK(sc12.size() == 6);
    for (auto& sc : sc12) {
        CHECK(sc.base_multiplicity == 1);
        CHECK(sc.m_class == 1);
    }
}

TEST_CASE("interior lattice hits are excluded", "[surface][oracle]") {
    // independent oracle: walk every lattice point in the bounding box and
    // test collinearity exactly
    auto interior_hit = [](const Rational& vx, const Rational& vy) {
        std::int64_t xlo = floor64(vx) - 1, xhi = floor64(vx) + 2;
        if (xlo > xhi) std::swap(xlo, xhi);
        std::int64_t lo = std::min<std::int64_t>(0, xlo), hi = std::max<std::int64_t>(0, xhi);
        for (std::int64_t mx = lo; mx <= hi; ++mx)
            for (std::int64_t my = floor64(vy) - std::abs(hi) - 2;
                 my <= floor64(vy) + std::abs(hi) + 2; ++my) {
                if (mx == 0 && my == 0) continue;
                if (vx * my != vy * mx) continue;  // not collinear
                Rational t = vx != 0 ? Rational(mx) / vx : Rational(my) / vy;
                if (t > 0 && t < 1) return true;
            }
        return false;
    };
    auto s = build<Rational>(1, Rational(1, 5), Rational(0));
    auto list = saddle_connections_upto(s, 8.0);
    for (auto& sc : list) CHECK_FALSE(interior_hit(sc.ex, sc.ey));
    // and something was excluded: v = (6/5, 6) has gcd(6,30) = 6 > 5
    for (auto& sc : list) CHECK(!(sc.ex == Rational(6, 5) && sc.ey == Rational(6)));
}

TEST_CASE("m-class of a connection is the gcd of the collapse endpoint", "[surface]") {
    auto s = build<Rational>(4, Rational(1, 3), Rational(2, 3));
    for (auto& sc : saddle_connections_upto(s, 3.0)) {
        Rational jx = s.twist.h - sc.ex, jy = s.twist.v - sc.ey;
        bool forward = rat_den(jx) == 1 && rat_den(jy) == 1;
        if (!forward) {
            jx = s.twist.h + sc.ex;
            jy = s.twist.v + sc.ey;
        }
        REQUIRE(rat_den(jx) == 1);
        std::int64_t j = floor64(mod_pos(jx, 4)), k = floor64(mod_pos(jy, 4));
        CHECK(sc.m_class == std::gcd(std::gcd(j, k), std::int64_t(4)));
    }
}

TEST_CASE("cone data and the Euler characteristic self-check", "[surface]") {
    for (std::int64_t d : {1, 2, 5}) {
        auto cd = cone_data(build<Rational>(d, Rational(1, 3), Rational(1, 7)));
        CHECK(cd.cone_points == 2);
        CHECK(cd.cone_angle_turns == d);  // cone angle 2*pi*d
        CHECK(cd.genus == d);
    }
    CHECK_THROWS_AS(cone_data(build<Rational>(3, Rational(0), Rational(0))),
                    std::invalid_argument);
}

TEST_CASE("tracing a singular leaf signals the cone point", "[surface]") {
    auto s = build<Rational>(3, Rational(1, 4), Rational(1, 2));
    // the horizontal leaf through the origin and the one through the slit tip
    CHECK_THROWS_AS(trace_leaf(s, 1, 0, Rational(1, 7), Rational(0)), trace_hit_cone_point);
    CHECK_THROWS_AS(trace_leaf(s, 1, 0, Rational(1, 7), Rational(1, 2)), trace_hit_cone_point);
    // a leaf through neither is fine and carries the band monodromy
    auto leaf = trace_leaf(s, 1, 0, Rational(1, 7), Rational(1, 5));
    CHECK(leaf.monodromy == 1);  // below the slit: [t_v] + 1
    CHECK(leaf.period == 3);
    CHECK(leaf.cylinders == 1);
}

TEST_CASE("twist orders and the infinite-orbit rejection", "[surface]") {
    TwistOf<Rational> t{Rational(2, 3), Rational(0), 2};
    CHECK(twist_order(t) == 3);
    CHECK(base_marking_order(t) == 3);
    TwistOf<Rational> t2{Rational(1, 2), Rational(1), 2};
    CHECK(twist_order(t2) == 4);
    CHECK(base_marking_order(t2) == 2);

    TwistPoint irr = TwistOf<double>{0.123456, 0.654321, 2};
    CHECK_THROWS_AS(orbit_enumerate(irr), std::domain_error);
    TwistPoint rat = TwistOf<Rational>{Rational(1, 5), Rational(0), 1};
    CHECK(orbit_enumerate(rat).size() == 24);
}
