#include "common.hpp"

#include "swimmer/error.hpp"
#include "swimmer/stroke.hpp"

#include <numbers>

using namespace swimmer;
using testing::rel_diff;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs(const StrokePolygon& poly, bool first) {
    double m = 0.0;
    for (const auto& v : poly.vertices) m = std::max(m, std::abs(first ? v.b1 : v.b3));
    return m;
}

}  // namespace

TEST_SUITE("stroke") {

TEST_CASE("octagon vertices and degenerate shapes") {
    const StrokePolygon oct = octagon_polygon({0.1, 0.2, 0.1, 0.2});
    CHECK(oct.vertices.size() == 8);
    CHECK(oct.orientation == 1);
    // starts at the top of the left side and goes down
    CHECK(oct.vertices[1].b1 == doctest::Approx(oct.vertices[0].b1));
    CHECK(oct.vertices[1].b3 < oct.vertices[0].b3);

    const StrokePolygon square = octagon_polygon({0.3, 0.0, 0.3, 0.0});
    CHECK(square.vertices.size() == 4);
    CHECK(max_abs(square, true) == doctest::Approx(0.15));
    CHECK(max_abs(square, false) == doctest::Approx(0.15));

    const StrokePolygon diamond = octagon_polygon({0.0, 0.2, 0.0, 0.2});
    CHECK(diamond.vertices.size() == 4);
    CHECK(max_abs(diamond, true) == doctest::Approx(0.2 / std::sqrt(2.0)));

    // centre offset moves every vertex
    const StrokePolygon shifted = octagon_polygon({0.1, 0.2, 0.1, 0.2}, {0.5, -0.25});
    for (std::size_t i = 0; i < oct.vertices.size(); ++i) {
        CHECK(shifted.vertices[i].b1 == doctest::Approx(oct.vertices[i].b1 + 0.5));
        CHECK(shifted.vertices[i].b3 == doctest::Approx(oct.vertices[i].b3 - 0.25));
    }

    CHECK_THROWS_AS(octagon_polygon({0.1, 0.0, 0.0, 0.0}), Error);
    CHECK_THROWS_AS(octagon_polygon({-0.1, 0.2, 0.1, 0.2}), Error);
}

TEST_CASE("symmetric octagon is inscribed with half-width e/2 + d/sqrt2") {
    for (double e : {0.0, 0.05, 0.2}) {
        for (double d : {0.0, 0.1, 0.3}) {
            if (e == 0.0 && d == 0.0) continue;
            const StrokePolygon p = octagon_polygon({e, d, e, d});
            const double a = e / 2 + d / std::sqrt(2.0);
            CHECK(max_abs(p, true) == doctest::Approx(a).epsilon(1e-14));
            CHECK(max_abs(p, false) == doctest::Approx(a).epsilon(1e-14));
        }
    }
}

TEST_CASE("family from bounds") {
    const double a = pi / 20;
    const OctagonSpec s = family_from_bounds(a, 0.75, 1.0);
    CHECK(s.a2 / std::sqrt(2.0) == doctest::Approx(0.12666).epsilon(1e-4));
    CHECK(s.a1 == doctest::Approx(0.06084).epsilon(1e-3));
    CHECK(s.a1 == s.a3);
    CHECK(s.a2 == s.a4);

    const StrokePolygon p = octagon_polygon(s);
    CHECK(max_abs(p, true) == doctest::Approx(a).epsilon(1e-14));

    // lower end is the diamond, upper end the square
    const OctagonSpec lo = family_from_bounds(a, 4 * a, 1.0);
    CHECK(lo.a1 == 0.0);
    const OctagonSpec hi = family_from_bounds(a, 8 * a, 1.0);
    CHECK(hi.a2 == 0.0);

    CHECK_THROWS_AS(family_from_bounds(a, 0.5, 1.0), Error);
    CHECK_THROWS_AS(family_from_bounds(a, 3.0, 1.0), Error);
    CHECK_THROWS_AS(family_from_bounds(-a, 0.75, 1.0), Error);

    // traversal at rate b takes exactly T
    for (double b : {0.65, 0.75, 1.0, 1.2}) {
        const ControlSchedule sch = schedule_from_polygon(octagon_polygon(family_from_bounds(a, b, 1.0)), 1.0, b);
        CHECK(std::abs(sch.total_duration() - 1.0) < 1e-12);
    }
}

TEST_CASE("schedule realisation saturates the rate bound") {
    const double b = 0.9;
    const StrokePolygon p = octagon_polygon({0.1, 0.2, 0.15, 0.05});
    const ControlSchedule s = schedule_from_polygon(p, 10.0, b);
    REQUIRE(s.segments.size() == 8);
    CHECK(s.segments[0].duration == doctest::Approx(0.1 / b));
    CHECK(s.segments[0].rate.db1 == 0.0);
    CHECK(s.segments[0].rate.db3 == doctest::Approx(-b));
    CHECK(s.segments[1].duration == doctest::Approx(0.2 / std::sqrt(2.0) / b));
    CHECK(std::abs(s.segments[1].rate.db1) == doctest::Approx(b));
    CHECK(std::abs(s.segments[1].rate.db3) == doctest::Approx(b));
    CHECK(s.total_duration() == doctest::Approx(2 * (0.1 + 0.15 + (0.2 + 0.05) / std::sqrt(2.0)) / b));
    const PhasePoint net = s.net_shape_change();
    CHECK(std::abs(net.b1) < 1e-15);
    CHECK(std::abs(net.b3) < 1e-15);

    // does not fit in the period
    CHECK_THROWS_AS(schedule_from_polygon(p, 0.1, b), Error);
    CHECK_THROWS_AS(schedule_from_polygon(p, 10.0, 0.0), Error);
}

TEST_CASE("reversed stroke gives the reversed, negated schedule") {
    const double b = 1.3;
    const StrokePolygon p = octagon_polygon({0.1, 0.2, 0.15, 0.05});
    const ControlSchedule s = schedule_from_polygon(p, 10.0, b);
    const StrokePolygon r = reversed(p);
    CHECK(r.orientation == -1);
    CHECK(r.vertices[0].b1 == p.vertices[0].b1);
    const ControlSchedule rs = schedule_from_polygon(r, 10.0, b);
    const std::size_t n = s.segments.size();
    REQUIRE(rs.segments.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& f = s.segments[n - 1 - i];
        CHECK(rs.segments[i].duration == doctest::Approx(f.duration));
        CHECK(rs.segments[i].rate.db1 == doctest::Approx(-f.rate.db1));
        CHECK(rs.segments[i].rate.db3 == doctest::Approx(-f.rate.db3));
    }
}

TEST_CASE("enclosed area") {
    const double s = 0.3, d = 0.2, a = 0.25;
    CHECK(polygon_area(octagon_polygon({s, 0, s, 0})) == doctest::Approx(s * s).epsilon(1e-14));
    CHECK(polygon_area(octagon_polygon({0, d, 0, d})) == doctest::Approx(d * d).epsilon(1e-14));
    // bound-touching octagon: the square of side 2a minus four corner triangles
    const double dd = 0.1;
    const double e = 2 * (a - dd / std::sqrt(2.0));
    CHECK(polygon_area(octagon_polygon({e, dd, e, dd})) == doctest::Approx(4 * a * a - dd * dd).epsilon(1e-14));

    CHECK(polygon_area(reversed(octagon_polygon({s, 0, s, 0}))) == doctest::Approx(-s * s));

    // bow-tie
    StrokePolygon bowtie;
    bowtie.vertices = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    bowtie.free_form = true;
    CHECK_THROWS_AS(polygon_area(bowtie), Error);
}

TEST_CASE("reflections reverse orientation and preserve area magnitude") {
    const StrokePolygon p = octagon_polygon({0.1, 0.2, 0.15, 0.05}, {0.1, 0.0});
    const double area = polygon_area(p);
    const StrokePolygon d = reflected_diagonal(p);
    const StrokePolygon ad = reflected_antidiagonal(p);
    CHECK_NOTHROW(d.validate());
    CHECK_NOTHROW(ad.validate());
    CHECK(polygon_area(d) == doctest::Approx(-area));
    CHECK(polygon_area(ad) == doctest::Approx(-area));
    CHECK(d.vertices[0].b1 == p.vertices[0].b3);
    CHECK(ad.vertices[0].b1 == -p.vertices[0].b3);
}

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(make_polygon({{0, 0}, {1, 0}}), Error);
    CHECK_THROWS_AS(make_polygon({{0, 0}, {0, 0}, {1, 1}}), Error);
    CHECK_THROWS_AS(make_polygon({{0, 0}, {2, 1}, {0, 1}}), Error);
    CHECK_NOTHROW(make_polygon({{0, 0}, {2, 1}, {0, 1}}, true));
    StrokePolygon p = make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(p.orientation == 1);
    p.orientation = -1;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("schedule validation and repetition") {
    ControlSchedule s;
    CHECK_THROWS_AS(s.validate(), Error);
    s.segments = {{1.0, {1.0, 0.0}}, {1.0, {-1.0, 0.0}}};
    CHECK_NOTHROW(s.validate());
    s.segments[1].duration = 0.5;
    CHECK_THROWS_AS(s.validate(), Error);
    s.segments[1].duration = -1.0;
    CHECK_THROWS_AS(s.validate(), Error);

    s.segments = {{1.0, {1.0, 0.0}}, {1.0, {-1.0, 0.0}}};
    const ControlSchedule r = repeat(s, 3);
    CHECK(r.segments.size() == 6);
    CHECK(r.total_duration() == doctest::Approx(6.0));
    CHECK_THROWS_AS(repeat(s, 0), Error);
}

TEST_CASE("JSON round trip") {
    const StrokePolygon p = octagon_polygon({0.1, 0.2, 0.15, 0.05});
    const nlohmann::json j = p;
    const StrokePolygon q = j.get<StrokePolygon>();
    REQUIRE(q.vertices.size() == p.vertices.size());
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        CHECK(q.vertices[i].b1 == p.vertices[i].b1);
        CHECK(q.vertices[i].b3 == p.vertices[i].b3);
    }
    CHECK(q.orientation == p.orientation);

    nlohmann::json bad = j;
    bad["colour"] = "red";
    CHECK_THROWS_AS(bad.get<StrokePolygon>(), Error);
    bad = j;
    bad["orientation"] = -1;
    CHECK_THROWS_AS(bad.get<StrokePolygon>(), Error);

    const ControlSchedule s = schedule_from_polygon(p, 5.0, 1.0);
    const nlohmann::json js = s;
    const ControlSchedule t = js.get<ControlSchedule>();
    REQUIRE(t.segments.size() == s.segments.size());
    CHECK(t.total_duration() == doctest::Approx(s.total_duration()));
    nlohmann::json open = js;
    open["segments"][0][1] = 5.0;
    CHECK_THROWS_AS(open.get<ControlSchedule>(), Error);
}

TEST_CASE("bound-driven stroke plans") {
    const double a = pi / 20;
    StrokePlan p = plan_for_bounds(a, 0.5, 1.0);
    CHECK(p.family == "diamond");
    CHECK(p.repeats == 1);
    CHECK(max_abs(p.polygon, true) < a);

    p = plan_for_bounds(a, 0.75, 1.0);
    CHECK(p.family == "octagon");
    CHECK(p.repeats == 1);

    p = plan_for_bounds(a, 8 * a, 1.0);
    CHECK(p.family == "square");

    p = plan_for_bounds(a, 1.5, 1.0);
    CHECK(p.repeats == 2);
    CHECK(p.family == "octagon");
    CHECK(max_abs(p.polygon, true) == doctest::Approx(a).epsilon(1e-12));

    p = plan_for_bounds(a, 2.0, 1.0);
    CHECK(p.repeats == 2);

    p = plan_for_bounds(pi / 6, 4 * pi / 3, 1.0);
    CHECK(p.family == "square");
    CHECK(p.repeats == 1);
    CHECK(rel_diff(polygon_area(p.polygon), (pi / 3) * (pi / 3)) < 1e-12);

    CHECK_THROWS_AS(plan_for_bounds(0.0, 1.0, 1.0), Error);
}

}  // TEST_SUITE
