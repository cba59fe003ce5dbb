#include "swimmer/stroke.hpp"

#include "swimmer/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace swimmer {

namespace {

constexpr double kRelTol = 1e-12;

double shoelace(const std::vector<PhasePoint>& v) {
    double twice = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const PhasePoint& p = v[i];
        const PhasePoint& q = v[(i + 1) % n];
        twice += p.b1 * q.b3 - q.b1 * p.b3;
    }
    return 0.5 * twice;
}

double orient(const PhasePoint& a, const PhasePoint& b, const PhasePoint& c) {
    return (b.b1 - a.b1) * (c.b3 - a.b3) - (b.b3 - a.b3) * (c.b1 - a.b1);
}

bool on_segment(const PhasePoint& a, const PhasePoint& b, const PhasePoint& p) {
    return std::min(a.b1, b.b1) <= p.b1 && p.b1 <= std::max(a.b1, b.b1) &&
           std::min(a.b3, b.b3) <= p.b3 && p.b3 <= std::max(a.b3, b.b3);
}

bool segments_touch(const PhasePoint& p1, const PhasePoint& p2, const PhasePoint& q1,
                    const PhasePoint& q2) {
    const double d1 = orient(q1, q2, p1);
    const double d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1);
    const double d4 = orient(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    return (d1 == 0 && on_segment(q1, q2, p1)) || (d2 == 0 && on_segment(q1, q2, p2)) ||
           (d3 == 0 && on_segment(p1, p2, q1)) || (d4 == 0 && on_segment(p1, p2, q2));
}

bool self_intersecting(const std::vector<PhasePoint>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // adjacent edges share a vertex by construction
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_touch(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return true;
        }
    }
    return false;
}

enum class EdgeKind { Vertical, Horizontal, Diagonal, Other };

EdgeKind classify_edge(double d1, double d3) {
    const double scale = std::max(std::abs(d1), std::abs(d3));
    const double tol = 1e-9 * scale;
    if (std::abs(d1) <= tol) return EdgeKind::Vertical;
    if (std::abs(d3) <= tol) return EdgeKind::Horizontal;
    if (std::abs(std::abs(d1) - std::abs(d3)) <= tol) return EdgeKind::Diagonal;
    return EdgeKind::Other;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

void StrokePolygon::validate() const {
    const std::size_t n = vertices.size();
    if (n < 3) fail_validation("stroke polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
        const PhasePoint& p = vertices[i];
        const PhasePoint& q = vertices[(i + 1) % n];
        if (!std::isfinite(p.b1) || !std::isfinite(p.b3)) fail_validation("non-finite polygon vertex");
        if (p.b1 == q.b1 && p.b3 == q.b3) {
            std::ostringstream msg;
            msg << "polygon vertices " << i << " and " << (i + 1) % n << " coincide";
            fail_validation(msg.str());
        }
        if (!free_form && classify_edge(q.b1 - p.b1, q.b3 - p.b3) == EdgeKind::Other) {
            std::ostringstream msg;
            msg << "polygon edge " << i << " is neither axis-aligned nor diagonal";
            fail_validation(msg.str());
        }
    }
    if (orientation != 1 && orientation != -1) fail_validation("polygon orientation must be +1 or -1");
    const double area = shoelace(vertices);
    if (area == 0.0) fail_validation("polygon has zero area");
    if ((area > 0.0 ? 1 : -1) != orientation) {
        fail_validation("polygon orientation disagrees with its signed area");
    }
}

StrokePolygon make_polygon(std::vector<PhasePoint> vertices, bool free_form) {
    StrokePolygon poly;
    poly.vertices = std::move(vertices);
    poly.free_form = free_form;
    poly.orientation = shoelace(poly.vertices) >= 0.0 ? 1 : -1;
    poly.validate();
    return poly;
}

void OctagonSpec::validate() const {
    const double a[4] = {a1, a2, a3, a4};
    int nonzero = 0;
    for (double v : a) {
        if (!(v >= 0.0) || !std::isfinite(v)) fail_validation("octagon side lengths must be finite and >= 0");
        if (v > 0.0) ++nonzero;
    }
    if (nonzero < 2) fail_validation("octagon needs at least two nonzero side lengths");
}

double ControlSchedule::total_duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration;
    return t;
}

PhasePoint ControlSchedule::net_shape_change() const {
    PhasePoint d;
    for (const auto& s : segments) {
        d.b1 += s.duration * s.rate.db1;
        d.b3 += s.duration * s.rate.db3;
    }
    return d;
}

void ControlSchedule::validate(double closure_tol) const {
    if (segments.empty()) fail_validation("control schedule has no segments");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
            std::ostringstream msg;
            msg << "schedule segment " << i << " has non-positive duration";
            fail_validation(msg.str());
        }
        if (!std::isfinite(s.rate.db1) || !std::isfinite(s.rate.db3)) fail_validation("non-finite schedule rate");
    }
    const PhasePoint d = net_shape_change();
    if (std::abs(d.b1) > closure_tol || std::abs(d.b3) > closure_tol) {
        std::ostringstream msg;
        msg << "control schedule is not closed: net shape change (" << d.b1 << ", " << d.b3 << ")";
        fail_validation(msg.str());
    }
}

StrokePolygon octagon_polygon(const OctagonSpec& spec, PhasePoint center) {
    spec.validate();
    const double r = std::sqrt(0.5);
    const Vec2 dirs[8] = {{0, -1}, {r, -r}, {1, 0}, {r, r}, {0, 1}, {-r, r}, {-1, 0}, {-r, -r}};
    const double len[4] = {spec.a1, spec.a2, spec.a3, spec.a4};

    Vec2 half_turn = Vec2::Zero();
    for (int i = 0; i < 4; ++i) half_turn += len[i] * dirs[i];
    Vec2 p = Vec2(center.b1, center.b3) - 0.5 * half_turn;

    std::vector<PhasePoint> vertices;
    vertices.push_back({p.x(), p.y()});
    for (int i = 0; i < 7; ++i) {
        if (len[i % 4] == 0.0) continue;
        p += len[i % 4] * dirs[i];
        vertices.push_back({p.x(), p.y()});
    }
    // a zero closing side means the last vertex is the start vertex again
    if (len[3] == 0.0) vertices.pop_back();
    StrokePolygon poly;
    poly.vertices = std::move(vertices);
    poly.orientation = 1;
    poly.validate();
    return poly;
}

OctagonSpec family_from_bounds(double a, double b, double T) {
    if (!(a > 0.0) || !(b > 0.0) || !(T > 0.0)) fail_validation("a, b and T must be positive");
    const double lo = 4.0 * a / T;
    const double hi = 8.0 * a / T;
    if (b < lo * (1.0 - kRelTol) || b > hi * (1.0 + kRelTol)) {
        std::ostringstream msg;
        msg << "rate bound b = " << b << " is outside the octagon regime [" << lo << ", " << hi
            << "]; use a scaled diamond (b < 4a/T) or a multi-stroke sequence (b > 8a/T)";
        fail_validation(msg.str());
    }
    const double diag_proj = std::max(0.0, 2.0 * a - b * T / 4.0);  // d / sqrt(2)
    const double axis = std::max(0.0, b * T / 2.0 - 2.0 * a);
    OctagonSpec spec;
    spec.a1 = spec.a3 = axis;
    spec.a2 = spec.a4 = diag_proj * std::sqrt(2.0);
    return spec;
}

OctagonSpec diamond_for_period(double b, double T) {
    if (!(b > 0.0) || !(T > 0.0)) fail_validation("b and T must be positive");
    OctagonSpec spec;
    spec.a2 = spec.a4 = std::sqrt(2.0) * b * T / 4.0;
    return spec;
}

ControlSchedule schedule_from_polygon(const StrokePolygon& poly, double T, double b) {
    poly.validate();
    if (!(b > 0.0) || !std::isfinite(b)) fail_validation("rate bound b must be positive");
    if (!(T > 0.0)) fail_validation("period T must be positive");

    ControlSchedule schedule;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const PhasePoint& p = poly.vertices[i];
        const PhasePoint& q = poly.vertices[(i + 1) % n];
        const double d1 = q.b1 - p.b1;
        const double d3 = q.b3 - p.b3;
        ScheduleSegment seg;
        switch (classify_edge(d1, d3)) {
            case EdgeKind::Vertical:
                seg.duration = std::abs(d3) / b;
                seg.rate = {0.0, sign(d3) * b};
                break;
            case EdgeKind::Horizontal:
                seg.duration = std::abs(d1) / b;
                seg.rate = {sign(d1) * b, 0.0};
                break;
            case EdgeKind::Diagonal:
                seg.duration = 0.5 * (std::abs(d1) + std::abs(d3)) / b;
                seg.rate = {d1 / seg.duration, d3 / seg.duration};
                break;
            case EdgeKind::Other: {
                std::ostringstream msg;
                msg << "edge " << i << " is free-form and has no saturated-rate realisation";
                fail_validation(msg.str());
            }
        }
        schedule.segments.push_back(seg);
    }
    const double total = schedule.total_duration();
    if (total > T * (1.0 + kRelTol)) {
        std::ostringstream msg;
        msg << "stroke needs " << total << " time units at rate bound " << b << " but T = " << T;
        fail_validation(msg.str());
    }
    schedule.validate();
    return schedule;
}

ControlSchedule repeat(const ControlSchedule& schedule, int count) {
    if (count < 1) fail_validation("repeat count must be >= 1");
    ControlSchedule out;
    out.segments.reserve(schedule.segments.size() * static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        out.segments.insert(out.segments.end(), schedule.segments.begin(), schedule.segments.end());
    }
    return out;
}

double polygon_area(const StrokePolygon& poly) {
    if (poly.vertices.size() < 3) fail_validation("stroke polygon needs at least 3 vertices");
    if (self_intersecting(poly.vertices)) fail_validation("polygon is self-intersecting");
    return shoelace(poly.vertices);
}

StrokePolygon reversed(const StrokePolygon& poly) {
    StrokePolygon out = poly;
    std::reverse(out.vertices.begin() + 1, out.vertices.end());
    out.orientation = -poly.orientation;
    return out;
}

StrokePolygon reflected_diagonal(const StrokePolygon& poly) {
    StrokePolygon out = poly;
    for (auto& v : out.vertices) std::swap(v.b1, v.b3);
    out.orientation = -poly.orientation;
    return out;
}

StrokePolygon reflected_antidiagonal(const StrokePolygon& poly) {
    StrokePolygon out = poly;
    for (auto& v : out.vertices) v = {-v.b3, -v.b1};
    out.orientation = -poly.orientation;
    return out;
}

StrokePlan plan_for_bounds(double a, double b, double T) {
    if (!(a > 0.0) || !(b > 0.0) || !(T > 0.0)) fail_validation("a, b and T must be positive");
    StrokePlan plan;
    plan.period = T;
    if (b * T < 4.0 * a * (1.0 - kRelTol)) {
        plan.polygon = octagon_polygon(diamond_for_period(b, T));
        plan.family = "diamond";
        return plan;
    }
    int k = 1;
    if (b * T > 8.0 * a * (1.0 + kRelTol)) {
        k = static_cast<int>(std::ceil(b * T / (8.0 * a) - kRelTol));
    }
    const OctagonSpec spec = family_from_bounds(a, b, T / k);
    plan.polygon = octagon_polygon(spec);
    plan.repeats = k;
    if (spec.a2 == 0.0) {
        plan.family = "square";
    } else if (spec.a1 == 0.0) {
        plan.family = "diamond";
    } else {
        plan.family = "octagon";
    }
    return plan;
}

void to_json(nlohmann::json& j, const PhasePoint& p) { j = nlohmann::json::array({p.b1, p.b3}); }

void to_json(nlohmann::json& j, const StrokePolygon& poly) {
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : poly.vertices) verts.push_back({v.b1, v.b3});
    j = nlohmann::json{{"vertices", verts}, {"orientation", poly.orientation}};
    if (poly.free_form) j["free_form"] = true;
}

void from_json(const nlohmann::json& j, StrokePolygon& poly) {
    if (!j.is_object()) fail_validation("polygon must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (key != "vertices" && key != "orientation" && key != "free_form") {
            fail_validation("unknown polygon key '" + key + "'");
        }
    }
    if (!j.contains("vertices") || !j.contains("orientation")) {
        fail_validation("polygon requires 'vertices' and 'orientation'");
    }
    poly.vertices.clear();
    for (const auto& v : j.at("vertices")) {
        if (!v.is_array() || v.size() != 2) fail_validation("polygon vertex must be [b1, b3]");
        poly.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    poly.orientation = j.at("orientation").get<int>();
    poly.free_form = j.value("free_form", false);
    poly.validate();
}

void to_json(nlohmann::json& j, const ControlSchedule& schedule) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : schedule.segments) segs.push_back({s.duration, s.rate.db1, s.rate.db3});
    j = nlohmann::json{{"segments", segs}};
}

void from_json(const nlohmann::json& j, ControlSchedule& schedule) {
    if (!j.is_object() || !j.contains("segments")) fail_validation("schedule requires 'segments'");
    for (const auto& [key, _] : j.items()) {
        if (key != "segments") fail_validation("unknown schedule key '" + key + "'");
    }
    schedule.segments.clear();
    for (const auto& s : j.at("segments")) {
        if (!s.is_array() || s.size() != 3) fail_validation("schedule segment must be [dt, db1, db3]");
        schedule.segments.push_back({s[0].get<double>(), {s[1].get<double>(), s[2].get<double>()}});
    }
    schedule.validate();
}

}  // namespace swimmer
