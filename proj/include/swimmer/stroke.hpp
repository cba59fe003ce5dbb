#pragma once

// Closed strokes in the (beta1, beta3) shape plane and their realisation as
// piecewise-constant joint-rate schedules.

#include "swimmer/dynamics.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace swimmer {

struct PhasePoint {
    double b1 = 0.0;
    double b3 = 0.0;
};

// Closed polygon; the last vertex connects back to the first.  Orientation
// is +1 for counter-clockwise traversal in the (beta1, beta3) plane.
struct StrokePolygon {
    std::vector<PhasePoint> vertices;
    int orientation = 1;
    bool free_form = false;  // edges of arbitrary slope allowed

    // Checks vertex count, distinct neighbours, edge slopes and that the
    // stored orientation agrees with the signed area.
    void validate() const;
};

// Builds a polygon and fills in its orientation from the signed area.
StrokePolygon make_polygon(std::vector<PhasePoint> vertices, bool free_form = false);

// Side lengths of the centrally symmetric octagon.  Odd sides (a1, a3) are
// axis-aligned, even sides (a2, a4) are diagonal.
struct OctagonSpec {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a4 = 0.0;

    double perimeter() const { return 2.0 * (a1 + a2 + a3 + a4); }
    void validate() const;
};

struct ScheduleSegment {
    double duration = 0.0;
    ShapeRate rate;
};

struct ControlSchedule {
    std::vector<ScheduleSegment> segments;

    double total_duration() const;
    // Net shape change over the schedule.
    PhasePoint net_shape_change() const;
    // durations > 0, finite rates, closure to `closure_tol`.
    void validate(double closure_tol = 1e-12) const;
};

// Starts on the left vertical side going down (beta3 decreasing) and runs
// counter-clockwise.  Zero-length sides are dropped.
StrokePolygon octagon_polygon(const OctagonSpec& spec, PhasePoint center = {});

// The stroke that saturates |rate| = b everywhere and touches |beta| = a,
// traversed in exactly T.  Requires 4a/T <= b <= 8a/T.
OctagonSpec family_from_bounds(double a, double b, double T);

// Saturated diamond of period T that stays inside the amplitude box; valid
// for b <= 4a/T.
OctagonSpec diamond_for_period(double b, double T);

ControlSchedule schedule_from_polygon(const StrokePolygon& poly, double T, double b);

// Repeat a schedule `count` times back to back.
ControlSchedule repeat(const ControlSchedule& schedule, int count);

double polygon_area(const StrokePolygon& poly);

StrokePolygon reversed(const StrokePolygon& poly);
StrokePolygon reflected_diagonal(const StrokePolygon& poly);       // beta1 <-> beta3
StrokePolygon reflected_antidiagonal(const StrokePolygon& poly);   // (b1,b3) -> (-b3,-b1)

// A polygon traversed `repeats` times.  The shape of an optimal stroke for
// given bounds (a, b, T) is one of these.
struct StrokePlan {
    StrokePolygon polygon;
    int repeats = 1;
    double period = 1.0;  // total time for all repeats
    std::string family = "octagon";  // diamond | octagon | square
};

// Bound-driven stroke selection: diamond below 4a/T, octagon family up to
// 8a/T, and k equal sub-period octagons beyond.
StrokePlan plan_for_bounds(double a, double b, double T);

void to_json(nlohmann::json& j, const PhasePoint& p);
void to_json(nlohmann::json& j, const StrokePolygon& poly);
void from_json(const nlohmann::json& j, StrokePolygon& poly);
void to_json(nlohmann::json& j, const ControlSchedule& schedule);
void from_json(const nlohmann::json& j, ControlSchedule& schedule);

}  // namespace swimmer
