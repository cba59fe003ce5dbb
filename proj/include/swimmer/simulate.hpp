#pragma once

// Fixed-step integration of stroke schedules and design-ratio sweeps.

#include "swimmer/dynamics.hpp"
#include "swimmer/stroke.hpp"

#include <iosfwd>
#include <vector>

namespace swimmer {

enum class Scheme {
    ImplicitMidpoint,  // time-symmetric, matches the optimal-control transcription
    RungeKutta4,       // explicit cross-check
};

struct IntegrateOptions {
    Scheme scheme = Scheme::ImplicitMidpoint;
    double tol = 1e-13;  // implicit step residual, scaled by max(1, |z|)
    int max_fixed_point = 60;
    int max_newton = 20;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SwimmerState> states;
    ControlSchedule schedule;

    const SwimmerState& final_state() const { return states.back(); }
};

struct Displacement {
    double dx = 0.0;
    double dy = 0.0;
    double dtheta = 0.0;
};

// One implicit-midpoint step z+ = z + h f((z + z+)/2, u).  Throws
// Error(Solver) if neither fixed-point nor Newton iterations converge.
Vec5 implicit_midpoint_step(const DesignParams& params, const Vec5& z, const Vec2& u, double h,
                            const IntegrateOptions& opts = {});

Vec5 rk4_step(const DesignParams& params, const Vec5& z, const Vec2& u, double h);

// n_steps are spread over the segments in proportion to their durations
// (at least one each); segment boundaries are step boundaries.
Trajectory integrate(const DesignParams& params, const SwimmerState& z0,
                     const ControlSchedule& schedule, int n_steps,
                     const IntegrateOptions& opts = {});

// Net pose change over one traversal of `poly` at saturated rate b, starting
// from the aligned pose with the shape at the first vertex.
Displacement stroke_displacement(const DesignParams& params, const StrokePolygon& poly, double T,
                                 double b, int n_steps = 1000, const IntegrateOptions& opts = {});

// The plan's polygon at saturated rate b, repeated; each traversal takes
// period / repeats.
ControlSchedule plan_schedule(const StrokePlan& plan, double b);

// As above for a repeated stroke; n_steps is per repeat.
Displacement plan_displacement(const DesignParams& params, const StrokePlan& plan, double b,
                               int n_steps = 1000, const IntegrateOptions& opts = {});

struct SweepOptions {
    double ratio_min = 0.3;
    double ratio_max = 2.5;
    int points = 45;
    bool refine = true;
    double ratio_tol = 1e-4;
    int steps = 1000;
    int threads = 0;  // 0: default_thread_count()
};

struct SweepResult {
    std::vector<double> ratios;
    std::vector<double> displacements;
    double best_ratio = 0.0;
    double best_dx = 0.0;
};

// Simulates the plan for each L2/L on the grid at fixed 2L + L2 = c, then
// refines the grid argmax by golden-section search.
SweepResult ratio_sweep(double c, const DragModel& drag, const StrokePlan& plan, double b,
                        const SweepOptions& opts = {});

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

// SWIMMER_THREADS if set, else the hardware concurrency.
int default_thread_count();

}  // namespace swimmer
