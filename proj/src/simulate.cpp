#include "swimmer/simulate.hpp"

#include "swimmer/error.hpp"
#include "swimmer/optim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace swimmer {

namespace {

// d(G u)/dz for the midpoint Newton fallback.
Mat5 field_jacobian(const DesignParams& params, const Vec5& z, const Vec2& u) {
    const FieldSensitivity s = field_sensitivity(params, z);
    Mat5 J = Mat5::Zero();
    J.col(0) = s.d_beta1 * u;
    J.col(1) = s.d_beta3 * u;
    J.col(4) = s.d_theta * u;
    return J;
}

void check_step(const Vec5& z, const char* where) {
    if (!z.allFinite()) {
        throw Error(ErrorKind::Numerical, std::string("non-finite state in ") + where);
    }
}

}  // namespace

Vec5 implicit_midpoint_step(const DesignParams& params, const Vec5& z, const Vec2& u, double h,
                            const IntegrateOptions& opts) {
    if (u.isZero(0.0)) return z;
    const double scale = std::max(1.0, z.lpNorm<Eigen::Infinity>());
    const double tol = opts.tol * scale;

    Vec5 next = z + h * rhs(params, z, u);
    for (int it = 0; it < opts.max_fixed_point; ++it) {
        const Vec5 trial = z + h * rhs(params, 0.5 * (z + next), u);
        const double change = (trial - next).lpNorm<Eigen::Infinity>();
        next = trial;
        if (change <= tol) return next;
    }

    // Newton on r(w) = w - z - h G((z + w)/2) u with backtracking.
    auto residual = [&](const Vec5& w) -> Vec5 { return w - z - h * rhs(params, 0.5 * (z + w), u); };
    Vec5 r = residual(next);
    for (int it = 0; it < opts.max_newton; ++it) {
        if (r.lpNorm<Eigen::Infinity>() <= tol) return next;
        const Mat5 J = Mat5::Identity() - 0.5 * h * field_jacobian(params, 0.5 * (z + next), u);
        const Vec5 step = J.partialPivLu().solve(-r);
        double alpha = 1.0;
        for (int ls = 0; ls < 30; ++ls) {
            const Vec5 cand = next + alpha * step;
            const Vec5 rc = residual(cand);
            if (rc.lpNorm<Eigen::Infinity>() < r.lpNorm<Eigen::Infinity>() || ls == 29) {
                next = cand;
                r = rc;
                break;
            }
            alpha *= 0.5;
        }
    }
    if (r.lpNorm<Eigen::Infinity>() <= tol) return next;
    std::ostringstream msg;
    msg << "implicit midpoint step did not converge (residual " << r.lpNorm<Eigen::Infinity>() << ")";
    throw Error(ErrorKind::Solver, msg.str());
}

Vec5 rk4_step(const DesignParams& params, const Vec5& z, const Vec2& u, double h) {
    const Vec5 k1 = rhs(params, z, u);
    const Vec5 k2 = rhs(params, z + 0.5 * h * k1, u);
    const Vec5 k3 = rhs(params, z + 0.5 * h * k2, u);
    const Vec5 k4 = rhs(params, z + h * k3, u);
    return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate(const DesignParams& params, const SwimmerState& z0,
                     const ControlSchedule& schedule, int n_steps, const IntegrateOptions& opts) {
    params.validate();
    if (schedule.segments.empty()) fail_validation("control schedule has no segments");
    if (n_steps < 1) fail_validation("n_steps must be >= 1");
    const double total = schedule.total_duration();
    if (!(total > 0.0)) fail_validation("schedule has zero total duration");

    Trajectory traj;
    traj.schedule = schedule;
    traj.times.push_back(0.0);
    traj.states.push_back(z0);

    Vec5 z = z0.vec();
    double t = 0.0;
    std::size_t step_index = 0;
    for (const auto& seg : schedule.segments) {
        if (!(seg.duration > 0.0)) fail_validation("schedule segment with non-positive duration");
        const int n = std::max(1, static_cast<int>(std::lround(n_steps * seg.duration / total)));
        const double h = seg.duration / n;
        const Vec2 u = seg.rate.vec();
        for (int k = 0; k < n; ++k, ++step_index) {
            try {
                z = opts.scheme == Scheme::ImplicitMidpoint ? implicit_midpoint_step(params, z, u, h, opts)
                                                            : rk4_step(params, z, u, h);
            } catch (const Error& e) {
                std::ostringstream msg;
                msg << e.what() << " at step " << step_index;
                throw Error(e.kind(), msg.str());
            }
            check_step(z, "integrate");
            t += h;
            traj.times.push_back(t);
            traj.states.push_back(SwimmerState::from_vec(z));
        }
    }
    return traj;
}

Displacement stroke_displacement(const DesignParams& params, const StrokePolygon& poly, double T,
                                 double b, int n_steps, const IntegrateOptions& opts) {
    StrokePlan plan;
    plan.polygon = poly;
    plan.period = T;
    return plan_displacement(params, plan, b, n_steps, opts);
}

ControlSchedule plan_schedule(const StrokePlan& plan, double b) {
    if (plan.repeats < 1) fail_validation("a stroke plan needs at least one repeat");
    return repeat(schedule_from_polygon(plan.polygon, plan.period / plan.repeats, b), plan.repeats);
}

Displacement plan_displacement(const DesignParams& params, const StrokePlan& plan, double b,
                               int n_steps, const IntegrateOptions& opts) {
    const ControlSchedule all = plan_schedule(plan, b);
    SwimmerState z0;
    z0.beta1 = plan.polygon.vertices.front().b1;
    z0.beta3 = plan.polygon.vertices.front().b3;
    const Trajectory traj = integrate(params, z0, all, n_steps * plan.repeats, opts);
    const SwimmerState& zf = traj.final_state();
    return {zf.x - z0.x, zf.y - z0.y, zf.theta - z0.theta};
}

int default_thread_count() {
    if (const char* env = std::getenv("SWIMMER_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult ratio_sweep(double c, const DragModel& drag, const StrokePlan& plan, double b,
                        const SweepOptions& opts) {
    if (!(c > 0.0)) fail_validation("total length must be positive");
    if (!(opts.ratio_min > 0.0) || !(opts.ratio_max > opts.ratio_min)) {
        fail_validation("sweep grid must satisfy 0 < ratio_min < ratio_max");
    }
    if (opts.points < 3) fail_validation("sweep grid needs at least 3 points");
    drag.validate();

    auto displacement = [&](double ratio) {
        return plan_displacement(DesignParams::from_ratio(ratio, c, drag), plan, b, opts.steps).dx;
    };

    SweepResult result;
    result.ratios.resize(opts.points);
    result.displacements.resize(opts.points);
    for (int i = 0; i < opts.points; ++i) {
        result.ratios[i] = opts.ratio_min + (opts.ratio_max - opts.ratio_min) * i / (opts.points - 1);
    }

    const int threads = std::clamp(opts.threads > 0 ? opts.threads : default_thread_count(), 1, opts.points);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < opts.points; i += threads) {
                    result.displacements[i] = displacement(result.ratios[i]);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    const auto best = std::max_element(result.displacements.begin(), result.displacements.end());
    const int i = static_cast<int>(best - result.displacements.begin());
    result.best_ratio = result.ratios[i];
    result.best_dx = *best;
    if (opts.refine) {
        const double lo = result.ratios[std::max(0, i - 1)];
        const double hi = result.ratios[std::min(opts.points - 1, i + 1)];
        const GoldenResult g = golden_section_max(displacement, lo, hi, opts.ratio_tol);
        if (g.value >= result.best_dx) {
            result.best_ratio = g.x;
            result.best_dx = g.value;
        }
    }
    return result;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,beta1,beta3,x,y,theta\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const SwimmerState& s = traj.states[i];
        out << traj.times[i] << ',' << s.beta1 << ',' << s.beta3 << ',' << s.x << ',' << s.y << ','
            << s.theta << '\n';
    }
}

}  // namespace swimmer
