// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include "swimmer/dynamics.hpp"
#include "swimmer/expansion.hpp"
#include "swimmer/experiments.hpp"
#include "swimmer/ocp.hpp"
#include "swimmer/simulate.hpp"
#include "swimmer/stroke.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace swimmer;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > limit_seconds) {
        o.pass = false;
        o.detail += " (over the time limit)";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s [%.2f s / %.0f s] %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, limit_seconds,
                o.detail.c_str());
    std::fflush(stdout);
}

DesignParams random_design(std::mt19937& rng) {
    std::uniform_real_distribution<double> len(0.2, 3.0), drag(0.2, 5.0);
    DesignParams p;
    p.L = len(rng);
    p.L2 = len(rng);
    p.drag = {drag(rng), drag(rng)};
    return p;
}

SwimmerState random_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> ang(-pi, pi), pos(-5.0, 5.0);
    return {ang(rng), ang(rng), pos(rng), pos(rng), ang(rng)};
}

Outcome bracket_exactness() {
    std::mt19937 rng(2024);
    double worst_rel = 0.0, worst_other = 0.0;
    for (int i = 0; i < 20; ++i) {
        const DesignParams p = random_design(rng);
        const Vec5 v = lie_bracket_numeric(p, {}, 1e-5).vec;
        const double exact = bracket_x_aligned(p);
        worst_rel = std::max(worst_rel, std::abs(v[2] - exact) / std::abs(exact));
        for (int k : {0, 1, 3, 4}) worst_other = std::max(worst_other, std::abs(v[k]));
    }
    std::ostringstream d;
    d << "max rel error " << worst_rel << ", max |non-x| " << worst_other;
    return {worst_rel < 1e-6 && worst_other < 1e-7, d.str()};
}

Outcome table1() {
    const nlohmann::json t = run_table1(Table1Config{});
    bool ok = t["rows"].size() == 7;
    double worst = 0.0;
    for (const auto& row : t["rows"]) {
        const double dev = std::abs(row["rel_deviation"].get<double>());
        worst = std::max(worst, dev);
        ok = ok && dev < 0.03;
    }
    std::ostringstream d;
    d << t["rows"].size() << " rows, max |deviation| " << 100 * worst << "%";
    return {ok, d.str()};
}

Outcome optimal_ratio() {
    const double a = pi / 20;
    bool ok = true;
    std::ostringstream d;
    for (double b : {8 * a, 0.5, 1.0}) {
        const StrokePlan plan = plan_for_bounds(a, b, 1.0);
        const SweepResult r = ratio_sweep(4.0, {}, plan, b);
        ok = ok && r.best_ratio >= 0.71 && r.best_ratio <= 0.73;
        d << plan.family << " " << r.best_ratio << "; ";
    }
    return {ok, d.str()};
}

Outcome purcell_comparison() {
    const nlohmann::json t = run_table2(Table2Config{});
    bool ok = t["rows"].size() == 4;
    std::ostringstream d;
    for (const auto& row : t["rows"]) {
        const double pp = row["gain_deviation_pp"].get<double>();
        const double base = row["purcell_rel_deviation"].get<double>();
        ok = ok && std::abs(pp) <= 10.0 && std::abs(base) <= 0.10;
        d << row["label"].get<std::string>() << ": gain " << 100 * row["gain"].get<double>() << "% ("
          << (pp >= 0 ? "+" : "") << pp << " pp), baseline " << 100 * base << "%; ";
    }
    return {ok, d.str()};
}

Outcome leading_order() {
    const OptimalDesign od = optimal_design(4.0);
    DesignParams p;
    p.L = od.L;
    p.L2 = od.L2;
    const double b = 0.75;
    const OctagonSpec base = family_from_bounds(pi / 20, b, 1.0);
    std::ostringstream d;
    bool ok = true;
    double prev = 0.0;
    for (double lambda : {1.0, 0.5, 0.25}) {
        const OctagonSpec s{lambda * base.a1, lambda * base.a2, lambda * base.a3, lambda * base.a4};
        const double sim = stroke_displacement(p, octagon_polygon(s), 1.0, lambda * b).dx;
        const double dev = std::abs(sim / predict_displacement(s, p).delta_x - 1.0);
        if (lambda < 1.0) ok = ok && dev * 2.0 <= prev;
        d << "lambda " << lambda << ": " << dev << "; ";
        prev = dev;
    }
    return {ok, d.str()};
}

Outcome structure() {
    std::ostringstream d;
    bool ok = true;

    // reciprocal stroke
    ControlSchedule out_back;
    out_back.segments = {{0.5, {0.6, -0.2}}, {0.5, {-0.6, 0.2}}};
    const Trajectory rec = integrate(DesignParams{}, {0.2, -0.1, 0, 0, 0.3}, out_back, 400);
    const double dx_rec = std::abs(rec.final_state().x - rec.states.front().x);
    ok = ok && dx_rec < 1e-10;
    d << "reciprocal |dx| " << dx_rec;

    // stroke then its reverse
    const StrokePlan plan = plan_for_bounds(pi / 6, 4 * pi / 3, 1.0);
    ControlSchedule both = plan_schedule(plan, 4 * pi / 3);
    const std::size_t n = both.segments.size();
    for (std::size_t i = n; i-- > 0;) {
        const auto s = both.segments[i];
        both.segments.push_back({s.duration, {-s.rate.db1, -s.rate.db3}});
    }
    const SwimmerState z0{plan.polygon.vertices[0].b1, plan.polygon.vertices[0].b3, 0, 0, 0};
    const double ret = (integrate(DesignParams{}, z0, both, 4000).final_state().vec() - z0.vec()).cwiseAbs().maxCoeff();
    ok = ok && ret < 1e-10;
    d << ", return error " << ret;

    // A symmetric positive definite
    std::mt19937 rng(77);
    int spd = 0;
    for (int i = 0; i < 1000; ++i) {
        const Mat3 A = assemble_resistance(random_design(rng), random_state(rng)).A;
        const bool sym = (A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * A.cwiseAbs().maxCoeff();
        if (sym && Eigen::SelfAdjointEigenSolver<Mat3>(A).eigenvalues().minCoeff() > 0.0) ++spd;
    }
    ok = ok && spd == 1000;
    d << ", SPD " << spd << "/1000";

    // SE(2) equivariance
    double worst = 0.0;
    std::uniform_real_distribution<double> U(-pi, pi);
    for (int i = 0; i < 200; ++i) {
        const DesignParams p = random_design(rng);
        const SwimmerState z = random_state(rng);
        const double phi = U(rng);
        const Eigen::Rotation2Dd R(phi);
        const Vec2 moved = R * Vec2(z.x, z.y) + Vec2(U(rng), U(rng));
        const Mat52 G = field_matrix(p, z.vec());
        const Mat52 H = field_matrix(p, SwimmerState{z.beta1, z.beta3, moved.x(), moved.y(), z.theta + phi}.vec());
        Mat52 expect = G;
        expect.middleRows<2>(2) = R.toRotationMatrix() * G.middleRows<2>(2);
        worst = std::max(worst, (H - expect).cwiseAbs().maxCoeff());
    }
    ok = ok && worst < 1e-10;
    d << ", SE(2) error " << worst;
    return {ok, d.str()};
}

Outcome ocp_recovery() {
    OcpSpec spec;
    spec.a = pi / 20;
    spec.b = 1.0;
    spec.T = 1.0;
    spec.N = 100;
    const OcpSolution s = solve(NlpProblem(spec));
    const bool ok = s.objective >= 0.95 * 7.73e-3 && s.max_violation < 1e-8 && s.stroke.label() == "octagon" &&
                    s.ratio >= 0.70 && s.ratio <= 0.74;
    std::ostringstream d;
    d << "x(T) " << s.objective << " (" << 100 * s.objective / 7.73e-3 << "% of 7.73e-3), violation "
      << s.max_violation << ", " << s.stroke.label() << ", ratio " << s.ratio;

    // best effort, not gating: large amplitude at desk scale
    try {
        Table3Config cfg;
        cfg.rows = {pi / 3};
        const nlohmann::json t = run_table3(cfg);
        const auto& row = t["rows"][0];
        if (row.contains("ratio") && row["ratio"].is_number()) {
            const double r = row["ratio"].get<double>();
            d << "; large amplitude (a = pi/3, T = " << cfg.T << ", N = " << cfg.N << "): ratio " << r << ", "
              << row["stroke"].get<std::string>() << ", "
              << (r >= 0.64 && r <= 0.70 ? "within [0.64, 0.70]" : "outside [0.64, 0.70], local solution");
        } else {
            d << "; large amplitude run failed: " << row.dump();
        }
    } catch (const std::exception& e) {
        d << "; large amplitude run failed: " << e.what();
    }
    return {ok, d.str()};
}

}  // namespace

int main() {
    criterion(1, "bracket exactness", 1.0, bracket_exactness);
    criterion(2, "small-amplitude table", 30.0, table1);
    criterion(3, "optimal ratio at small amplitude", 60.0, optimal_ratio);
    criterion(4, "optimal design vs classical swimmer", 120.0, purcell_comparison);
    criterion(5, "leading-order convergence", 10.0, leading_order);
    criterion(6, "scallop and structure properties", 10.0, structure);
    criterion(7, "optimal control recovery", 600.0, ocp_recovery);
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
