#include "swimmer/ocp.hpp"

#include "swimmer/error.hpp"
#include "swimmer/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace swimmer {

void OcpSpec::validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) fail_validation("ocp.a must be positive");
    if (!(b > 0.0) || !std::isfinite(b)) fail_validation("ocp.b must be positive");
    if (!(c > 0.0) || !std::isfinite(c)) fail_validation("ocp.c must be positive");
    if (!(T > 0.0) || !std::isfinite(T)) fail_validation("ocp.T must be positive");
    if (N < 10) fail_validation("ocp.N must be at least 10");
    if (design_mode == DesignMode::FixedL && !(fixed_L > 0.0 && fixed_L < c / 2.0)) {
        fail_validation("fixed L must lie in (0, c/2)");
    }
    drag.validate();
}

NlpProblem::NlpProblem(OcpSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    n_ = num_states() + num_controls() + (free_design() ? 1 : 0);
    m_ = num_defects() + 7;
    const double inf = std::numeric_limits<double>::infinity();
    lower_ = VectorXd::Constant(n_, -inf);
    upper_ = VectorXd::Constant(n_, inf);
    for (int k = 0; k <= spec_.N; ++k) {
        lower_.segment<2>(state_index(k)).setConstant(-spec_.a);
        upper_.segment<2>(state_index(k)).setConstant(spec_.a);
    }
    lower_.segment(num_states(), num_controls()).setConstant(-spec_.b);
    upper_.segment(num_states(), num_controls()).setConstant(spec_.b);
    if (free_design()) {
        lower_[design_index()] = 0.05 * spec_.c;
        upper_[design_index()] = 0.45 * spec_.c;
    }
    objective_scale_ = std::max(1.0, 1.0 / (spec_.a * spec_.a));
}

double NlpProblem::outer_length(const VectorXd& w) const {
    return free_design() ? w[design_index()] : spec_.fixed_L;
}

DesignParams NlpProblem::design(const VectorXd& w) const {
    DesignParams p;
    p.L = outer_length(w);
    p.L2 = spec_.c - 2.0 * p.L;
    p.drag = spec_.drag;
    return p;
}

VectorXd NlpProblem::pack(const std::vector<Vec5>& states, const std::vector<Vec2>& controls,
                          double L) const {
    if (static_cast<int>(states.size()) != spec_.N + 1 || static_cast<int>(controls.size()) != spec_.N) {
        fail_validation("pack: wrong number of states or controls");
    }
    VectorXd w(n_);
    for (int k = 0; k <= spec_.N; ++k) w.segment<5>(state_index(k)) = states[k];
    for (int k = 0; k < spec_.N; ++k) w.segment<2>(control_index(k)) = controls[k];
    if (free_design()) w[design_index()] = L;
    return w;
}

double NlpProblem::objective(const VectorXd& w, VectorXd* grad) const {
    const int ix = state_index(spec_.N) + 2;
    if (grad) {
        grad->setZero(n_);
        (*grad)[ix] = -objective_scale_;
    }
    return -objective_scale_ * w[ix];
}

void NlpProblem::constraints(const VectorXd& w, VectorXd& c, SparseMatrix* jac) const {
    const int N = spec_.N;
    const double h = step();
    const DesignParams params = design(w);
    c.resize(m_);

    std::vector<Eigen::Triplet<double>> trip;
    if (jac) trip.reserve(static_cast<std::size_t>(N) * (5 * 12 + 10 + 5) + 16);

    for (int k = 0; k < N; ++k) {
        const Vec5 z0 = state(w, k);
        const Vec5 z1 = state(w, k + 1);
        const Vec2 u = control(w, k);
        const Vec5 mid = 0.5 * (z0 + z1);
        const int row = 5 * k;
        if (!jac) {
            c.segment<5>(row) = z1 - z0 - h * (field_matrix(params, mid) * u);
            continue;
        }
        const FieldSensitivity s = field_sensitivity(params, mid);
        c.segment<5>(row) = z1 - z0 - h * (s.G * u);

        Mat5 D = Mat5::Zero();
        D.col(0) = s.d_beta1 * u;
        D.col(1) = s.d_beta3 * u;
        D.col(4) = s.d_theta * u;
        const Mat5 left = -Mat5::Identity() - 0.5 * h * D;
        const Mat5 right = Mat5::Identity() - 0.5 * h * D;
        const int c0 = state_index(k);
        const int c1 = state_index(k + 1);
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                if (left(i, j) != 0.0) trip.emplace_back(row + i, c0 + j, left(i, j));
                if (right(i, j) != 0.0) trip.emplace_back(row + i, c1 + j, right(i, j));
            }
            for (int j = 0; j < 2; ++j) {
                if (s.G(i, j) != 0.0) trip.emplace_back(row + i, control_index(k) + j, -h * s.G(i, j));
            }
        }
        if (free_design()) {
            // L2 = c - 2L
            const Vec5 dL = -h * ((s.d_L - 2.0 * s.d_L2) * u);
            for (int i = 0; i < 5; ++i) {
                if (dL[i] != 0.0) trip.emplace_back(row + i, design_index(), dL[i]);
            }
        }
    }

    const int r = num_defects();
    const int zN = state_index(N);
    c[r + 0] = w[2];       // x(0)
    c[r + 1] = w[3];       // y(0)
    c[r + 2] = w[4];       // theta(0)
    c[r + 3] = w[zN + 3];  // y(T)
    c[r + 4] = w[zN + 4];  // theta(T)
    c[r + 5] = w[zN + 0] - w[0];
    c[r + 6] = w[zN + 1] - w[1];
    if (jac) {
        trip.emplace_back(r + 0, 2, 1.0);
        trip.emplace_back(r + 1, 3, 1.0);
        trip.emplace_back(r + 2, 4, 1.0);
        trip.emplace_back(r + 3, zN + 3, 1.0);
        trip.emplace_back(r + 4, zN + 4, 1.0);
        trip.emplace_back(r + 5, zN + 0, 1.0);
        trip.emplace_back(r + 5, 0, -1.0);
        trip.emplace_back(r + 6, zN + 1, 1.0);
        trip.emplace_back(r + 6, 1, -1.0);
        jac->resize(m_, n_);
        jac->setFromTriplets(trip.begin(), trip.end());
    }
}

namespace {

// d/dq of -h nu'G(q)u for q = (beta1, beta3, theta at the midpoint, L).
Eigen::Vector4d defect_gradient(const FieldSensitivity& s, const Vec5& nu, const Vec2& u, double h) {
    Eigen::Vector4d g;
    g[0] = -h * nu.dot(s.d_beta1 * u);
    g[1] = -h * nu.dot(s.d_beta3 * u);
    g[2] = -h * nu.dot(s.d_theta * u);
    g[3] = -h * nu.dot((s.d_L - 2.0 * s.d_L2) * u);
    return g;
}

}  // namespace

void NlpProblem::lagrangian_hessian(const VectorXd& w, const VectorXd& nu, SparseMatrix& W) const {
    const int N = spec_.N;
    const double h = step();
    const DesignParams params = design(w);
    const int nq = free_design() ? 4 : 3;
    const double eps = 1e-5;
    constexpr int shape_slot[3] = {0, 1, 4};

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(N) * 80 + 1);
    double hLL = 0.0;

    for (int k = 0; k < N; ++k) {
        const Vec5 mid = 0.5 * (state(w, k) + state(w, k + 1));
        const Vec2 u = control(w, k);
        const Vec5 v = nu.segment<5>(5 * k);
        const FieldSensitivity s = field_sensitivity(params, mid);

        Eigen::Matrix4d Hqq = Eigen::Matrix4d::Zero();
        for (int i = 0; i < nq; ++i) {
            Vec5 zp = mid, zm = mid;
            DesignParams pp = params, pm = params;
            if (i < 3) {
                zp[shape_slot[i]] += eps;
                zm[shape_slot[i]] -= eps;
            } else {
                pp.L += eps;
                pp.L2 -= 2.0 * eps;
                pm.L -= eps;
                pm.L2 += 2.0 * eps;
            }
            const Eigen::Vector4d gp = defect_gradient(field_sensitivity(pp, zp), v, u, h);
            const Eigen::Vector4d gm = defect_gradient(field_sensitivity(pm, zm), v, u, h);
            Hqq.col(i) = (gp - gm) / (2.0 * eps);
        }
        Hqq = 0.5 * (Hqq + Hqq.transpose()).eval();

        // d2/du dq
        Eigen::Matrix<double, 2, 4> Huq;
        const Mat52 dG[4] = {s.d_beta1, s.d_beta3, s.d_theta, s.d_L - 2.0 * s.d_L2};
        for (int i = 0; i < 4; ++i) Huq.col(i) = -h * (dG[i].transpose() * v);

        // each midpoint component is half of z_k plus half of z_{k+1}
        const int zc[2] = {state_index(k), state_index(k + 1)};
        const int uc = control_index(k);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const double val = 0.25 * Hqq(i, j);
                for (int a : zc)
                    for (int b : zc) trip.emplace_back(a + shape_slot[i], b + shape_slot[j], val);
            }
            for (int j = 0; j < 2; ++j) {
                for (int a : zc) {
                    trip.emplace_back(a + shape_slot[i], uc + j, 0.5 * Huq(j, i));
                    trip.emplace_back(uc + j, a + shape_slot[i], 0.5 * Huq(j, i));
                }
            }
        }
        if (free_design()) {
            const int d = design_index();
            hLL += Hqq(3, 3);
            for (int i = 0; i < 3; ++i) {
                for (int a : zc) {
                    trip.emplace_back(a + shape_slot[i], d, 0.5 * Hqq(i, 3));
                    trip.emplace_back(d, a + shape_slot[i], 0.5 * Hqq(i, 3));
                }
            }
            for (int j = 0; j < 2; ++j) {
                trip.emplace_back(uc + j, d, Huq(j, 3));
                trip.emplace_back(d, uc + j, Huq(j, 3));
            }
        }
    }
    if (free_design()) trip.emplace_back(design_index(), design_index(), hLL);
    W.resize(n_, n_);
    W.setFromTriplets(trip.begin(), trip.end());
}

NlpProblem transcribe(const OcpSpec& spec) { return NlpProblem(spec); }

VectorXd initial_guess(const NlpProblem& problem, unsigned seed) {
    const OcpSpec& spec = problem.spec();
    const int N = spec.N;
    const double h = problem.step();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr double pi = std::numbers::pi;

    // loop counts between the square (8a/b) and diamond (4a/b) periods
    const int k_lo = std::max(1, static_cast<int>(std::floor(spec.b * spec.T / (8.0 * spec.a))));
    const int k_hi = std::max(k_lo, static_cast<int>(std::ceil(spec.b * spec.T / (4.0 * spec.a))));
    const double phase = 2.0 * pi * unit(rng);
    const double lag = pi / 4.0 + (pi / 2.0) * unit(rng);  // counter-clockwise loops
    const int loops = k_lo + static_cast<int>(unit(rng) * (k_hi - k_lo + 1)) % (k_hi - k_lo + 1);
    const double omega = 2.0 * pi * loops / spec.T;
    const double amp = std::min((0.6 + 0.35 * unit(rng)) * spec.a, 0.95 * spec.b / omega);
    const double ratio = 0.5 + unit(rng);

    std::vector<Vec2> shape(N + 1);
    for (int k = 0; k <= N; ++k) {
        const double t = k * h;
        shape[k] = Vec2(amp * std::sin(omega * t + phase), amp * std::sin(omega * t + phase - lag));
    }
    std::vector<Vec2> controls(N);
    for (int k = 0; k < N; ++k) {
        controls[k] = ((shape[k + 1] - shape[k]) / h).cwiseMax(-spec.b).cwiseMin(spec.b);
    }

    const double L = problem.free_design()
                         ? std::clamp(spec.c / (2.0 + ratio), 0.05 * spec.c, 0.45 * spec.c)
                         : spec.fixed_L;
    DesignParams params;
    params.L = L;
    params.L2 = spec.c - 2.0 * L;
    params.drag = spec.drag;

    std::vector<Vec5> states(N + 1);
    states[0] << shape[0], 0.0, 0.0, 0.0;
    for (int k = 0; k < N; ++k) states[k + 1] = implicit_midpoint_step(params, states[k], controls[k], h);
    return problem.pack(states, controls, L);
}

namespace {

OcpSolution assemble_solution(const NlpProblem& problem, const VectorXd& w) {
    const OcpSpec& spec = problem.spec();
    OcpSolution sol;
    sol.spec = spec;
    sol.variables = w;
    const DesignParams p = problem.design(w);
    sol.L = p.L;
    sol.L2 = p.L2;
    sol.ratio = p.L2 / p.L;
    sol.objective = problem.state(w, spec.N)[2];
    const double h = problem.step();
    for (int k = 0; k <= spec.N; ++k) {
        sol.trajectory.times.push_back(k * h);
        sol.trajectory.states.push_back(SwimmerState::from_vec(problem.state(w, k)));
    }
    for (int k = 0; k < spec.N; ++k) {
        const Vec2 u = problem.control(w, k);
        sol.controls.push_back(u);
        sol.trajectory.schedule.segments.push_back({h, {u[0], u[1]}});
    }
    VectorXd c;
    problem.constraints(w, c, nullptr);
    sol.max_violation = c.lpNorm<Eigen::Infinity>();
    return sol;
}

double control_l1(const NlpProblem& problem, const VectorXd& w) {
    return w.segment(problem.num_states(), problem.num_controls()).lpNorm<1>();
}

}  // namespace

OcpSolution solve(const NlpProblem& problem, const OcpSolveOptions& opts) {
    std::vector<unsigned> seeds = opts.seeds;
    if (seeds.empty()) {
        if (opts.multistart < 1) fail_validation("multistart must be >= 1");
        for (int i = 1; i <= opts.multistart; ++i) seeds.push_back(static_cast<unsigned>(i));
    }
    const InteriorPointSolver interior(opts.interior);
    const AugmentedLagrangianSolver augmented(opts.augmented);
    const NlpSolver& backend = opts.backend                                ? *opts.backend
                               : opts.method == NlpMethod::InteriorPoint ? static_cast<const NlpSolver&>(interior)
                                                                         : augmented;

    const int count = static_cast<int>(seeds.size());
    std::vector<NlpResult> results(count);
    std::vector<std::exception_ptr> errors(count);
    const int threads = std::clamp(opts.threads > 0 ? opts.threads : default_thread_count(), 1, count);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < count; i += threads) {
                try {
                    results[i] = backend.solve(problem, initial_guess(problem, seeds[i]));
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();

    int best = -1;
    double best_violation = std::numeric_limits<double>::infinity();
    std::vector<double> objectives(count, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> violations(count, std::numeric_limits<double>::infinity());
    auto x_final = [&](const VectorXd& w) { return problem.state(w, problem.spec().N)[2]; };
    for (int i = 0; i < count; ++i) {
        if (errors[i]) continue;
        const NlpResult& r = results[i];
        objectives[i] = x_final(r.x);
        violations[i] = r.max_violation;
        best_violation = std::min(best_violation, r.max_violation);
        if (r.max_violation > opts.feasibility_tol) continue;
        if (best < 0) {
            best = i;
            continue;
        }
        const double ob = objectives[best];
        const double oi = objectives[i];
        const double tie = 1e-9 * std::max(1e-3, std::abs(ob));
        if (oi > ob + tie) {
            best = i;
        } else if (std::abs(oi - ob) <= tie) {
            const NlpResult& rb = results[best];
            if (r.max_violation < rb.max_violation ||
                (r.max_violation == rb.max_violation && control_l1(problem, r.x) < control_l1(problem, rb.x))) {
                best = i;
            }
        }
    }
    if (best < 0) {
        for (int i = 0; i < count; ++i) {
            if (errors[i]) std::rethrow_exception(errors[i]);
        }
        std::ostringstream msg;
        msg << "no feasible point found; best constraint violation " << best_violation;
        throw Error(ErrorKind::Solver, msg.str());
    }

    OcpSolution sol = assemble_solution(problem, results[best].x);
    sol.kkt_residual = results[best].kkt_residual;
    sol.seed = seeds[best];
    sol.feasible = true;
    sol.start_objectives = objectives;
    sol.start_violations = violations;
    sol.message = results[best].message;
    sol.stroke = classify(sol);
    return sol;
}

std::string StrokeClass::label() const {
    if (count <= 1) return base;
    return "sequence(" + std::to_string(count) + ", " + base + ")";
}

StrokeClass classify_arcs(const std::vector<Vec2>& shapes, const std::vector<Vec2>& controls,
                          double a, double b) {
    if (shapes.size() != controls.size() + 1 || controls.empty()) {
        fail_validation("classify: need one more shape sample than controls");
    }
    StrokeClass cls;
    for (std::size_t k = 0; k < controls.size(); ++k) {
        const Vec2 u = controls[k].cwiseAbs();
        const Vec2 lo = shapes[k].cwiseAbs();
        const Vec2 hi = shapes[k + 1].cwiseAbs();
        const bool fast1 = u[0] >= 0.98 * b;
        const bool fast3 = u[1] >= 0.98 * b;
        const bool still1 = u[0] <= 0.02 * b;
        const bool still3 = u[1] <= 0.02 * b;
        const bool pinned1 = lo[0] >= 0.98 * a && hi[0] >= 0.98 * a;
        const bool pinned3 = lo[1] >= 0.98 * a && hi[1] >= 0.98 * a;
        if (still1 && still3) {
            ++cls.rest;
        } else if (fast1 && fast3) {
            ++cls.bang;
        } else if ((pinned1 && still1 && fast3) || (pinned3 && still3 && fast1)) {
            ++cls.constrained;
        } else {
            ++cls.unconstrained;
        }
    }

    // loops = winding number of the shape path about its centroid
    Vec2 centre = Vec2::Zero();
    for (const auto& s : shapes) centre += s;
    centre /= static_cast<double>(shapes.size());
    double winding = 0.0;
    for (std::size_t k = 0; k + 1 < shapes.size(); ++k) {
        const Vec2 p = shapes[k] - centre;
        const Vec2 q = shapes[k + 1] - centre;
        winding += std::atan2(p.x() * q.y() - p.y() * q.x(), p.dot(q));
    }
    cls.count = std::max(1, static_cast<int>(std::lround(std::abs(winding) / (2.0 * std::numbers::pi))));

    std::ostringstream diag;
    if ((shapes.back() - shapes.front()).lpNorm<Eigen::Infinity>() > 0.02 * a) {
        diag << "shape path does not close; ";
    }
    const int moving = cls.bang + cls.constrained + cls.unconstrained;
    if (moving == 0) {
        cls.base = "unconstrained";
        diag << "no motion";
    } else if (cls.unconstrained > 0.2 * moving) {
        cls.base = "unconstrained";
        diag << cls.unconstrained << " of " << moving << " moving intervals are neither bang nor constrained";
    } else if (cls.constrained == 0 && cls.unconstrained >= 0.05 * moving) {
        // amplitude bound inactive and smooth (singular) pieces between the bang arcs
        cls.base = "unconstrained";
        diag << "no constrained arcs; " << cls.unconstrained << " of " << moving << " moving intervals are singular";
    } else if (cls.constrained < 0.05 * moving) {
        cls.base = "diamond";
    } else if (cls.bang < 0.05 * moving) {
        cls.base = "square";
    } else {
        cls.base = "octagon";
    }
    cls.diagnostic = diag.str();
    return cls;
}

StrokeClass classify(const OcpSolution& solution) {
    std::vector<Vec2> shapes;
    shapes.reserve(solution.trajectory.states.size());
    for (const auto& s : solution.trajectory.states) shapes.emplace_back(s.beta1, s.beta3);
    return classify_arcs(shapes, solution.controls, solution.spec.a, solution.spec.b);
}

StrokeClass classify_schedule(const ControlSchedule& schedule, PhasePoint start, double a, double b,
                              int N) {
    if (N < 1) fail_validation("classify_schedule: N must be >= 1");
    const double total = schedule.total_duration();
    const double h = total / N;
    auto shape_at = [&](double t) {
        Vec2 s(start.b1, start.b3);
        double t0 = 0.0;
        for (const auto& seg : schedule.segments) {
            const double dt = std::clamp(t - t0, 0.0, seg.duration);
            s += dt * seg.rate.vec();
            t0 += seg.duration;
            if (t <= t0) break;
        }
        return s;
    };
    std::vector<Vec2> shapes(N + 1);
    std::vector<Vec2> controls(N);
    for (int k = 0; k <= N; ++k) shapes[k] = shape_at(k * h);
    for (int k = 0; k < N; ++k) controls[k] = (shapes[k + 1] - shapes[k]) / h;
    return classify_arcs(shapes, controls, a, b);
}

void to_json(nlohmann::json& j, const OcpSpec& spec) {
    nlohmann::json design = {{"mode", spec.design_mode == DesignMode::FreeL ? "free" : "fixed"}};
    if (spec.design_mode == DesignMode::FixedL) design["L"] = spec.fixed_L;
    j = {{"a", spec.a}, {"b", spec.b}, {"c", spec.c}, {"T", spec.T}, {"N", spec.N},
         {"design", design}, {"drag", spec.drag}};
}

void from_json(const nlohmann::json& j, OcpSpec& spec) {
    const std::string ctx = "ocp";
    reject_unknown_keys(j, {"a", "b", "c", "T", "N", "design", "drag"}, ctx);
    spec.a = require_number(j, "a", ctx);
    spec.b = require_number(j, "b", ctx);
    spec.c = number_or(j, "c", 4.0, ctx);
    spec.T = number_or(j, "T", 1.0, ctx);
    spec.N = int_or(j, "N", 100, ctx);
    spec.design_mode = DesignMode::FreeL;
    if (j.contains("design")) {
        const auto& d = j.at("design");
        reject_unknown_keys(d, {"mode", "L"}, "ocp.design");
        const std::string mode = d.value("mode", std::string("free"));
        if (mode == "fixed") {
            spec.design_mode = DesignMode::FixedL;
            spec.fixed_L = require_number(d, "L", "ocp.design");
        } else if (mode != "free") {
            fail_validation("ocp.design.mode must be 'free' or 'fixed'");
        }
    }
    if (j.contains("drag")) spec.drag = j.at("drag").get<DragModel>();
    spec.validate();
}

void from_json(const nlohmann::json& j, OcpSolveOptions& opts) {
    const std::string ctx = "solver";
    reject_unknown_keys(j, {"multistart", "seeds", "threads", "feasibility_tol", "method", "max_iterations"}, ctx);
    opts.multistart = int_or(j, "multistart", opts.multistart, ctx);
    if (opts.multistart < 1) fail_validation("solver.multistart must be >= 1");
    if (j.contains("seeds")) {
        const auto& s = j.at("seeds");
        if (!s.is_array()) fail_validation("solver.seeds must be an array of non-negative integers");
        opts.seeds.clear();
        for (const auto& v : s) {
            if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 0xFFFFFFFFLL) fail_validation("solver.seeds must be an array of non-negative integers");
            opts.seeds.push_back(v.get<unsigned>());
        }
    }
    opts.threads = int_or(j, "threads", opts.threads, ctx);
    opts.feasibility_tol = number_or(j, "feasibility_tol", opts.feasibility_tol, ctx);
    if (!(opts.feasibility_tol > 0.0)) fail_validation("solver.feasibility_tol must be positive");
    if (j.contains("method")) {
        const auto& m = j.at("method");
        const std::string name = m.is_string() ? m.get<std::string>() : "";
        if (name == "interior_point") {
            opts.method = NlpMethod::InteriorPoint;
        } else if (name == "augmented_lagrangian") {
            opts.method = NlpMethod::AugmentedLagrangian;
        } else {
            fail_validation("solver.method must be 'interior_point' or 'augmented_lagrangian'");
        }
    }
    if (j.contains("max_iterations")) {
        const int it = int_or(j, "max_iterations", 0, ctx);
        if (it < 1) fail_validation("solver.max_iterations must be >= 1");
        opts.interior.max_iterations = it;
        opts.augmented.max_outer = it;
    }
}

void to_json(nlohmann::json& j, const StrokeClass& cls) {
    j = {{"label", cls.label()},
         {"base", cls.base},
         {"count", cls.count},
         {"arcs", {{"bang", cls.bang}, {"constrained", cls.constrained},
                   {"unconstrained", cls.unconstrained}, {"rest", cls.rest}}},
         {"diagnostic", cls.diagnostic}};
}

void to_json(nlohmann::json& j, const OcpSolution& sol) {
    nlohmann::json vars = nlohmann::json::array();
    for (Eigen::Index i = 0; i < sol.variables.size(); ++i) vars.push_back(rounded(sol.variables[i]));
    nlohmann::json starts = nlohmann::json::array();
    for (std::size_t i = 0; i < sol.start_objectives.size(); ++i) {
        const double o = sol.start_objectives[i];
        const double v = sol.start_violations[i];
        starts.push_back({{"objective", std::isfinite(o) ? nlohmann::json(rounded(o)) : nlohmann::json()},
                          {"violation", std::isfinite(v) ? nlohmann::json(rounded(v, 3)) : nlohmann::json()}});
    }
    j = {{"spec", sol.spec},
         {"objective", rounded(sol.objective)},
         {"L", rounded(sol.L)},
         {"L2", rounded(sol.L2)},
         {"ratio", rounded(sol.ratio)},
         {"kkt", {{"max_violation", rounded(sol.max_violation, 3)},
                  {"projected_gradient", rounded(sol.kkt_residual, 3)}}},
         {"classification", sol.stroke},
         {"seed", sol.seed},
         {"multistart", starts},
         {"variables", vars}};
}

}  // namespace swimmer
