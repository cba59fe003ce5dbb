#pragma once

// Direct transcription of the stroke/design optimal control problem
//
//   max x(T)  s.t.  z' = G(z) u,  |u_i| <= b,  |beta_i| <= a,
//                   x(0) = y(0) = theta(0) = 0,  y(T) = theta(T) = 0,
//                   beta(0) = beta(T),  2L + L2 = c
//
// with implicit-midpoint defects on a uniform grid of N steps.

#include "swimmer/dynamics.hpp"
#include "swimmer/optim.hpp"
#include "swimmer/simulate.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace swimmer {

enum class DesignMode { FreeL, FixedL };

struct OcpSpec {
    double a = 0.0;  // amplitude bound on beta1, beta3
    double b = 0.0;  // rate bound
    double c = 4.0;  // total length 2L + L2
    double T = 1.0;
    int N = 100;
    DesignMode design_mode = DesignMode::FreeL;
    double fixed_L = 1.0;  // used when design_mode == FixedL
    DragModel drag;

    void validate() const;
};

// Variable layout: z_0..z_N (5 each), u_0..u_{N-1} (2 each), then L when free.
// Constraints: 5N defects, 5 boundary equalities, 2 periodicity equalities.
class NlpProblem : public ConstrainedProblem {
public:
    explicit NlpProblem(OcpSpec spec);

    const OcpSpec& spec() const { return spec_; }
    int num_variables() const override { return n_; }
    int num_constraints() const override { return m_; }
    const VectorXd& lower() const override { return lower_; }
    const VectorXd& upper() const override { return upper_; }

    // Objective is -x_N times objective_scale().
    double objective(const VectorXd& w, VectorXd* grad) const override;
    void constraints(const VectorXd& w, VectorXd& c, SparseMatrix* jac) const override;

    // The control blocks are exact; the (shape, heading, L) block is a
    // central difference of the exact gradient.
    bool has_lagrangian_hessian() const override { return true; }
    void lagrangian_hessian(const VectorXd& w, const VectorXd& nu, SparseMatrix& W) const override;

    int num_states() const { return 5 * (spec_.N + 1); }
    int num_controls() const { return 2 * spec_.N; }
    int num_defects() const { return 5 * spec_.N; }
    int state_index(int k) const { return 5 * k; }
    int control_index(int k) const { return num_states() + 2 * k; }
    int design_index() const { return num_states() + num_controls(); }
    bool free_design() const { return spec_.design_mode == DesignMode::FreeL; }
    double step() const { return spec_.T / spec_.N; }
    double objective_scale() const { return objective_scale_; }

    Vec5 state(const VectorXd& w, int k) const { return w.segment<5>(state_index(k)); }
    Vec2 control(const VectorXd& w, int k) const { return w.segment<2>(control_index(k)); }
    double outer_length(const VectorXd& w) const;
    DesignParams design(const VectorXd& w) const;

    // Packs states, controls and (if free) L into a variable vector.
    VectorXd pack(const std::vector<Vec5>& states, const std::vector<Vec2>& controls, double L) const;

private:
    OcpSpec spec_;
    int n_ = 0;
    int m_ = 0;
    VectorXd lower_;
    VectorXd upper_;
    double objective_scale_ = 1.0;
};

NlpProblem transcribe(const OcpSpec& spec);

struct StrokeClass {
    std::string base;  // diamond | octagon | square | unconstrained
    int count = 1;     // number of loops traversed
    int bang = 0;      // interval counts per arc type
    int constrained = 0;
    int unconstrained = 0;
    int rest = 0;
    std::string diagnostic;

    // "octagon" or "sequence(2, octagon)"
    std::string label() const;
};

struct OcpSolution {
    OcpSpec spec;
    VectorXd variables;
    Trajectory trajectory;
    std::vector<Vec2> controls;
    double L = 0.0;
    double L2 = 0.0;
    double ratio = 0.0;
    double objective = 0.0;  // x(T)
    double max_violation = 0.0;
    double kkt_residual = 0.0;
    unsigned seed = 0;
    bool feasible = false;
    StrokeClass stroke;
    std::vector<double> start_objectives;  // x(T) reached by each multistart
    std::vector<double> start_violations;
    std::string message;
};

enum class NlpMethod { InteriorPoint, AugmentedLagrangian };

struct OcpSolveOptions {
    int multistart = 8;
    std::vector<unsigned> seeds;  // default 1..multistart
    int threads = 0;              // 0: default_thread_count()
    double feasibility_tol = 1e-8;
    NlpMethod method = NlpMethod::InteriorPoint;
    InteriorPointOptions interior;
    AugLagOptions augmented;
    const NlpSolver* backend = nullptr;  // overrides `method` when set
};

// Dynamically consistent starting point: sinusoidal shape loop with random
// phase, lag, amplitude and loop count, states from forward integration.
VectorXd initial_guess(const NlpProblem& problem, unsigned seed);

// Multistart solve; throws Error(Solver) if no start reaches feasibility.
OcpSolution solve(const NlpProblem& problem, const OcpSolveOptions& opts = {});

// Arc-based stroke label from a sampled shape trajectory and its controls
// (controls[k] acts between states[k] and states[k+1]).
StrokeClass classify_arcs(const std::vector<Vec2>& shapes, const std::vector<Vec2>& controls,
                          double a, double b);
StrokeClass classify(const OcpSolution& solution);

// Samples a piecewise-constant schedule on a uniform grid of N steps and
// classifies it.
StrokeClass classify_schedule(const ControlSchedule& schedule, PhasePoint start, double a, double b,
                              int N);

void to_json(nlohmann::json& j, const OcpSpec& spec);
void from_json(const nlohmann::json& j, OcpSpec& spec);
// {"multistart", "seeds", "threads", "feasibility_tol", "method", "max_iterations"}
void from_json(const nlohmann::json& j, OcpSolveOptions& opts);
void to_json(nlohmann::json& j, const StrokeClass& cls);
void to_json(nlohmann::json& j, const OcpSolution& sol);

}  // namespace swimmer
