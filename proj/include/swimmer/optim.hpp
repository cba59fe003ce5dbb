#pragma once

// Generic optimisation machinery: golden-section search, projected L-BFGS
// and projected Newton methods for box-constrained problems, and two solvers
// for equality constraints with simple bounds (primal-dual interior point,
// augmented Lagrangian).

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <functional>
#include <string>

namespace swimmer {

using Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct GoldenResult {
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

// Maximises a unimodal f on [lo, hi] to an interval width of `tol`.
GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                double tol);

// f(x, grad) returns the objective and writes the gradient.
using SmoothFunction = std::function<double(const VectorXd& x, VectorXd& grad)>;

struct BoxSolverOptions {
    int max_iterations = 5000;
    int memory = 10;
    double pg_tol = 1e-8;    // infinity norm of the projected gradient
    double rel_f_tol = 0.0;  // stop when relative decrease stays below this
};

struct BoxSolverResult {
    VectorXd x;
    double f = 0.0;
    double pg_norm = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

// Projected quasi-Newton (L-BFGS on the free variables, projected
// backtracking line search).
BoxSolverResult minimize_box(const SmoothFunction& fun, const VectorXd& x0, const VectorXd& lower,
                             const VectorXd& upper, const BoxSolverOptions& opts = {});

// H(x) as a full symmetric sparse matrix (both triangles).
using HessianFunction = std::function<void(const VectorXd& x, SparseMatrix& H)>;

// Projected Newton: Newton step on the variables not held at a bound (with
// diagonal shifts until the reduced Hessian factors as positive definite),
// diagonally scaled gradient step on the held ones, Armijo search along the
// projection arc.
BoxSolverResult minimize_box_newton(const SmoothFunction& fun, const HessianFunction& hess,
                                    const VectorXd& x0, const VectorXd& lower, const VectorXd& upper,
                                    const BoxSolverOptions& opts = {});

// min f(x) s.t. c(x) = 0, lower <= x <= upper.
class ConstrainedProblem {
public:
    virtual ~ConstrainedProblem() = default;
    virtual int num_variables() const = 0;
    virtual int num_constraints() const = 0;
    virtual const VectorXd& lower() const = 0;
    virtual const VectorXd& upper() const = 0;
    virtual double objective(const VectorXd& x, VectorXd* grad) const = 0;
    // Writes c(x); fills the Jacobian when `jac` is non-null.
    virtual void constraints(const VectorXd& x, VectorXd& c, SparseMatrix* jac) const = 0;

    // Curvature of f(x) + nu'c(x).  Problems that provide it get a Newton
    // inner solver; the others fall back to projected L-BFGS.
    virtual bool has_lagrangian_hessian() const { return false; }
    virtual void lagrangian_hessian(const VectorXd& /*x*/, const VectorXd& /*nu*/,
                                    SparseMatrix& /*W*/) const {}
};

enum class InnerMethod { Auto, ProjectedNewton, ProjectedLbfgs };

struct AugLagOptions {
    InnerMethod inner_method = InnerMethod::Auto;
    int max_outer = 40;
    double feas_tol = 1e-9;   // |c|_inf after polishing
    double opt_tol = 1e-6;    // projected Lagrangian gradient, inf norm
    double penalty0 = 10.0;
    double penalty_growth = 10.0;
    double penalty_max = 1e10;
    BoxSolverOptions inner;
    bool polish = true;       // Gauss-Newton projection onto c(x) = 0 at the end
    int verbosity = 0;        // > 0: one line per outer iteration on stderr
};

struct NlpResult {
    VectorXd x;
    VectorXd multipliers;
    double objective = 0.0;
    double max_violation = 0.0;
    double kkt_residual = 0.0;  // projected gradient of the Lagrangian
    int outer_iterations = 0;   // interior point: Newton iterations
    int inner_iterations = 0;   // interior point: backtracking trials
    bool converged = false;
    std::string message;
};

// Abstract solver interface so an external NLP backend can stand in for the
// built-in one.
class NlpSolver {
public:
    virtual ~NlpSolver() = default;
    virtual NlpResult solve(const ConstrainedProblem& problem, const VectorXd& x0) const = 0;
};

class AugmentedLagrangianSolver : public NlpSolver {
public:
    explicit AugmentedLagrangianSolver(AugLagOptions opts = {}) : opts_(opts) {}
    NlpResult solve(const ConstrainedProblem& problem, const VectorXd& x0) const override;

private:
    AugLagOptions opts_;
};

struct InteriorPointOptions {
    int max_iterations = 400;
    double tol = 1e-10;        // scaled KKT error
    double constr_tol = 1e-10; // |c|_inf required on exit
    double mu0 = 0.1;
    double tau_min = 0.99;     // fraction-to-boundary
    double reg_c = 1e-9;       // constraint-block regularisation of the KKT matrix
    int verbosity = 0;
};

// Primal-dual barrier method with exact Hessian: sparse LDL' of the
// regularised KKT matrix with inertia correction, l1 merit line search with
// second-order correction, monotone barrier update.  Needs
// has_lagrangian_hessian().
class InteriorPointSolver : public NlpSolver {
public:
    explicit InteriorPointSolver(InteriorPointOptions opts = {}) : opts_(opts) {}
    NlpResult solve(const ConstrainedProblem& problem, const VectorXd& x0) const override;

private:
    InteriorPointOptions opts_;
};

// Damped minimum-norm Gauss-Newton steps on c(x) = 0 over the variables that
// are not at a bound.  Returns the final |c|_inf.
double project_onto_constraints(const ConstrainedProblem& problem, VectorXd& x, double tol,
                                int max_iterations = 20);

}  // namespace swimmer
