#include "swimmer/optim.hpp"

#include "swimmer/error.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>
#include <limits>
#include <sstream>

namespace swimmer {

GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                double tol) {
    if (!(hi > lo)) fail_validation("golden-section interval must satisfy lo < hi");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    int evals = 2;
    while (b - a > tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        ++evals;
    }
    return f1 >= f2 ? GoldenResult{x1, f1, evals} : GoldenResult{x2, f2, evals};
}

namespace {

VectorXd clamp(const VectorXd& x, const VectorXd& lo, const VectorXd& hi) {
    return x.cwiseMax(lo).cwiseMin(hi);
}

double projected_gradient_norm(const VectorXd& x, const VectorXd& g, const VectorXd& lo,
                               const VectorXd& hi) {
    return (clamp(x - g, lo, hi) - x).lpNorm<Eigen::Infinity>();
}

double finite_range(double lo, double hi) {
    const double r = hi - lo;
    return std::isfinite(r) ? std::max(1.0, r) : 1.0;
}

// Variables held at a bound by the gradient are excluded from the quasi-Newton step.
Eigen::Array<bool, Eigen::Dynamic, 1> free_mask(const VectorXd& x, const VectorXd& g,
                                                const VectorXd& lo, const VectorXd& hi) {
    Eigen::Array<bool, Eigen::Dynamic, 1> mask(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double room = 1e-12 * finite_range(lo[i], hi[i]);
        const bool at_lo = x[i] <= lo[i] + room && g[i] > 0.0;
        const bool at_hi = x[i] >= hi[i] - room && g[i] < 0.0;
        mask[i] = !(at_lo || at_hi) && lo[i] < hi[i];
    }
    return mask;
}

VectorXd masked(const VectorXd& v, const Eigen::Array<bool, Eigen::Dynamic, 1>& mask) {
    return mask.select(v, VectorXd::Zero(v.size()));
}

}  // namespace

BoxSolverResult minimize_box(const SmoothFunction& fun, const VectorXd& x0, const VectorXd& lower,
                             const VectorXd& upper, const BoxSolverOptions& opts) {
    const Eigen::Index n = x0.size();
    if (lower.size() != n || upper.size() != n) fail_validation("bound vectors have the wrong size");

    BoxSolverResult res;
    VectorXd x = clamp(x0, lower, upper);
    VectorXd g(n);
    double f = fun(x, g);
    res.evaluations = 1;

    std::deque<std::pair<VectorXd, VectorXd>> memory;
    int stalled = 0;
    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        res.pg_norm = projected_gradient_norm(x, g, lower, upper);
        if (res.pg_norm <= opts.pg_tol) {
            res.converged = true;
            break;
        }
        const auto mask = free_mask(x, g, lower, upper);

        // two-loop recursion restricted to the free variables
        VectorXd q = masked(g, mask);
        std::vector<double> alpha(memory.size());
        std::vector<double> rho(memory.size(), 0.0);
        double gamma = 0.0;
        for (int k = static_cast<int>(memory.size()) - 1; k >= 0; --k) {
            const VectorXd s = masked(memory[k].first, mask);
            const VectorXd y = masked(memory[k].second, mask);
            const double sy = s.dot(y);
            if (sy <= 1e-12 * s.norm() * y.norm()) continue;
            rho[k] = 1.0 / sy;
            if (gamma == 0.0) gamma = sy / y.squaredNorm();
            alpha[k] = rho[k] * s.dot(q);
            q -= alpha[k] * y;
        }
        VectorXd d;
        if (gamma > 0.0) {
            q *= gamma;
            for (std::size_t k = 0; k < memory.size(); ++k) {
                if (rho[k] == 0.0) continue;
                const VectorXd s = masked(memory[k].first, mask);
                const VectorXd y = masked(memory[k].second, mask);
                const double beta = rho[k] * y.dot(q);
                q += (alpha[k] - beta) * s;
            }
            d = -q;
        } else {
            // first step: unit projected-gradient move at most
            const double gmax = masked(g, mask).lpNorm<Eigen::Infinity>();
            d = -masked(g, mask) * (gmax > 0.0 ? std::min(1.0, 1.0 / gmax) : 1.0);
        }
        if (g.dot(d) >= 0.0) {
            memory.clear();
            d = -masked(g, mask);
        }

        // projected backtracking (Armijo along the projection arc)
        double step = 1.0;
        VectorXd x_new(n), g_new(n);
        double f_new = f;
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
            x_new = clamp(x + step * d, lower, upper);
            f_new = fun(x_new, g_new);
            ++res.evaluations;
            const double decrease = g.dot(x_new - x);
            if (std::isfinite(f_new) && f_new <= f + 1e-4 * decrease) {
                accepted = true;
                break;
            }
            step *= (ls < 2 ? 0.5 : 0.25);
        }
        if (!accepted) {
            if (memory.empty()) break;  // steepest descent failed too
            memory.clear();
            continue;
        }

        const VectorXd s = x_new - x;
        const VectorXd y = g_new - g;
        if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
            memory.emplace_back(s, y);
            if (static_cast<int>(memory.size()) > opts.memory) memory.pop_front();
        }
        const double rel = (f - f_new) / std::max(1.0, std::abs(f));
        x = x_new;
        g = g_new;
        f = f_new;
        if (opts.rel_f_tol > 0.0 && rel < opts.rel_f_tol) {
            if (++stalled >= 10) break;
        } else {
            stalled = 0;
        }
    }
    res.x = x;
    res.f = f;
    res.pg_norm = projected_gradient_norm(x, g, lower, upper);
    res.converged = res.converged || res.pg_norm <= opts.pg_tol;
    return res;
}

BoxSolverResult minimize_box_newton(const SmoothFunction& fun, const HessianFunction& hess,
                                    const VectorXd& x0, const VectorXd& lower, const VectorXd& upper,
                                    const BoxSolverOptions& opts) {
    const Eigen::Index n = x0.size();
    if (lower.size() != n || upper.size() != n) fail_validation("bound vectors have the wrong size");

    BoxSolverResult res;
    VectorXd x = clamp(x0, lower, upper);
    VectorXd g(n);
    double f = fun(x, g);
    res.evaluations = 1;
    int stalled = 0;
    double shift = 0.0;

    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        res.pg_norm = projected_gradient_norm(x, g, lower, upper);
        if (res.pg_norm <= opts.pg_tol) {
            res.converged = true;
            break;
        }

        // held set: within eps of a bound with the gradient pushing outwards
        const double eps = std::min(1e-3, res.pg_norm);
        std::vector<int> pos(n, -1);
        int nf = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double room = eps * finite_range(lower[i], upper[i]);
            const bool held = lower[i] == upper[i] || (x[i] <= lower[i] + room && g[i] > 0.0) ||
                              (x[i] >= upper[i] - room && g[i] < 0.0);
            if (!held) pos[i] = nf++;
        }

        SparseMatrix H;
        hess(x, H);
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(H.nonZeros()));
        VectorXd diag = VectorXd::Zero(n);
        for (int k = 0; k < H.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(H, k); it; ++it) {
                if (it.row() == it.col()) diag[it.row()] = it.value();
                const int r = pos[it.row()];
                const int c = pos[it.col()];
                if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
            }
        }
        SparseMatrix Hff(nf, nf);
        Hff.setFromTriplets(trip.begin(), trip.end());
        VectorXd gf(nf);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (pos[i] >= 0) gf[pos[i]] = g[i];
        }

        VectorXd d = VectorXd::Zero(n);
        if (nf > 0) {
            const double scale = std::max(1.0, diag.cwiseAbs().maxCoeff());
            shift = shift > 0.0 ? std::max(shift / 10.0, 1e-12 * scale) : 0.0;
            Eigen::SimplicialLDLT<SparseMatrix> ldlt;
            bool factored = false;
            for (int attempt = 0; attempt < 40 && !factored; ++attempt) {
                SparseMatrix M = Hff;
                if (shift > 0.0) {
                    for (int i = 0; i < nf; ++i) M.coeffRef(i, i) += shift;
                }
                ldlt.compute(M);
                factored = ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0;
                if (!factored) shift = shift > 0.0 ? 10.0 * shift : 1e-10 * scale;
            }
            if (factored) {
                const VectorXd df = ldlt.solve(-gf);
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (pos[i] >= 0) d[i] = df[pos[i]];
                }
            } else {
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (pos[i] >= 0) d[i] = -g[i];
                }
            }
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            if (pos[i] < 0) d[i] = -g[i] / std::max(std::abs(diag[i]), 1e-12);
        }

        auto search = [&](const VectorXd& dir, VectorXd& x_new, VectorXd& g_new, double& f_new) {
            double step = 1.0;
            for (int ls = 0; ls < 60; ++ls) {
                x_new = clamp(x + step * dir, lower, upper);
                const double decrease = g.dot(x_new - x);
                if (decrease < 0.0) {
                    f_new = fun(x_new, g_new);
                    ++res.evaluations;
                    if (std::isfinite(f_new) && f_new <= f + 1e-4 * decrease) return true;
                }
                step *= 0.5;
            }
            return false;
        };
        VectorXd x_new(n), g_new(n);
        double f_new = f;
        if (!search(d, x_new, g_new, f_new)) {
            const VectorXd sd = -g / std::max(1.0, g.lpNorm<Eigen::Infinity>());
            if (!search(sd, x_new, g_new, f_new)) break;
        }
        const double rel = (f - f_new) / std::max(1.0, std::abs(f));
        x = x_new;
        g = g_new;
        f = f_new;
        if (opts.rel_f_tol > 0.0 && rel < opts.rel_f_tol) {
            if (++stalled >= 5) break;
        } else {
            stalled = 0;
        }
    }
    res.x = x;
    res.f = f;
    res.pg_norm = projected_gradient_norm(x, g, lower, upper);
    res.converged = res.converged || res.pg_norm <= opts.pg_tol;
    return res;
}

double project_onto_constraints(const ConstrainedProblem& problem, VectorXd& x, double tol,
                                int max_iterations) {
    const VectorXd& lo = problem.lower();
    const VectorXd& hi = problem.upper();
    const int m = problem.num_constraints();
    VectorXd c(m);
    SparseMatrix J;
    problem.constraints(x, c, &J);
    double viol = c.lpNorm<Eigen::Infinity>();

    for (int it = 0; it < max_iterations && viol > tol; ++it) {
        // columns of variables sitting on a bound are frozen
        std::vector<double> keep(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double room = 1e-10 * finite_range(lo[i], hi[i]);
            keep[i] = (x[i] > lo[i] + room && x[i] < hi[i] - room) ? 1.0 : 0.0;
        }
        SparseMatrix Jf = J;
        for (int k = 0; k < Jf.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator itj(Jf, k); itj; ++itj) itj.valueRef() *= keep[itj.col()];
        }
        SparseMatrix JJt = Jf * Jf.transpose();
        const double reg = 1e-14 * std::max(1.0, JJt.diagonal().cwiseAbs().maxCoeff());
        for (int i = 0; i < m; ++i) JJt.coeffRef(i, i) += reg;
        Eigen::SimplicialLDLT<SparseMatrix> solver(JJt);
        if (solver.info() != Eigen::Success) break;
        const VectorXd step = -(Jf.transpose() * solver.solve(c));

        double alpha = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 20; ++ls) {
            VectorXd trial = clamp(x + alpha * step, lo, hi);
            VectorXd ct(m);
            SparseMatrix Jt;
            problem.constraints(trial, ct, &Jt);
            const double vt = ct.lpNorm<Eigen::Infinity>();
            if (vt < viol) {
                x = std::move(trial);
                c = std::move(ct);
                J = std::move(Jt);
                viol = vt;
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!improved) break;
    }
    return viol;
}

NlpResult AugmentedLagrangianSolver::solve(const ConstrainedProblem& problem,
                                              const VectorXd& x0) const {
    const int n = problem.num_variables();
    const int m = problem.num_constraints();
    const VectorXd& lo = problem.lower();
    const VectorXd& hi = problem.upper();
    if (x0.size() != n) fail_validation("initial point has the wrong size");

    NlpResult res;
    VectorXd x = clamp(x0, lo, hi);
    VectorXd lambda = VectorXd::Zero(m);
    double mu = opts_.penalty0;
    double eta = 1.0 / std::pow(mu, 0.1);
    double omega = 1.0 / mu;

    VectorXd c(m), gf(n);
    SparseMatrix J;
    auto merit = [&](const VectorXd& w, VectorXd& grad) {
        const double f = problem.objective(w, &gf);
        problem.constraints(w, c, &J);
        grad = gf + J.transpose() * (lambda + mu * c);
        return f + lambda.dot(c) + 0.5 * mu * c.squaredNorm();
    };
    const bool use_newton =
        opts_.inner_method == InnerMethod::ProjectedNewton ||
        (opts_.inner_method == InnerMethod::Auto && problem.has_lagrangian_hessian());
    if (use_newton && !problem.has_lagrangian_hessian()) {
        fail_validation("projected Newton requested but the problem has no Lagrangian Hessian");
    }
    VectorXd ch(m);
    SparseMatrix Jh, W;
    auto hessian = [&](const VectorXd& w, SparseMatrix& H) {
        problem.constraints(w, ch, &Jh);
        const VectorXd nu = lambda + mu * ch;
        problem.lagrangian_hessian(w, nu, W);
        H = mu * SparseMatrix(Jh.transpose() * Jh) + W;
    };
    auto kkt = [&](const VectorXd& w) {
        problem.objective(w, &gf);
        problem.constraints(w, c, &J);
        const VectorXd grad = gf + J.transpose() * lambda;
        return projected_gradient_norm(w, grad, lo, hi);
    };

    for (res.outer_iterations = 1; res.outer_iterations <= opts_.max_outer; ++res.outer_iterations) {
        BoxSolverOptions inner = opts_.inner;
        inner.pg_tol = std::max(omega, 0.1 * opts_.opt_tol);
        const BoxSolverResult sub = use_newton ? minimize_box_newton(merit, hessian, x, lo, hi, inner)
                                               : minimize_box(merit, x, lo, hi, inner);
        res.inner_iterations += sub.iterations;
        x = sub.x;
        problem.constraints(x, c, nullptr);
        const double viol = c.lpNorm<Eigen::Infinity>();
        if (opts_.verbosity > 0) {
            std::cerr << "outer " << res.outer_iterations << ": f = " << problem.objective(x, nullptr)
                      << " |c| = " << viol << " mu = " << mu << " inner " << sub.iterations
                      << " pg = " << sub.pg_norm << " (tol " << inner.pg_tol << ")\n";
        }
        if (viol <= eta) {
            lambda += mu * c;
            eta = std::max(eta / std::pow(mu, 0.9), 0.1 * opts_.feas_tol);
            omega = std::max(omega / mu, 0.1 * opts_.opt_tol);
            res.kkt_residual = kkt(x);
            if (viol <= std::max(opts_.feas_tol, 1e-7) && res.kkt_residual <= opts_.opt_tol) {
                res.converged = true;
                break;
            }
        } else if (mu < opts_.penalty_max) {
            mu = std::min(mu * opts_.penalty_growth, opts_.penalty_max);
            eta = std::max(1.0 / std::pow(mu, 0.1), 0.1 * opts_.feas_tol);
            omega = std::max(1.0 / mu, 0.1 * opts_.opt_tol);
        }
    }
    res.outer_iterations = std::min(res.outer_iterations, opts_.max_outer);

    if (opts_.polish) project_onto_constraints(problem, x, 0.1 * opts_.feas_tol);
    problem.constraints(x, c, nullptr);
    res.x = x;
    res.multipliers = lambda;
    res.objective = problem.objective(x, nullptr);
    res.max_violation = c.lpNorm<Eigen::Infinity>();
    res.kkt_residual = kkt(x);
    std::ostringstream msg;
    msg << (res.converged ? "converged" : "stopped") << " after " << res.outer_iterations
        << " outer / " << res.inner_iterations << " inner iterations; |c| = " << res.max_violation
        << ", kkt = " << res.kkt_residual;
    res.message = msg.str();
    return res;
}

NlpResult InteriorPointSolver::solve(const ConstrainedProblem& problem, const VectorXd& x0) const {
    if (!problem.has_lagrangian_hessian()) {
        fail_validation("the interior-point solver needs the Lagrangian Hessian");
    }
    const int n = problem.num_variables();
    const int m = problem.num_constraints();
    const VectorXd& lo = problem.lower();
    const VectorXd& hi = problem.upper();
    if (x0.size() != n) fail_validation("initial point has the wrong size");

    using Mask = Eigen::Array<double, Eigen::Dynamic, 1>;
    Mask has_lo(n), has_hi(n);
    VectorXd x = x0;
    for (int i = 0; i < n; ++i) {
        if (!(lo[i] < hi[i])) fail_validation("interior point needs lower < upper for every variable");
        has_lo[i] = std::isfinite(lo[i]) ? 1.0 : 0.0;
        has_hi[i] = std::isfinite(hi[i]) ? 1.0 : 0.0;
        // push strictly inside
        const double width = finite_range(lo[i], hi[i]);
        if (has_lo[i] > 0) x[i] = std::max(x[i], lo[i] + std::min(1e-2 * std::max(1.0, std::abs(lo[i])), 1e-2 * width));
        if (has_hi[i] > 0) x[i] = std::min(x[i], hi[i] - std::min(1e-2 * std::max(1.0, std::abs(hi[i])), 1e-2 * width));
    }
    const double n_bounds = std::max(1.0, has_lo.sum() + has_hi.sum());
    // unit slack where there is no bound keeps the masked formulas finite
    auto slack_lo = [&](const VectorXd& w) -> Mask { return (has_lo > 0).select((w - lo).array(), 1.0); };
    auto slack_hi = [&](const VectorXd& w) -> Mask { return (has_hi > 0).select((hi - w).array(), 1.0); };
    auto barrier = [&](const VectorXd& w, double mu) {
        double b = 0.0;
        for (int i = 0; i < n; ++i) {
            if (has_lo[i] > 0) b -= mu * std::log(w[i] - lo[i]);
            if (has_hi[i] > 0) b -= mu * std::log(hi[i] - w[i]);
        }
        return b;
    };

    VectorXd lambda = VectorXd::Zero(m);
    Mask z_lo = has_lo, z_hi = has_hi;
    double mu = opts_.mu0;
    double nu = 1.0;
    double reg_last = 0.0;
    const double reg_c = opts_.reg_c;

    NlpResult res;
    VectorXd g(n), c(m), ct(m);
    SparseMatrix J, W;
    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower> ldlt;
    bool converged = false;
    double err0 = 0.0;

    for (int iter = 0;; ++iter) {
        const double f = problem.objective(x, &g);
        problem.constraints(x, c, &J);
        const Mask s_lo = slack_lo(x), s_hi = slack_hi(x);
        const VectorXd dual = g + J.transpose() * lambda - VectorXd(z_lo - z_hi);
        const double cinf = c.lpNorm<Eigen::Infinity>();
        const double z_sum = z_lo.abs().sum() + z_hi.abs().sum();
        const double s_d = std::max(100.0, (lambda.lpNorm<1>() + z_sum) / (m + n_bounds)) / 100.0;
        const double s_c = std::max(100.0, z_sum / n_bounds) / 100.0;
        auto error = [&](double target) {
            const double comp = std::max(((s_lo * z_lo - target) * has_lo).abs().maxCoeff(),
                                         ((s_hi * z_hi - target) * has_hi).abs().maxCoeff());
            return std::max({dual.lpNorm<Eigen::Infinity>() / s_d, cinf, comp / s_c});
        };
        err0 = error(0.0);
        if (opts_.verbosity > 0) {
            std::cerr << "ip " << iter << ": f = " << f << " |c| = " << cinf << " err = " << err0
                      << " mu = " << mu << " reg = " << reg_last << " nu = " << nu << "\n";
        }
        if (err0 <= opts_.tol && cinf <= opts_.constr_tol) {
            converged = true;
            break;
        }
        if (iter >= opts_.max_iterations) break;
        while (mu > 0.1 * opts_.tol && error(mu) <= 10.0 * mu) {
            mu = std::max(0.1 * opts_.tol, std::min(0.2 * mu, std::pow(mu, 1.5)));
        }

        problem.lagrangian_hessian(x, lambda, W);
        const Mask sigma = z_lo / s_lo * has_lo + z_hi / s_hi * has_hi;

        // lower triangle of [W + Sigma + reg I, J'; J, -reg_c I]
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(W.nonZeros() / 2 + J.nonZeros() + n + m));
        for (int k = 0; k < W.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(W, k); it; ++it) {
                if (it.row() > it.col()) trip.emplace_back(it.row(), it.col(), it.value());
            }
        }
        for (int k = 0; k < J.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(J, k); it; ++it) trip.emplace_back(n + it.row(), it.col(), it.value());
        }
        const VectorXd wdiag = W.diagonal();
        const int diag_start = static_cast<int>(trip.size());
        for (int i = 0; i < n; ++i) trip.emplace_back(i, i, wdiag[i] + sigma[i]);
        for (int i = 0; i < m; ++i) trip.emplace_back(n + i, n + i, -reg_c);

        double reg = reg_last > 0.0 ? std::max(1e-20, reg_last / 3.0) : 0.0;
        bool first_try = true;
        for (;;) {
            for (int i = 0; i < n; ++i) trip[diag_start + i] = {i, i, wdiag[i] + sigma[i] + reg};
            SparseMatrix K(n + m, n + m);
            K.setFromTriplets(trip.begin(), trip.end());
            if (first_try) ldlt.analyzePattern(K);
            ldlt.factorize(K);
            first_try = false;
            if (ldlt.info() == Eigen::Success) {
                const VectorXd& D = ldlt.vectorD();
                if ((D.array() > 0.0).count() == n && (D.array() < 0.0).count() == m) break;
                if (opts_.verbosity > 1) std::cerr << "inertia " << (D.array() > 0.0).count() << "/" << (D.array() < 0.0).count() << " reg " << reg << "\n";
            } else if (opts_.verbosity > 1) std::cerr << "ldlt fail reg " << reg << "\n";
            if (reg == 0.0) {
                reg = reg_last > 0.0 ? std::max(1e-20, reg_last / 3.0) : 1e-4;
            } else {
                reg *= reg_last > 0.0 ? 8.0 : 100.0;
            }
            if (reg > 1e40) throw Error(ErrorKind::Numerical, "KKT matrix could not be regularised");
        }
        if (reg > 0.0) reg_last = reg;

        // K0 is the matrix without the constraint regularisation; a few steps
        // of iterative refinement remove its effect on the step
        auto apply_k0 = [&](const VectorXd& v) {
            VectorXd out(n + m);
            out.head(n) = W * v.head(n) + VectorXd((sigma + reg) * v.head(n).array()) + J.transpose() * v.tail(m);
            out.tail(m) = J * v.head(n);
            return out;
        };
        auto kkt_solve = [&](const VectorXd& rhs) {
            VectorXd sol = ldlt.solve(rhs);
            double prev = std::numeric_limits<double>::infinity();
            for (int r = 0; r < 5; ++r) {
                const VectorXd resid = rhs - apply_k0(sol);
                const double rn = resid.lpNorm<Eigen::Infinity>();
                if (!(rn < 0.5 * prev) || rn <= 1e-15 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>())) break;
                prev = rn;
                sol += ldlt.solve(resid);
            }
            return sol;
        };

        const VectorXd grad_b = g - VectorXd(mu / s_lo * has_lo) + VectorXd(mu / s_hi * has_hi);
        VectorXd rhs(n + m);
        rhs.head(n) = -(grad_b + J.transpose() * lambda);
        rhs.tail(m) = -c;
        VectorXd sol = kkt_solve(rhs);
        VectorXd dx = sol.head(n);
        VectorXd dl = sol.tail(m);

        const double tau = std::max(opts_.tau_min, 1.0 - mu);
        auto max_step = [&](const VectorXd& d) {
            double amax = 1.0;
            for (int i = 0; i < n; ++i) {
                if (has_lo[i] > 0 && d[i] < 0.0) amax = std::min(amax, -tau * s_lo[i] / d[i]);
                if (has_hi[i] > 0 && d[i] > 0.0) amax = std::min(amax, tau * s_hi[i] / d[i]);
            }
            return amax;
        };

        const double c1 = c.lpNorm<1>();
        const double curv = dx.dot(W * dx) + (sigma + reg).cwiseProduct(dx.array().square()).sum();
        const double gdx = grad_b.dot(dx);
        if (c1 > 0.0) {
            const double need = (gdx + 0.5 * std::max(0.0, curv)) / (0.9 * c1);
            if (need > nu) nu = std::max(need, 1.5 * nu);
        }
        const double phi0 = f + barrier(x, mu) + nu * c1;
        const double dphi = gdx - nu * c1;
        auto merit = [&](const VectorXd& w, VectorXd& cw) {
            problem.constraints(w, cw, nullptr);
            return problem.objective(w, nullptr) + barrier(w, mu) + nu * cw.lpNorm<1>();
        };

        const double a_max = max_step(dx);
        double alpha = a_max;
        bool accepted = false;
        bool soc_tried = false;
        VectorXd xt(n);
        while (alpha > 1e-14) {
            ++res.inner_iterations;
            xt = x + alpha * dx;
            const double phit = merit(xt, ct);
            if (std::isfinite(phit) && phit <= phi0 + 1e-4 * alpha * dphi) {
                accepted = true;
                break;
            }
            if (!soc_tried && alpha == a_max) {
                // second-order correction against the Maratos effect
                soc_tried = true;
                VectorXd rs = rhs;
                rs.tail(m) = -(alpha * c + ct);
                const VectorXd ss = kkt_solve(rs);
                const VectorXd dxs = ss.head(n);
                const double as = max_step(dxs);
                const VectorXd xs = x + as * dxs;
                const double phis = merit(xs, ct);
                if (std::isfinite(phis) && phis <= phi0 + 1e-4 * alpha * dphi) {
                    dx = dxs;
                    dl = ss.tail(m);
                    alpha = as;
                    xt = xs;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // no merit decrease along a descent direction: take a short step
            // and let the multipliers and barrier move on
            alpha = std::min(a_max, 1e-3);
            xt = x + alpha * dx;
        }

        const Mask dz_lo = (mu / s_lo - z_lo - z_lo / s_lo * dx.array()) * has_lo;
        const Mask dz_hi = (mu / s_hi - z_hi + z_hi / s_hi * dx.array()) * has_hi;
        double a_z = 1.0;
        for (int i = 0; i < n; ++i) {
            if (dz_lo[i] < 0.0) a_z = std::min(a_z, -tau * z_lo[i] / dz_lo[i]);
            if (dz_hi[i] < 0.0) a_z = std::min(a_z, -tau * z_hi[i] / dz_hi[i]);
        }
        x = xt;
        lambda += alpha * dl;
        z_lo += a_z * dz_lo;
        z_hi += a_z * dz_hi;
        const Mask ns_lo = slack_lo(x), ns_hi = slack_hi(x);
        constexpr double kappa = 1e10;
        z_lo = (z_lo.max(mu / (kappa * ns_lo)).min(kappa * mu / ns_lo)) * has_lo;
        z_hi = (z_hi.max(mu / (kappa * ns_hi)).min(kappa * mu / ns_hi)) * has_hi;
        res.outer_iterations = iter + 1;
    }

    problem.constraints(x, c, &J);
    problem.objective(x, &g);
    res.x = x;
    res.multipliers = lambda;
    res.objective = problem.objective(x, nullptr);
    res.max_violation = c.lpNorm<Eigen::Infinity>();
    res.kkt_residual = projected_gradient_norm(x, g + J.transpose() * lambda, lo, hi);
    res.converged = converged;
    std::ostringstream msg;
    msg << (converged ? "converged" : "stopped") << " after " << res.outer_iterations
        << " interior-point iterations; |c| = " << res.max_violation << ", kkt error = " << err0;
    res.message = msg.str();
    return res;
}

}  // namespace swimmer
