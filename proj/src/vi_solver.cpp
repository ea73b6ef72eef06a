#include "ferro/vi_solver.hpp"

#include "ferro/constitutive.hpp"

#include <Eigen/SparseLU>

#include <cmath>

namespace ferro {

Eigen::VectorXd newton_direction(const Eigen::SparseMatrix<double>& hess,
                                 const Eigen::SparseMatrix<double>& constraints,
                                 const Eigen::VectorXd& residual,
                                 const Eigen::VectorXd& constraint_residual,
                                 Eigen::VectorXd* dmult) {
  const int n = static_cast<int>(hess.rows());
  const int m = static_cast<int>(constraints.rows());

  Eigen::SparseMatrix<double> kkt(n + m, n + m);
  {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(hess.nonZeros() + 2 * constraints.nonZeros());
    for (int k = 0; k < hess.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(hess, k); it; ++it)
        trip.emplace_back(it.row(), it.col(), it.value());
    for (int k = 0; k < constraints.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(constraints, k); it;
           ++it) {
        trip.emplace_back(n + it.row(), it.col(), it.value());
        trip.emplace_back(it.col(), n + it.row(), it.value());
      }
    kkt.setFromTriplets(trip.begin(), trip.end());
  }
  kkt.makeCompressed();

  Eigen::VectorXd rhs(n + m);
  rhs.head(n) = -residual;
  if (m > 0) rhs.tail(m) = -constraint_residual;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(kkt);
  lu.factorize(kkt);
  if (lu.info() != Eigen::Success)
    throw SingularSystemError("KKT factorization failed");
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success)
    throw SingularSystemError("KKT back substitution failed");
  if (!sol.allFinite())
    throw SingularSystemError("KKT solve produced non-finite entries");

  if (dmult) *dmult = sol.tail(m);
  return sol.head(n);
}

DampedUpdate damped_update(const AbstractProblem& problem,
                           const Eigen::VectorXd& dw, double merit_dw,
                           const Eigen::VectorXd& step,
                           const Eigen::VectorXd& load,
                           const NewtonOptions& opt) {
  DampedUpdate out;
  double alpha = 1.0;
  const double slack = 1e-12 * (1.0 + std::abs(merit_dw));
  for (int halving = 0;; ++halving) {
    Eigen::VectorXd trial = dw + alpha * step;
    if (problem.saturation_ok(trial)) {
      const double merit = problem.objective(trial, load);
      if (merit <= merit_dw + slack) {
        out.alpha = alpha;
        out.halvings = halving;
        out.dw_trial = std::move(trial);
        out.merit = merit;
        return out;
      }
      if (halving >= opt.max_halvings)
        throw NoConvergenceError("line search found no descent");
    } else if (halving >= opt.max_halvings) {
      throw SaturationError("damping cannot keep the trial state inside the saturation margin");
    }
    alpha *= 0.5;
  }
}

StepSolution solve_step(AbstractProblem& problem, const Eigen::VectorXd& w_prev,
                        const Eigen::VectorXd& mult_prev,
                        const Eigen::VectorXd& load, const NewtonOptions& opt,
                        const Eigen::VectorXd* w_init) {
  if (!load.allFinite()) throw std::invalid_argument("load not finite");

  problem.begin_step(w_prev);
  const Eigen::SparseMatrix<double>& B = problem.constraint_matrix();
  const int m = static_cast<int>(B.rows());
  const int n = problem.num_dofs();

  Eigen::VectorXd dw =
      w_init ? Eigen::VectorXd(*w_init - w_prev) : Eigen::VectorXd::Zero(n);
  if (!problem.saturation_ok(Eigen::VectorXd::Zero(n)))
    throw SaturationError("previous state violates the saturation margin");

  StepSolution sol;
  sol.multiplier =
      mult_prev.size() == m ? mult_prev : Eigen::VectorXd::Zero(m);

  const double load_scale = 1.0 + load.norm();
  for (int it = 0;; ++it) {
    Eigen::VectorXd r = problem.gradient(dw, load);
    if (m > 0) r += B.transpose() * sol.multiplier;
    const double rn = r.norm();
    sol.report.residual_norms.push_back(rn);
    if (rn <= opt.tol * load_scale) {
      sol.report.converged = true;
      break;
    }
    if (it >= opt.max_iter)
      throw NoConvergenceError("no convergence within " +
                               std::to_string(opt.max_iter) + " iterations");

    const Eigen::SparseMatrix<double> H = problem.hessian(dw);
    Eigen::VectorXd cres =
        m > 0 ? Eigen::VectorXd(B * (w_prev + dw)) : Eigen::VectorXd();
    const double merit = problem.objective(dw, load);

    // Pure Newton while the Hessian is definite along the step; outside the
    // convex region a scaled diagonal shift is escalated until the direction
    // descends and the line search accepts.
    Eigen::VectorXd diag_scale(n);
    for (int i = 0; i < n; ++i)
      diag_scale[i] = std::max(std::abs(H.coeff(i, i)), 1.0);
    double shift = 0.0;
    bool accepted = false;
    for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
      Eigen::SparseMatrix<double> Hs = H;
      if (shift > 0.0) {
        std::vector<Eigen::Triplet<double>> dtrip;
        dtrip.reserve(n);
        for (int i = 0; i < n; ++i)
          dtrip.emplace_back(i, i, shift * diag_scale[i]);
        Eigen::SparseMatrix<double> D(n, n);
        D.setFromTriplets(dtrip.begin(), dtrip.end());
        Hs = H + D;
      }
      Eigen::VectorXd dmu;
      Eigen::VectorXd step;
      try {
        step = newton_direction(Hs, B, r, cres, &dmu);
      } catch (const SingularSystemError&) {
        if (shift == 0.0 && attempt + 1 < 30) {
          shift = 1e-6;
          continue;
        }
        throw;
      }
      if (r.dot(step) < 0.0) {
        try {
          const DampedUpdate damp =
              damped_update(problem, dw, merit, step, load, opt);
          dw = damp.dw_trial;
          if (m > 0) sol.multiplier += damp.alpha * dmu;
          sol.report.damping_events += damp.halvings;
          sol.report.alphas.push_back(damp.alpha);
          accepted = true;
        } catch (const NoConvergenceError&) {
          // fall through and stiffen the model
        }
      }
      if (!accepted) shift = shift == 0.0 ? 1e-6 : 10.0 * shift;
    }
    if (!accepted)
      throw NoConvergenceError("line search found no descent");
    sol.report.iterations++;
  }

  sol.w = w_prev + dw;
  if (m > 0) {
    const double viol = (B * sol.w).cwiseAbs().maxCoeff();
    const double scale = 1.0 + sol.w.cwiseAbs().maxCoeff();
    if (viol > opt.constraint_tol * scale)
      throw NoConvergenceError("constraint rows violated at convergence");
  }
  return sol;
}

void Schedule::validate(int ndofs) const {
  if (times.size() != loads.size())
    throw std::invalid_argument("schedule times/loads size mismatch");
  double prev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > prev))
      throw std::invalid_argument("schedule times must be strictly increasing");
    prev = times[i];
    if (loads[i].size() != ndofs)
      throw std::invalid_argument("schedule load size mismatch");
    if (!loads[i].allFinite())
      throw std::invalid_argument("schedule load not finite");
  }
}

Trajectory run_schedule(AbstractProblem& problem, const Eigen::VectorXd& w0,
                        const Schedule& schedule, const NewtonOptions& opt,
                        const StepCallback& on_step,
                        std::vector<IterationRecord>* iteration_log) {
  schedule.validate(problem.num_dofs());
  Trajectory traj;
  Eigen::VectorXd w = w0;
  Eigen::VectorXd mu;
  Eigen::VectorXd load_prev = Eigen::VectorXd::Zero(problem.num_dofs());
  for (int n = 0; n < schedule.size(); ++n) {
    StepSolution sol;
    try {
      sol = solve_step(problem, w, mu, schedule.loads[n], opt);
    } catch (const NoConvergenceError& e) {
      throw NoConvergenceError("step " + std::to_string(n + 1) + ": " + e.what());
    } catch (const SaturationError& e) {
      throw SaturationError("step " + std::to_string(n + 1) + ": " + e.what());
    } catch (const SingularSystemError& e) {
      throw SingularSystemError("step " + std::to_string(n + 1) + ": " + e.what());
    }
    traj.dw_norms.push_back((sol.w - w).norm());
    traj.dload_norms.push_back((schedule.loads[n] - load_prev).norm());
    if (iteration_log) {
      for (std::size_t i = 0; i < sol.report.residual_norms.size(); ++i) {
        IterationRecord rec;
        rec.step = n + 1;
        rec.iteration = static_cast<int>(i);
        rec.residual = sol.report.residual_norms[i];
        rec.alpha = i < sol.report.alphas.size() ? sol.report.alphas[i] : 1.0;
        iteration_log->push_back(rec);
      }
    }
    w = sol.w;
    mu = sol.multiplier;
    load_prev = schedule.loads[n];
    if (on_step) on_step(n + 1, w, sol.report);
    traj.states.push_back(std::move(sol.w));
    traj.multipliers.push_back(std::move(sol.multiplier));
    traj.reports.push_back(std::move(sol.report));
  }
  return traj;
}

}  // namespace ferro
