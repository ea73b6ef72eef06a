// Time-discrete incremental solver: per load step, minimize
//   Psi(w) + j_eps(P - P_prev) - <load, w>
// subject to the linear equality constraints of the problem, by a damped
// Newton method on the regularized smooth objective. Generic over an
// abstract problem (material point or assembled finite-element system).
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ferro {

class NoConvergenceError : public std::runtime_error {
 public:
  explicit NoConvergenceError(const std::string& what)
      : std::runtime_error(what) {}
};

class SingularSystemError : public std::runtime_error {
 public:
  explicit SingularSystemError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Incremental problem interface. All state arguments are increments dw
/// relative to the base state fixed by begin_step; the per-step objective is
///   energy(w_prev + dw) + dissipation(dP) - load.dot(dw).
/// Working in increments keeps the stiff regularized dissipation term exact
/// to machine precision when |dP| is many orders below |P|. The gradient
/// must be the exact derivative of the objective.
class AbstractProblem {
 public:
  virtual ~AbstractProblem() = default;

  virtual int num_dofs() const = 0;
  /// Linear equality rows B (B w = 0 at feasible states, hence B dw = 0 for
  /// admissible increments); may have 0 rows.
  virtual const Eigen::SparseMatrix<double>& constraint_matrix() const = 0;

  /// Fix the base state w_prev for the increment and history terms.
  virtual void begin_step(const Eigen::VectorXd& w_prev) = 0;
  virtual double objective(const Eigen::VectorXd& dw,
                           const Eigen::VectorXd& load) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& dw,
                                   const Eigen::VectorXd& load) const = 0;
  virtual Eigen::SparseMatrix<double> hessian(const Eigen::VectorXd& dw) const = 0;
  /// False if any point of w_prev + dw violates the saturation margin.
  virtual bool saturation_ok(const Eigen::VectorXd& dw) const = 0;
};

struct SolveReport {
  int iterations = 0;  // Newton direction solves
  std::vector<double> residual_norms;
  std::vector<double> alphas;  // accepted step length per iteration
  bool converged = false;
  int damping_events = 0;  // total step halvings
};

struct NewtonOptions {
  double tol = 1e-6;
  int max_iter = 50;
  double constraint_tol = 1e-10;
  int max_halvings = 20;  // saturation error below alpha = 2^-20
};

/// Exact solve of the KKT system [[H, B^T], [B, 0]] [dw, dmu] = [-r, -c].
/// B may have zero rows, in which case dmu comes back empty.
Eigen::VectorXd newton_direction(const Eigen::SparseMatrix<double>& hess,
                                 const Eigen::SparseMatrix<double>& constraints,
                                 const Eigen::VectorXd& residual,
                                 const Eigen::VectorXd& constraint_residual,
                                 Eigen::VectorXd* dmult = nullptr);

struct DampedUpdate {
  double alpha = 1.0;
  int halvings = 0;
  Eigen::VectorXd dw_trial;
  double merit = 0.0;
};

/// Largest alpha in {1, 1/2, 1/4, ...} such that the increment
/// dw + alpha*step passes the saturation guard and does not increase the
/// merit (the incremental objective). The guard is applied before the merit
/// test. Throws SaturationError once alpha falls below 2^-max_halvings with
/// the guard still failing, NoConvergenceError if no descent is found.
DampedUpdate damped_update(const AbstractProblem& problem,
                           const Eigen::VectorXd& dw, double merit_dw,
                           const Eigen::VectorXd& step,
                           const Eigen::VectorXd& load,
                           const NewtonOptions& opt = {});

struct StepSolution {
  Eigen::VectorXd w;
  Eigen::VectorXd multiplier;
  SolveReport report;
};

/// Solve one incremental step from w_prev under the given load functional.
/// Convergence is ||grad + B^T mu|| <= tol * (1 + ||load||); the constraint
/// rows are verified to constraint_tol relative. w_init overrides the
/// default initial guess w_prev (uniqueness probes).
StepSolution solve_step(AbstractProblem& problem, const Eigen::VectorXd& w_prev,
                        const Eigen::VectorXd& mult_prev,
                        const Eigen::VectorXd& load, const NewtonOptions& opt = {},
                        const Eigen::VectorXd* w_init = nullptr);

/// Ordered load steps; loads are dual coefficient vectors, times strictly
/// increasing pseudo-times (the implicit initial load is zero).
struct Schedule {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> loads;

  int size() const { return static_cast<int>(loads.size()); }
  void validate(int ndofs) const;
};

struct Trajectory {
  std::vector<Eigen::VectorXd> states;       // w_1..w_N
  std::vector<Eigen::VectorXd> multipliers;
  std::vector<SolveReport> reports;
  std::vector<double> dw_norms;    // ||w_n - w_{n-1}||
  std::vector<double> dload_norms; // ||l_n - l_{n-1}||
};

/// One Newton iteration record for the structured solver log.
struct IterationRecord {
  int step = 0;
  int iteration = 0;
  double residual = 0.0;
  double alpha = 1.0;
};

using StepCallback =
    std::function<void(int step, const Eigen::VectorXd& w, const SolveReport&)>;

/// Run the full schedule from state w0. Per-step increments and load
/// increments are logged for the stability estimate. Errors from solve_step
/// are rethrown with the step index prepended.
Trajectory run_schedule(AbstractProblem& problem, const Eigen::VectorXd& w0,
                        const Schedule& schedule, const NewtonOptions& opt = {},
                        const StepCallback& on_step = {},
                        std::vector<IterationRecord>* iteration_log = nullptr);

}  // namespace ferro
