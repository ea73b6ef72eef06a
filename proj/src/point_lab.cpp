#include "ferro/point_lab.hpp"

#include <cmath>

namespace ferro {

PointProblem::PointProblem(int dim, const MaterialParams& params)
    : dim_(dim),
      nv_(voigt_size(dim)),
      n_(nv_ + 2 * dim),
      params_(params),
      w_prev_(Eigen::VectorXd::Zero(nv_ + 2 * dim)),
      empty_constraints_(0, n_) {
  params_.validate();
  empty_constraints_.makeCompressed();
}

void PointProblem::begin_step(const Eigen::VectorXd& w_prev) {
  if (w_prev.size() != n_) throw std::invalid_argument("state size mismatch");
  w_prev_ = w_prev;
}

PointState PointProblem::unpack(const Eigen::VectorXd& w) const {
  PointState st(dim_);
  st.S = SymTensor(dim_, w.head(nv_));
  st.D = w.segment(nv_, dim_);
  st.P = w.tail(dim_);
  st.P_prev = w_prev_.tail(dim_);
  return st;
}

PointState PointProblem::state_at(const Eigen::VectorXd& dw) const {
  return unpack(w_prev_ + dw);
}

double PointProblem::objective(const Eigen::VectorXd& dw,
                               const Eigen::VectorXd& load) const {
  const PointState st = state_at(dw);
  const double psi = psi_reversible(st, params_) + psi_irreversible(st.P, params_);
  const RegularizedDissipation dis = dissipation_regularized(
      dw.tail(dim_), params_.E0, params_.reg_eps, false);
  return psi + dis.value - load.dot(dw);
}

Eigen::VectorXd PointProblem::gradient(const Eigen::VectorXd& dw,
                                       const Eigen::VectorXd& load) const {
  const PointState st = state_at(dw);
  const PointEval ev = evaluate(st, params_);
  const RegularizedDissipation dis = dissipation_regularized(
      dw.tail(dim_), params_.E0, params_.reg_eps, false);
  Eigen::VectorXd g = ev.grad - load;
  g.tail(dim_) += dis.grad;
  return g;
}

Eigen::SparseMatrix<double> PointProblem::hessian(const Eigen::VectorXd& dw) const {
  const PointState st = state_at(dw);
  Eigen::MatrixXd h = evaluate(st, params_).hess;
  const RegularizedDissipation dis = dissipation_regularized(
      dw.tail(dim_), params_.E0, params_.reg_eps, true);
  h.bottomRightCorner(dim_, dim_) += dis.hess;
  return h.sparseView();
}

bool PointProblem::saturation_ok(const Eigen::VectorXd& dw) const {
  return ferro::saturation_ok(w_prev_.tail(dim_) + dw.tail(dim_), params_);
}

Eigen::VectorXd PointProblem::load_vector(const SymTensor& T_app,
                                          const Eigen::VectorXd& E_app) const {
  Eigen::VectorXd l = Eigen::VectorXd::Zero(n_);
  l.head(nv_) = T_app.packed();
  l.segment(nv_, dim_) = E_app;
  return l;
}

PointRunResult run_point(const PointExperiment& exp, const NewtonOptions& opt,
                         std::vector<IterationRecord>* iteration_log) {
  PointProblem problem(exp.dim, exp.params);
  const int nv = voigt_size(exp.dim);
  const int ax = exp.dim - 1;

  Schedule sched;
  for (const PointLoadStep& s : exp.steps) {
    if (s.E_app.size() != exp.dim || s.T_app.size() != nv)
      throw std::invalid_argument("load step size mismatch");
    sched.times.push_back(s.t);
    sched.loads.push_back(
        problem.load_vector(SymTensor(exp.dim, s.T_app), s.E_app));
  }

  PointRunResult out;
  const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(problem.num_dofs());
  auto sample = [&](int step, const Eigen::VectorXd& w, const SolveReport&) {
    const PointLoadStep& ls = exp.steps[step - 1];
    PointCurveRow row;
    row.step = step;
    row.t = ls.t;
    row.E_ax = ls.E_app[ax];
    row.T_ax = ls.T_app[ax];
    row.S_ax = w[ax];
    row.D_ax = w[nv + ax];
    row.P_ax = w[nv + exp.dim + ax];
    row.absP = w.tail(exp.dim).norm();
    out.rows.push_back(row);
  };
  out.trajectory = run_schedule(problem, w0, sched, opt, sample, iteration_log);
  return out;
}

namespace {

// Signed radial hardening gradient for scalar p, valid on the open interval
// (-P0, P0) without solver safeguards.
double hardening_gradient(double p, const MaterialParams& mp) {
  if (mp.model == ModelKind::QuadraticNoSaturation) return 2.0 * mp.H0 * p;
  const double P0 = mp.P0;
  const double m = mp.m;
  const double ap = std::abs(p);
  if (ap < 1e-4 * P0) {
    const double u2 = ap * ap / (P0 * P0);
    return mp.H0 * (1.0 + m * (m + 1.0) / 6.0 * u2) * p;
  }
  const double gm = mp.H0 * std::pow(P0, m) / (2.0 * (m - 1.0)) *
                    (std::pow(P0 - ap, 1.0 - m) - std::pow(P0 + ap, 1.0 - m));
  return p > 0.0 ? gm : -gm;
}

double driving_force(double e, double T, double p, const MaterialParams& mp) {
  double f = e - hardening_gradient(p, mp);
  if (mp.kinematic_strain) f += 2.0 * mp.S0 * T * p / (mp.P0 * mp.P0);
  return f;
}

// Resolve the switching consistency |driving force| = E0 by bisection.
double consistent_p(double e, double T, double p_start, double target,
                    const MaterialParams& mp) {
  const bool forward = target > 0.0;
  double lo = p_start;
  double hi;
  if (mp.model == ModelKind::SaturatingLandis) {
    hi = forward ? mp.P0 * (1.0 - 1e-13) : -mp.P0 * (1.0 - 1e-13);
  } else {
    // expand until the driving force is back inside the surface
    double span = std::max(std::abs(e) / mp.H0, mp.P0);
    hi = p_start + (forward ? span : -span);
    for (int i = 0; i < 200; ++i) {
      const double f = driving_force(e, T, hi, mp) - target;
      if (forward ? f < 0.0 : f > 0.0) break;
      hi += forward ? span : -span;
    }
  }
  double flo = driving_force(e, T, lo, mp) - target;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = driving_force(e, T, mid, mp) - target;
    if (std::abs(fm) <= 1e-12 * mp.E0) return mid;
    if ((flo > 0.0) == (fm > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<OracleSample> oracle_trace(const MaterialParams& params,
                                       const std::vector<OracleSample>& schedule,
                                       int substeps) {
  std::vector<OracleSample> out;
  out.reserve(schedule.size());
  double p = 0.0;
  double e_prev = 0.0;
  double T_prev = 0.0;
  for (const OracleSample& target : schedule) {
    for (int s = 1; s <= substeps; ++s) {
      const double r = static_cast<double>(s) / substeps;
      const double e = e_prev + r * (target.e - e_prev);
      const double T = T_prev + r * (target.T - T_prev);
      const double f = driving_force(e, T, p, params);
      if (f > params.E0)
        p = consistent_p(e, T, p, params.E0, params);
      else if (f < -params.E0)
        p = consistent_p(e, T, p, -params.E0, params);
    }
    e_prev = target.e;
    T_prev = target.T;
    OracleSample rec = target;
    rec.p = p;
    out.push_back(rec);
  }
  return out;
}

}  // namespace ferro
