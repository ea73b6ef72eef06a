#include "ferro/vi_solver.hpp"

#include "ferro/point_lab.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace ferro;
using namespace ferro::testing;

namespace {

Eigen::SparseMatrix<double> sparse(const Eigen::MatrixXd& m) {
  Eigen::SparseMatrix<double> s = m.sparseView();
  s.makeCompressed();
  return s;
}

Eigen::VectorXd axial_load(const PointProblem& prob, double e, double t33 = 0.0) {
  const int dim = prob.dim();
  Eigen::VectorXd efield = Eigen::VectorXd::Zero(dim);
  efield[dim - 1] = e;
  SymTensor tapp(dim);
  tapp.packed()[dim - 1] = t33;
  return prob.load_vector(tapp, efield);
}

}  // namespace

TEST_CASE("newton direction trivial systems") {
  const Eigen::SparseMatrix<double> none(0, 2);
  Eigen::VectorXd r(2);
  r << 3, -4;
  Eigen::VectorXd d = newton_direction(sparse(Eigen::MatrixXd::Identity(2, 2)),
                                       none, r, {});
  CHECK((d + r).norm() <= 1e-14);

  Eigen::MatrixXd h(2, 2);
  h << 2, 0, 0, 4;
  Eigen::VectorXd rhs(2);
  rhs << -2, -4;  // residual r = -b gives H x = b
  d = newton_direction(sparse(h), none, rhs, {});
  CHECK((d - Eigen::Vector2d(1, 1)).norm() <= 1e-14);
}

TEST_CASE("newton direction with equality rows") {
  const int n = 20, m = 3;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = uniform(-1, 1);
  const Eigen::MatrixXd h = a * a.transpose() + 1e-2 * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd b(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = uniform(-1, 1);
  Eigen::VectorXd r(n), c(m);
  for (int i = 0; i < n; ++i) r[i] = uniform(-1, 1);
  for (int i = 0; i < m; ++i) c[i] = uniform(-1, 1);

  Eigen::VectorXd dmu;
  const Eigen::VectorXd d = newton_direction(sparse(h), sparse(b), r, c, &dmu);
  const double scale = h.norm() * d.norm() + r.norm() + 1.0;
  CHECK((h * d + b.transpose() * dmu + r).norm() <= 1e-10 * scale);
  CHECK((b * d + c).norm() <= 1e-10 * (1.0 + c.norm()));
}

TEST_CASE("newton direction rejects singular systems") {
  const Eigen::SparseMatrix<double> none(0, 2);
  Eigen::VectorXd r(2);
  r << 1, 1;
  CHECK_THROWS_AS(
      newton_direction(sparse(Eigen::MatrixXd::Zero(2, 2)), none, r, {}),
      SingularSystemError);
}

TEST_CASE("damped update") {
  MaterialParams mp;  // saturating
  PointProblem prob(3, mp);
  const int n = prob.num_dofs();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w[n - 1] = 0.9 * mp.P0;
  prob.begin_step(w);
  const Eigen::VectorXd load = axial_load(prob, 0.0);
  const Eigen::VectorXd dw0 = Eigen::VectorXd::Zero(n);
  const double f0 = prob.objective(dw0, load);

  SUBCASE("zero step keeps the state") {
    const DampedUpdate d = damped_update(prob, dw0, f0, dw0, load);
    CHECK(d.alpha == 1.0);
    CHECK(d.dw_trial.norm() == 0.0);
  }
  SUBCASE("small polarization step is taken in full") {
    Eigen::VectorXd step = Eigen::VectorXd::Zero(n);
    step[n - 1] = -1e-4;
    const DampedUpdate d = damped_update(prob, dw0, f0, step, load);
    CHECK(d.alpha == 1.0);
  }
  SUBCASE("step crossing saturation is cut back inside the margin") {
    Eigen::VectorXd step = Eigen::VectorXd::Zero(n);
    step[n - 1] = 0.5 * mp.P0;  // would land beyond P0
    const DampedUpdate d = damped_update(prob, dw0, f0, step, load);
    CHECK(d.alpha < 1.0);
    CHECK(ferro::saturation_ok(w.tail(3) + d.dw_trial.tail(3), mp));
  }
}

TEST_CASE("fixed point under unchanged load") {
  MaterialParams mp;
  PointProblem prob(3, mp);
  const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(prob.num_dofs());
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(prob.num_dofs());
  const StepSolution sol = solve_step(prob, w0, {}, zero);
  CHECK(sol.report.converged);
  CHECK(sol.report.iterations <= 1);
  CHECK(sol.w.norm() == 0.0);

  // after an elastic step, re-solving with the same load only drifts the
  // regularized polarization by at most the regularization width
  const Eigen::VectorXd l = axial_load(prob, 0.5 * mp.E0);
  const StepSolution a = solve_step(prob, w0, {}, l);
  const StepSolution b = solve_step(prob, a.w, a.multiplier, l);
  CHECK((b.w - a.w).norm() <= 2.0 * mp.reg_eps);
}

TEST_CASE("loads inside the switching surface leave P at the virgin state") {
  MaterialParams mp;
  mp.model = ModelKind::QuadraticNoSaturation;
  mp.d31 = mp.d33 = 0.0;
  mp.kinematic_strain = false;
  PointProblem prob(3, mp);
  const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(prob.num_dofs());
  const StepSolution sol = solve_step(prob, w0, {}, axial_load(prob, 0.5 * mp.E0));
  CHECK(sol.w.tail(3).norm() <= mp.reg_eps);
}

TEST_CASE("residual is the gradient of the incremental objective") {
  MaterialParams mp;
  PointProblem prob(3, mp);
  const int n = prob.num_dofs();
  const PointState base = random_state(3, mp);
  Eigen::VectorXd w_prev(n);
  w_prev << base.S.packed(), base.D, base.P;
  prob.begin_step(w_prev);
  const Eigen::VectorXd load = axial_load(prob, 0.8e6, 1e6);

  Eigen::VectorXd dw = Eigen::VectorXd::Zero(n);
  dw[n - 1] = 3e-3;  // a polarization increment in the linear branch
  dw[n - 2] = -2e-3;
  const Eigen::VectorXd g = prob.gradient(dw, load);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double h = i < 6 ? 1e-8 : 1e-7;
    Eigen::VectorXd dp = dw, dm = dw;
    dp[i] += h;
    dm[i] -= h;
    const double fd = (prob.objective(dp, load) - prob.objective(dm, load)) / (2 * h);
    worst = std::max(worst,
                     std::abs(fd - g[i]) / (std::abs(g[i]) + 1e-6 * g.norm()));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("empty schedule produces an empty trajectory") {
  MaterialParams mp;
  PointProblem prob(3, mp);
  const Trajectory traj = run_schedule(
      prob, Eigen::VectorXd::Zero(prob.num_dofs()), Schedule{}, {});
  CHECK(traj.states.empty());
}

TEST_CASE("schedule validation") {
  MaterialParams mp;
  PointProblem prob(3, mp);
  Schedule s;
  s.times = {1.0, 0.5};
  s.loads = {Eigen::VectorXd::Zero(prob.num_dofs()),
             Eigen::VectorXd::Zero(prob.num_dofs())};
  CHECK_THROWS_AS(
      run_schedule(prob, Eigen::VectorXd::Zero(prob.num_dofs()), s, {}),
      std::invalid_argument);
}

namespace {

Schedule axial_cycle(const PointProblem& prob, double peak, int steps_per_leg) {
  Schedule s;
  auto leg = [&](double from, double to, double t0) {
    for (int k = 1; k <= steps_per_leg; ++k) {
      s.times.push_back(t0 + static_cast<double>(k) / steps_per_leg);
      s.loads.push_back(
          axial_load(prob, from + (to - from) * k / steps_per_leg));
    }
  };
  leg(0.0, peak, 0.0);
  leg(peak, 0.0, 1.0);
  return s;
}

}  // namespace

TEST_CASE("poling cycle produces a hysteresis loop") {
  MaterialParams mp;  // saturating, electroded-cube constants
  PointProblem prob(3, mp);
  const Schedule s = axial_cycle(prob, 1.5 * mp.E0, 15);
  const Trajectory traj =
      run_schedule(prob, Eigen::VectorXd::Zero(prob.num_dofs()), s, {});
  // remanent polarization survives unloading
  CHECK(traj.states.back().tail(3).norm() > 0.9 * mp.P0);
  // converged solves report strictly decreasing residuals after the last
  // damping event
  for (const SolveReport& rep : traj.reports) {
    CHECK(rep.converged);
    std::size_t start = 0;
    for (std::size_t i = 0; i < rep.alphas.size(); ++i)
      if (rep.alphas[i] < 1.0) start = i + 1;
    for (std::size_t i = start + 1; i < rep.residual_norms.size(); ++i)
      CHECK(rep.residual_norms[i] < rep.residual_norms[i - 1]);
  }
}

TEST_CASE("regularized optimality conditions at convergence") {
  MaterialParams mp;
  PointProblem prob(3, mp);
  const Schedule s = axial_cycle(prob, 1.5 * mp.E0, 15);
  const Trajectory traj =
      run_schedule(prob, Eigen::VectorXd::Zero(prob.num_dofs()), s, {});
  const double tol_e = 1e-3 * mp.E0;
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(prob.num_dofs());
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    prob.begin_step(prev);
    const PointState st = prob.unpack(traj.states[n]);
    const Eigen::VectorXd ehat = response(st, mp).Ehat;
    const Eigen::VectorXd dp = traj.states[n].tail(3) - prev.tail(3);
    if (dp.norm() <= mp.reg_eps) {
      CHECK(ehat.norm() <= mp.E0 + tol_e);
    } else {
      CHECK(std::abs(ehat.norm() - mp.E0) <= tol_e);
      CHECK((ehat - mp.E0 * dp.normalized()).norm() <= tol_e);
    }
    prev = traj.states[n];
  }
}

TEST_CASE("monotone ramps are insensitive to the step count") {
  MaterialParams mp;
  PointProblem prob(3, mp);
  auto final_p = [&](int steps) {
    Schedule s;
    for (int k = 1; k <= steps; ++k) {
      s.times.push_back(static_cast<double>(k) / steps);
      s.loads.push_back(axial_load(prob, 1.5 * mp.E0 * k / steps));
    }
    const Trajectory traj =
        run_schedule(prob, Eigen::VectorXd::Zero(prob.num_dofs()), s, {});
    return traj.states.back().tail(3).norm();
  };
  CHECK(std::abs(final_p(30) - final_p(60)) <= 5.0 * mp.reg_eps);
}

TEST_CASE("two initial guesses converge to the same update") {
  MaterialParams mp;
  PointProblem prob(3, mp);
  const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(prob.num_dofs());
  const Eigen::VectorXd l = axial_load(prob, 1.2 * mp.E0);
  const NewtonOptions opt;
  const StepSolution a = solve_step(prob, w0, {}, l, opt);
  Eigen::VectorXd init = w0;
  init[prob.num_dofs() - 1] = 0.1;
  init[voigt_size(3) + 2] = 0.05;
  const StepSolution b = solve_step(prob, w0, {}, l, opt, &init);
  CHECK((a.w - b.w).norm() <= 10.0 * opt.tol);
}

TEST_CASE("per-step stability log is recorded") {
  MaterialParams mp;
  PointProblem prob(3, mp);
  const Schedule s = axial_cycle(prob, 1.2 * mp.E0, 5);
  const Trajectory traj =
      run_schedule(prob, Eigen::VectorXd::Zero(prob.num_dofs()), s, {});
  CHECK(traj.dw_norms.size() == traj.states.size());
  CHECK(traj.dload_norms.size() == traj.states.size());
  CHECK(traj.dload_norms[0] == doctest::Approx(s.loads[0].norm()));
}
