#include "ferro/point_lab.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace ferro;
using namespace ferro::testing;

namespace {

PointExperiment axial_experiment(const MaterialParams& mp, int dim) {
  PointExperiment exp;
  exp.params = mp;
  exp.dim = dim;
  return exp;
}

void add_leg(PointExperiment& exp, double e_from, double e_to, double t_from,
             double t_to, int steps) {
  const int nv = voigt_size(exp.dim);
  const double t0 = exp.steps.empty() ? 0.0 : exp.steps.back().t;
  for (int k = 1; k <= steps; ++k) {
    PointLoadStep ls;
    ls.t = t0 + static_cast<double>(k) / steps;
    ls.E_app = Eigen::VectorXd::Zero(exp.dim);
    ls.E_app[exp.dim - 1] = e_from + (e_to - e_from) * k / steps;
    ls.T_app = Eigen::VectorXd::Zero(nv);
    ls.T_app[exp.dim - 1] = t_from + (t_to - t_from) * k / steps;
    exp.steps.push_back(ls);
  }
}

std::vector<OracleSample> oracle_schedule(const PointExperiment& exp) {
  std::vector<OracleSample> s;
  for (const PointLoadStep& ls : exp.steps)
    s.push_back({ls.t, ls.E_app[exp.dim - 1], ls.T_app[exp.dim - 1], 0.0});
  return s;
}

}  // namespace

TEST_CASE("zero schedule gives all-zero virgin curves") {
  MaterialParams mp;
  PointExperiment exp = axial_experiment(mp, 3);
  add_leg(exp, 0, 0, 0, 0, 5);
  const PointRunResult res = run_point(exp);
  for (const PointCurveRow& r : res.rows) {
    CHECK(r.D_ax == doctest::Approx(0.0));
    CHECK(r.P_ax == doctest::Approx(0.0));
    CHECK(r.S_ax == doctest::Approx(0.0));
    CHECK(r.absP == doctest::Approx(0.0));
  }
}

TEST_CASE("oracle stays inside the switching surface") {
  MaterialParams mp;
  mp.d31 = mp.d33 = 0.0;
  std::vector<OracleSample> sched;
  for (int k = 1; k <= 40; ++k)
    sched.push_back({k / 40.0, 2.0 * mp.E0 * std::sin(0.3 * k), 0.0, 0.0});
  const auto trace = oracle_trace(mp, sched);
  for (const OracleSample& s : trace) {
    const double f =
        s.e - dpsi_irr(Eigen::Vector3d(0, 0, s.p), mp).norm() *
                  (s.p >= 0 ? 1.0 : -1.0);
    CHECK(std::abs(f) <= mp.E0 * (1.0 + 1e-10));
  }
}

TEST_CASE("oracle elastic and hardening anchors") {
  // inside the switching surface nothing moves
  MaterialParams quad;
  quad.model = ModelKind::QuadraticNoSaturation;
  quad.d31 = quad.d33 = 0.0;
  std::vector<OracleSample> inside;
  for (int k = 1; k <= 20; ++k)
    inside.push_back({k / 20.0, 0.9 * quad.E0 * std::sin(0.5 * k), 0.0, 0.0});
  for (const OracleSample& s : oracle_trace(quad, inside))
    CHECK(s.p == doctest::Approx(0.0));

  // quadratic hardening balance e - 2 H0 p = E0 at the ramp end e = 2 E0
  std::vector<OracleSample> ramp;
  for (int k = 1; k <= 20; ++k) ramp.push_back({k / 20.0, 2.0 * quad.E0 * k / 20.0, 0, 0});
  CHECK(oracle_trace(quad, ramp).back().p ==
        doctest::Approx(quad.E0 / (2.0 * quad.H0)).epsilon(1e-10));

  // saturating balance at m = 2: H0 P0^2 p / (P0^2 - p^2) = E0, the positive
  // root of E0 p^2 + H0 P0^2 p - E0 P0^2 = 0
  MaterialParams sat;
  sat.d31 = sat.d33 = 0.0;
  const double a = sat.E0, b = sat.H0 * sat.P0 * sat.P0,
               c = -sat.E0 * sat.P0 * sat.P0;
  const double root = (-b + std::sqrt(b * b - 4 * a * c)) / (2 * a);
  CHECK(oracle_trace(sat, ramp).back().p == doctest::Approx(root).epsilon(1e-10));
}

TEST_CASE("solver matches the oracle over a full poling cycle") {
  for (ModelKind model :
       {ModelKind::SaturatingLandis, ModelKind::QuadraticNoSaturation}) {
    MaterialParams mp;
    mp.model = model;
    mp.d31 = mp.d33 = 0.0;  // the oracle reduction is exact only uncoupled
    PointExperiment exp = axial_experiment(mp, 3);
    add_leg(exp, 0, 1.5e6, 0, 0, 15);
    add_leg(exp, 1.5e6, -1.5e6, 0, 0, 30);
    add_leg(exp, -1.5e6, 0, 0, 0, 15);
    const PointRunResult res = run_point(exp);
    const auto trace = oracle_trace(mp, oracle_schedule(exp));
    double worst = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i)
      worst = std::max(worst, std::abs(res.rows[i].P_ax - trace[i].p));
    CHECK(worst <= std::max(5.0 * mp.reg_eps, 1e-3 * mp.P0));
  }
}

TEST_CASE("quadratic poling ramp reaches the hardening balance") {
  MaterialParams mp;
  mp.model = ModelKind::QuadraticNoSaturation;
  mp.d31 = mp.d33 = 0.0;
  mp.kinematic_strain = false;
  PointExperiment exp = axial_experiment(mp, 3);
  add_leg(exp, 0, 1.5e6, 0, 0, 15);
  add_leg(exp, 1.5e6, 0, 0, 0, 15);
  const PointRunResult res = run_point(exp);
  // switching stops at e - 2 H0 p = E0; unloading is elastic afterwards
  const double expected = 0.5 * mp.E0 / (2.0 * mp.H0);
  CHECK(res.rows.back().P_ax == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("switching onset brackets the coercive field") {
  MaterialParams mp;
  mp.model = ModelKind::QuadraticNoSaturation;
  PointExperiment exp = axial_experiment(mp, 3);
  add_leg(exp, 0, 1.5e6, 0, 0, 100);
  const PointRunResult res = run_point(exp);
  double prev = 0.0;
  int onset = -1;
  for (const PointCurveRow& r : res.rows) {
    if (onset < 0 && std::abs(r.P_ax - prev) > mp.reg_eps) onset = r.step;
    prev = r.P_ax;
  }
  REQUIRE(onset > 1);
  const double step_width = 1.5e6 / 100;
  CHECK(res.rows[onset - 1].E_ax >= mp.E0 - step_width * (1 + 1e-12));
  CHECK(res.rows[onset - 2].E_ax <= mp.E0 + step_width * (1 + 1e-12));
}

TEST_CASE("butterfly curve is even in the applied field") {
  MaterialParams mp;  // kinematic remanent strain on
  PointExperiment exp = axial_experiment(mp, 3);
  add_leg(exp, 0, 1.5e6, 0, 0, 20);
  add_leg(exp, 1.5e6, -1.5e6, 0, 0, 40);   // leg 2
  add_leg(exp, -1.5e6, 1.5e6, 0, 0, 40);   // leg 3 mirrors leg 2
  const PointRunResult res = run_point(exp);
  // compare S(E) on leg 2 against S(-E) on leg 3
  for (int k = 0; k < 40; ++k) {
    const PointCurveRow& a = res.rows[20 + k];
    const PointCurveRow& b = res.rows[60 + k];
    CHECK(a.E_ax == doctest::Approx(-b.E_ax));
    CHECK(std::abs(a.S_ax - b.S_ax) <= 1e-3 * mp.S0);
    CHECK(std::abs(a.P_ax + b.P_ax) <= 1e-3 * mp.P0);
  }
}

TEST_CASE("hysteresis saturation level") {
  MaterialParams mp;  // saturating, full coupling
  PointExperiment exp = axial_experiment(mp, 3);
  add_leg(exp, 0, 1.5e6, 0, 0, 20);
  add_leg(exp, 1.5e6, -1.5e6, 0, 0, 40);
  add_leg(exp, -1.5e6, 1.5e6, 0, 0, 40);
  const PointRunResult res = run_point(exp);
  double max_p = 0.0;
  for (const PointCurveRow& r : res.rows) max_p = std::max(max_p, r.absP);
  CHECK(max_p < mp.P0);
  // at the positive peak the polarization is nearly saturated
  CHECK(res.rows[19].absP >= 0.9 * mp.P0);
  CHECK(res.rows.back().absP >= 0.9 * mp.P0);
}

TEST_CASE("compression at zero field depolarizes monotonically") {
  MaterialParams mp;  // saturating, kinematic strain on
  PointExperiment exp = axial_experiment(mp, 3);
  add_leg(exp, 0, 1.5e6, 0, 0, 15);
  add_leg(exp, 1.5e6, 0, 0, 0, 15);
  const std::size_t poled_index = exp.steps.size() - 1;
  add_leg(exp, 0, 0, 0, -2e8, 25);
  const PointRunResult res = run_point(exp);
  const double poled = res.rows[poled_index].absP;
  double prev = poled;
  for (std::size_t i = poled_index + 1; i < res.rows.size(); ++i) {
    CHECK(res.rows[i].absP <= prev + 1e-9 * mp.P0);
    prev = res.rows[i].absP;
  }
  CHECK(res.rows.back().absP < 0.95 * poled);

  // cross-check the uncoupled variant against the oracle
  MaterialParams unc = mp;
  unc.d31 = unc.d33 = 0.0;
  PointExperiment exp2 = exp;
  exp2.params = unc;
  const PointRunResult res2 = run_point(exp2);
  const auto trace = oracle_trace(unc, oracle_schedule(exp2));
  double worst = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i)
    worst = std::max(worst, std::abs(res2.rows[i].P_ax - trace[i].p));
  CHECK(worst <= std::max(5.0 * unc.reg_eps, 1e-3 * unc.P0));
}

TEST_CASE("point equilibrium matches the applied loads") {
  MaterialParams mp;
  PointExperiment exp = axial_experiment(mp, 3);
  add_leg(exp, 0, 1.2e6, 0, -5e7, 12);
  const PointRunResult res = run_point(exp);
  PointProblem prob(3, mp);
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(prob.num_dofs());
  for (std::size_t n = 0; n < res.trajectory.states.size(); ++n) {
    prob.begin_step(prev);
    const PointState st = prob.unpack(res.trajectory.states[n]);
    const PointResponse r = response(st, mp);
    CHECK(std::abs(r.T.packed()[2] - exp.steps[n].T_app[2]) <=
          1e-4 * (1.0 + std::abs(exp.steps[n].T_app[2])));
    CHECK(std::abs(r.E[2] - exp.steps[n].E_app[2]) <=
          1e-4 * (1.0 + std::abs(exp.steps[n].E_app[2])));
    prev = res.trajectory.states[n];
  }
}
