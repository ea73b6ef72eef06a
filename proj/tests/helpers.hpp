// Shared test utilities: seeded generators, random admissible states, and
// the central finite-difference oracle for the constitutive derivatives.
#pragma once

#include "ferro/constitutive.hpp"

#include <cstdlib>
#include <random>

namespace ferro::testing {

inline unsigned test_seed() {
  const char* s = std::getenv("FERRO_TEST_SEED");
  return s ? static_cast<unsigned>(std::stoul(s)) : 12345u;
}

inline std::mt19937& rng() {
  static std::mt19937 gen(test_seed());
  return gen;
}

inline double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng());
}

inline Eigen::VectorXd random_direction(int dim) {
  Eigen::VectorXd d(dim);
  for (int k = 0; k < dim; ++k) d[k] = uniform(-1.0, 1.0);
  const double n = d.norm();
  return n > 0 ? Eigen::VectorXd(d / n) : random_direction(dim);
}

/// Random state with |P| in [0.1, 0.85] P0, strains at the remanent scale
/// and D - P at the dielectric scale (admissible for both models, away from
/// the coupling-tensor origin).
inline PointState random_state(int dim, const MaterialParams& mp) {
  PointState st(dim);
  const int nv = voigt_size(dim);
  for (int a = 0; a < nv; ++a) st.S.packed()[a] = uniform(-3e-3, 3e-3);
  st.P = uniform(0.1, 0.85) * mp.P0 * random_direction(dim);
  for (int k = 0; k < dim; ++k) st.D[k] = st.P[k] + uniform(-0.02, 0.02);
  return st;
}

inline double total_density(const PointState& st, const MaterialParams& mp) {
  return psi_reversible(st, mp) + psi_irreversible(st.P, mp);
}

inline PointState perturbed(const PointState& st, int index, double h) {
  PointState out = st;
  const int nv = voigt_size(st.dim());
  if (index < nv)
    out.S.packed()[index] += h;
  else if (index < nv + st.dim())
    out.D[index - nv] += h;
  else
    out.P[index - nv - st.dim()] += h;
  return out;
}

inline double fd_step(int index, int nv) { return index < nv ? 1e-8 : 1e-7; }

/// Worst relative deviation between the analytic gradient and central finite
/// differences of the energy density over the full state.
inline double gradient_fd_error(const PointState& st, const MaterialParams& mp) {
  const int nv = voigt_size(st.dim());
  const int n = nv + 2 * st.dim();
  const PointEval ev = evaluate(st, mp);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double h = fd_step(i, nv);
    const double fd = (total_density(perturbed(st, i, h), mp) -
                       total_density(perturbed(st, i, -h), mp)) /
                      (2.0 * h);
    const double scale = std::abs(ev.grad[i]) + 1e-6 * ev.grad.norm() + 1e-12;
    worst = std::max(worst, std::abs(fd - ev.grad[i]) / scale);
  }
  return worst;
}

/// Worst relative deviation between the analytic Hessian and central finite
/// differences of the gradient.
inline double hessian_fd_error(const PointState& st, const MaterialParams& mp) {
  const int nv = voigt_size(st.dim());
  const int n = nv + 2 * st.dim();
  const PointEval ev = evaluate(st, mp);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double h = fd_step(i, nv);
    const Eigen::VectorXd col =
        (evaluate(perturbed(st, i, h), mp).grad -
         evaluate(perturbed(st, i, -h), mp).grad) /
        (2.0 * h);
    const double scale = ev.hess.col(i).norm() + 1e-6 * ev.hess.norm() + 1e-12;
    worst = std::max(worst, (col - ev.hess.col(i)).norm() / scale);
  }
  return worst;
}

/// The four model combinations: {quadratic, saturating} x kinematic strain.
inline std::vector<MaterialParams> model_combinations() {
  std::vector<MaterialParams> out;
  for (ModelKind model :
       {ModelKind::SaturatingLandis, ModelKind::QuadraticNoSaturation})
    for (bool kin : {true, false}) {
      MaterialParams mp;
      mp.model = model;
      mp.kinematic_strain = kin;
      out.push_back(mp);
    }
  return out;
}

}  // namespace ferro::testing
