#include "ferro/constitutive.hpp"

#include "ferro/dual.hpp"

#include <array>
#include <cmath>

namespace ferro {

namespace {

// Below this radius (relative to P0) the 1-homogeneous part of d(P) and its
// derivatives are taken as zero; the continuous extension at the origin.
constexpr double kOriginGuardRel = 1e-9;
// Switch to the series form of the saturating hardening energy near P = 0,
// where the radial coordinate is not differentiable.
constexpr double kSeriesSwitchRel = 1e-3;

void check_dim(int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
}

template <int DIM>
Eigen::Matrix<double, DIM*(DIM + 1) / 2, DIM*(DIM + 1) / 2>
stiffness_fixed(double young, double poisson) {
  constexpr int NV = DIM * (DIM + 1) / 2;
  const double lam =
      young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  const double mu = young / (2.0 * (1.0 + poisson));
  Eigen::Matrix<double, NV, 1> id = Eigen::Matrix<double, NV, 1>::Zero();
  for (int i = 0; i < DIM; ++i) id[i] = 1.0;
  Eigen::Matrix<double, NV, NV> c = lam * (id * id.transpose());
  c += 2.0 * mu * Eigen::Matrix<double, NV, NV>::Identity();
  return c;
}

// Hardening energy as a function of p2 = |P|^2 (saturating model throws at
// the safeguard bound).
template <int DIM>
Dual2<DIM> psi_irr_p2(const Dual2<DIM>& p2, const MaterialParams& mp) {
  using std::log;
  using std::pow;
  using std::sqrt;
  if (mp.model == ModelKind::QuadraticNoSaturation) return mp.H0 * p2;

  const double pb = mp.p_bound();
  if (p2.v >= pb * pb)
    throw SaturationError("polarization at saturation bound");
  const double P0 = mp.P0;
  const double m = mp.m;
  const double thr = kSeriesSwitchRel * P0;
  if (p2.v < thr * thr) {
    const double c4 = m * (m + 1.0) / (24.0 * P0 * P0);
    return mp.H0 * (0.5 * p2 + c4 * (p2 * p2));
  }
  const Dual2<DIM> p = sqrt(p2);
  const double c = mp.H0 * std::pow(P0, m) / (2.0 * (m - 1.0));
  if (std::abs(m - 2.0) < 1e-9)
    return c * (2.0 * std::log(P0) - log(P0 - p) - log(P0 + p));
  return (c / (2.0 - m)) * (2.0 * std::pow(P0, 2.0 - m) -
                            pow(P0 - p, 2.0 - m) - pow(P0 + p, 2.0 - m));
}

template <int DIM>
PointEval evaluate_impl(const PointState& st, const MaterialParams& mp) {
  constexpr int NV = DIM * (DIM + 1) / 2;
  constexpr int N = NV + 2 * DIM;
  using D = Dual2<DIM>;

  std::array<D, DIM> P;
  for (int k = 0; k < DIM; ++k) P[k] = D::variable(st.P[k], k);

  D p2(0.0);
  for (int k = 0; k < DIM; ++k) p2 += P[k] * P[k];

  // remanent strain, packed
  std::array<D, NV> si{};
  if (mp.kinematic_strain) {
    const double c = mp.S0 / (2.0 * mp.P0 * mp.P0);
    for (int a = 0; a < NV; ++a) {
      int i, j;
      voigt_index(DIM, a, i, j);
      D t = 3.0 * (P[i] * P[j]);
      if (i == j) t -= p2;
      si[a] = (c * voigt_weight(DIM, a)) * t;
    }
  }

  // coupling tensor, packed:
  // d_kij = (1/P0)(d31 P_k delta_ij + (d33-d31) P_k P_i P_j / |P|^2)
  const bool coupling = (mp.d31 != 0.0 || mp.d33 != 0.0);
  std::array<std::array<D, NV>, DIM> dm{};
  if (coupling) {
    const double dd = mp.d33 - mp.d31;
    const double guard = kOriginGuardRel * mp.P0;
    D ip2;
    const bool have_homog = p2.v > guard * guard;
    if (have_homog) ip2 = inverse(p2);
    for (int k = 0; k < DIM; ++k)
      for (int a = 0; a < NV; ++a) {
        int i, j;
        voigt_index(DIM, a, i, j);
        D val = (i == j) ? mp.d31 * P[k] : D(0.0);
        if (have_homog) val += dd * (P[k] * P[i] * P[j]) * ip2;
        dm[k][a] = (voigt_weight(DIM, a) / mp.P0) * val;
      }
  }

  const Eigen::Matrix<double, NV, NV> cE = stiffness_fixed<DIM>(mp.E_Y, mp.nu);
  const double b = 1.0 / mp.eps;

  // e = d cE, h = beta e, cD = cE + e^T beta e (beta = b I)
  std::array<std::array<D, NV>, DIM> em{};
  if (coupling)
    for (int k = 0; k < DIM; ++k)
      for (int a = 0; a < NV; ++a) {
        D acc(0.0);
        for (int q = 0; q < NV; ++q) acc += dm[k][q] * cE(q, a);
        em[k][a] = acc;
      }

  std::array<std::array<D, NV>, NV> cd{};
  for (int a = 0; a < NV; ++a)
    for (int q = a; q < NV; ++q) {
      D acc(cE(a, q));
      if (coupling)
        for (int k = 0; k < DIM; ++k) acc += b * (em[k][a] * em[k][q]);
      cd[a][q] = acc;
      if (q != a) cd[q][a] = acc;
    }

  std::array<D, NV> x;
  for (int a = 0; a < NV; ++a) x[a] = st.S.packed()[a] - si[a];
  std::array<D, DIM> g;
  for (int k = 0; k < DIM; ++k) g[k] = st.D[k] - P[k];

  // u = cD x ; v = h x ; T = u - h^T g ; E = -v + b g
  std::array<D, NV> u;
  for (int a = 0; a < NV; ++a) {
    D acc(0.0);
    for (int q = 0; q < NV; ++q) acc += cd[a][q] * x[q];
    u[a] = acc;
  }
  std::array<D, DIM> v{};
  if (coupling)
    for (int k = 0; k < DIM; ++k) {
      D acc(0.0);
      for (int a = 0; a < NV; ++a) acc += b * em[k][a] * x[a];
      v[k] = acc;
    }

  std::array<D, NV> t;
  for (int a = 0; a < NV; ++a) {
    D acc = u[a];
    if (coupling)
      for (int k = 0; k < DIM; ++k) acc -= b * em[k][a] * g[k];
    t[a] = acc;
  }
  std::array<D, DIM> e;
  for (int k = 0; k < DIM; ++k) e[k] = b * g[k] - v[k];

  D psi(0.0);
  for (int a = 0; a < NV; ++a) psi += 0.5 * (x[a] * u[a]);
  for (int k = 0; k < DIM; ++k) {
    psi -= v[k] * g[k];
    psi += 0.5 * b * (g[k] * g[k]);
  }
  psi += psi_irr_p2<DIM>(p2, mp);

  PointEval ev;
  ev.psi = psi.v;
  ev.grad.resize(N);
  ev.hess = Eigen::MatrixXd::Zero(N, N);
  for (int a = 0; a < NV; ++a) ev.grad[a] = t[a].v;
  for (int k = 0; k < DIM; ++k) ev.grad[NV + k] = e[k].v;
  for (int k = 0; k < DIM; ++k) ev.grad[NV + DIM + k] = psi.g[k];

  for (int a = 0; a < NV; ++a)
    for (int q = 0; q < NV; ++q) ev.hess(a, q) = cd[a][q].v;
  for (int a = 0; a < NV; ++a)
    for (int k = 0; k < DIM; ++k) {
      const double hv = coupling ? -b * em[k][a].v : 0.0;
      ev.hess(a, NV + k) = hv;
      ev.hess(NV + k, a) = hv;
    }
  for (int k = 0; k < DIM; ++k) ev.hess(NV + k, NV + k) = b;
  for (int a = 0; a < NV; ++a)
    for (int k = 0; k < DIM; ++k) {
      ev.hess(a, NV + DIM + k) = t[a].g[k];
      ev.hess(NV + DIM + k, a) = t[a].g[k];
    }
  for (int k = 0; k < DIM; ++k)
    for (int l = 0; l < DIM; ++l) {
      ev.hess(NV + k, NV + DIM + l) = e[k].g[l];
      ev.hess(NV + DIM + l, NV + k) = e[k].g[l];
    }
  for (int k = 0; k < DIM; ++k)
    for (int l = 0; l < DIM; ++l)
      ev.hess(NV + DIM + k, NV + DIM + l) = psi.h(k, l);
  return ev;
}

}  // namespace

void MaterialParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(E0, "E0");
  positive(P0, "P0");
  positive(H0, "H0");
  positive(eps, "eps");
  positive(E_Y, "E_Y");
  positive(reg_eps, "reg_eps");
  if (!(m > 1.0)) throw std::invalid_argument("m must exceed 1");
  if (!(nu >= 0.0 && nu < 0.5))
    throw std::invalid_argument("nu must lie in [0, 0.5)");
  if (!(S0 >= 0.0)) throw std::invalid_argument("S0 must be nonnegative");
}

SymTensor remanent_strain(const Eigen::VectorXd& P, const MaterialParams& mp) {
  const int dim = static_cast<int>(P.size());
  check_dim(dim);
  const double c = mp.S0 / (2.0 * mp.P0 * mp.P0);
  Eigen::MatrixXd m = c * (3.0 * P * P.transpose() -
                           P.squaredNorm() *
                               Eigen::MatrixXd::Identity(dim, dim));
  return SymTensor::from_matrix(m);
}

Piezo piezo_tensor(const Eigen::VectorXd& P, const MaterialParams& mp) {
  const int dim = static_cast<int>(P.size());
  check_dim(dim);
  const int nv = voigt_size(dim);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, nv);
  const double p2 = P.squaredNorm();
  const double guard = kOriginGuardRel * mp.P0;
  const bool have_homog = p2 > guard * guard;
  const double dd = mp.d33 - mp.d31;
  for (int k = 0; k < dim; ++k)
    for (int a = 0; a < nv; ++a) {
      int i, j;
      voigt_index(dim, a, i, j);
      double val = (i == j) ? mp.d31 * P[k] : 0.0;
      if (have_homog) val += dd * P[k] * P[i] * P[j] / p2;
      m(k, a) = voigt_weight(dim, a) / mp.P0 * val;
    }
  return {dim, m};
}

MaterialTensors material_tensors_at(const Eigen::VectorXd& P,
                                    const MaterialParams& mp) {
  const int dim = static_cast<int>(P.size());
  const Stiffness ce = isotropic_stiffness(dim, mp.E_Y, mp.nu);
  const Dielectric es{dim, mp.eps * Eigen::MatrixXd::Identity(dim, dim)};
  return convert_material_tensors(ce, piezo_tensor(P, mp), es);
}

bool saturation_ok(const Eigen::VectorXd& P, const MaterialParams& mp) {
  if (mp.model == ModelKind::QuadraticNoSaturation) return true;
  return P.norm() < mp.p_bound();
}

double psi_reversible(const PointState& st, const MaterialParams& mp) {
  const int dim = st.dim();
  const MaterialTensors mt = material_tensors_at(st.P, mp);
  Eigen::VectorXd x = st.S.packed();
  if (mp.kinematic_strain) x -= remanent_strain(st.P, mp).packed();
  const Eigen::VectorXd g = st.D - st.P;
  return 0.5 * x.dot(mt.c * x) - x.dot(mt.h.transpose() * g) +
         0.5 * g.dot(mt.beta * g);
}

double psi_irreversible(const Eigen::VectorXd& P, const MaterialParams& mp) {
  const double p2 = P.squaredNorm();
  if (mp.model == ModelKind::QuadraticNoSaturation) return mp.H0 * p2;
  const double pb = mp.p_bound();
  if (p2 >= pb * pb) throw SaturationError("polarization at saturation bound");
  const double P0 = mp.P0;
  const double m = mp.m;
  const double thr = kSeriesSwitchRel * P0;
  if (p2 < thr * thr)
    return mp.H0 * (0.5 * p2 + m * (m + 1.0) / (24.0 * P0 * P0) * p2 * p2);
  const double p = std::sqrt(p2);
  const double c = mp.H0 * std::pow(P0, m) / (2.0 * (m - 1.0));
  if (std::abs(m - 2.0) < 1e-9)
    return c * std::log(P0 * P0 / (P0 * P0 - p2));
  return c / (2.0 - m) * (2.0 * std::pow(P0, 2.0 - m) -
                          std::pow(P0 - p, 2.0 - m) -
                          std::pow(P0 + p, 2.0 - m));
}

Eigen::VectorXd dpsi_irr(const Eigen::VectorXd& P, const MaterialParams& mp) {
  if (mp.model == ModelKind::QuadraticNoSaturation) return 2.0 * mp.H0 * P;
  const double p = P.norm();
  if (p >= mp.p_bound())
    throw SaturationError("polarization at saturation bound");
  const double P0 = mp.P0;
  const double m = mp.m;
  if (p < 1e-4 * P0) {
    const double u2 = p * p / (P0 * P0);
    return mp.H0 * (1.0 + m * (m + 1.0) / 6.0 * u2) * P;
  }
  const double gm = mp.H0 * std::pow(P0, m) / (2.0 * (m - 1.0)) *
                    (std::pow(P0 - p, 1.0 - m) - std::pow(P0 + p, 1.0 - m));
  return (gm / p) * P;
}

PointEval evaluate(const PointState& st, const MaterialParams& mp) {
  const int dim = st.dim();
  check_dim(dim);
  return dim == 2 ? evaluate_impl<2>(st, mp) : evaluate_impl<3>(st, mp);
}

PointResponse response(const PointState& st, const MaterialParams& mp) {
  const int dim = st.dim();
  const int nv = voigt_size(dim);
  const PointEval ev = evaluate(st, mp);
  PointResponse r(dim);
  r.T = SymTensor(dim, ev.grad.head(nv));
  r.E = ev.grad.segment(nv, dim);
  r.Ehat = -ev.grad.tail(dim);
  r.psi = ev.psi;
  return r;
}

Eigen::MatrixXd tangent(const PointState& st, const MaterialParams& mp) {
  return evaluate(st, mp).hess;
}

double dissipation_density(const Eigen::VectorXd& dP,
                           const MaterialParams& mp) {
  return mp.E0 * dP.norm();
}

RegularizedDissipation dissipation_regularized(const Eigen::VectorXd& dP,
                                               double E0, double eps,
                                               bool with_hess) {
  if (!(eps > 0.0)) throw std::invalid_argument("regularization eps must be positive");
  const int d = static_cast<int>(dP.size());
  RegularizedDissipation out;
  const double r = dP.norm();
  if (r >= eps) {
    out.value = E0 * (r - 0.5 * eps);
    const Eigen::VectorXd n = dP / r;
    out.grad = E0 * n;
    if (with_hess)
      out.hess = (E0 / r) * (Eigen::MatrixXd::Identity(d, d) - n * n.transpose());
  } else {
    out.value = E0 * r * r / (2.0 * eps);
    out.grad = (E0 / eps) * dP;
    if (with_hess) out.hess = (E0 / eps) * Eigen::MatrixXd::Identity(d, d);
  }
  if (!with_hess) out.hess = Eigen::MatrixXd::Zero(d, d);
  return out;
}

double switching_value(const Eigen::VectorXd& Ehat, const MaterialParams& mp) {
  return Ehat.norm() / mp.E0 - 1.0;
}

}  // namespace ferro
