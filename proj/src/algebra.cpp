#include "ferro/algebra.hpp"

#include <cmath>

namespace ferro {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

// slot -> (i,j) tables
constexpr int kIdx2[3][2] = {{0, 0}, {1, 1}, {0, 1}};
constexpr int kIdx3[6][2] = {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
}  // namespace

void voigt_index(int dim, int slot, int& i, int& j) {
  if (dim == 2) {
    i = kIdx2[slot][0];
    j = kIdx2[slot][1];
  } else {
    i = kIdx3[slot][0];
    j = kIdx3[slot][1];
  }
}

double voigt_weight(int dim, int slot) {
  return slot < dim ? 1.0 : kSqrt2;
}

Eigen::VectorXd voigt_pack(const Eigen::MatrixXd& sym) {
  const int dim = static_cast<int>(sym.rows());
  if (sym.cols() != dim) throw std::invalid_argument("matrix not square");
  const int nv = voigt_size(dim);
  const double scale = sym.norm();
  if ((sym - sym.transpose()).norm() > 1e-12 * (1.0 + scale))
    throw std::invalid_argument("matrix not symmetric");
  Eigen::VectorXd v(nv);
  for (int a = 0; a < nv; ++a) {
    int i, j;
    voigt_index(dim, a, i, j);
    v[a] = voigt_weight(dim, a) * sym(i, j);
  }
  return v;
}

Eigen::MatrixXd voigt_unpack(const Eigen::VectorXd& v) {
  int dim;
  if (v.size() == 3)
    dim = 2;
  else if (v.size() == 6)
    dim = 3;
  else
    throw std::invalid_argument("packed vector must have length 3 or 6");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = 0; a < v.size(); ++a) {
    int i, j;
    voigt_index(dim, a, i, j);
    const double val = v[a] / voigt_weight(dim, a);
    m(i, j) = val;
    m(j, i) = val;
  }
  return m;
}

double SymTensor::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += v_[i];
  return t;
}

double SymTensor::operator()(int i, int j) const {
  const int nv = voigt_size(dim_);
  for (int a = 0; a < nv; ++a) {
    int p, q;
    voigt_index(dim_, a, p, q);
    if ((p == i && q == j) || (p == j && q == i))
      return v_[a] / voigt_weight(dim_, a);
  }
  throw std::invalid_argument("bad tensor index");
}

Stiffness isotropic_stiffness(int dim, double young, double poisson) {
  const double lambda =
      young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  const double mu = young / (2.0 * (1.0 + poisson));
  const int nv = voigt_size(dim);
  Eigen::VectorXd id = Eigen::VectorXd::Zero(nv);
  for (int i = 0; i < dim; ++i) id[i] = 1.0;
  Eigen::MatrixXd c = lambda * (id * id.transpose());
  c += 2.0 * mu * Eigen::MatrixXd::Identity(nv, nv);
  return {dim, c};
}

Piezo pack_piezo(int dim, const std::vector<Eigen::MatrixXd>& t) {
  const int nv = voigt_size(dim);
  if (static_cast<int>(t.size()) != dim)
    throw std::invalid_argument("piezo tensor needs dim slabs");
  Eigen::MatrixXd m(dim, nv);
  for (int k = 0; k < dim; ++k)
    for (int a = 0; a < nv; ++a) {
      int i, j;
      voigt_index(dim, a, i, j);
      m(k, a) = voigt_weight(dim, a) * t[k](i, j);
    }
  return {dim, m};
}

std::vector<Eigen::MatrixXd> unpack_piezo(const Piezo& p) {
  const int dim = p.dim;
  const int nv = voigt_size(dim);
  std::vector<Eigen::MatrixXd> t(dim, Eigen::MatrixXd::Zero(dim, dim));
  for (int k = 0; k < dim; ++k)
    for (int a = 0; a < nv; ++a) {
      int i, j;
      voigt_index(dim, a, i, j);
      const double val = p.m(k, a) / voigt_weight(dim, a);
      t[k](i, j) = val;
      t[k](j, i) = val;
    }
  return t;
}

MaterialTensors convert_material_tensors(const Stiffness& cE, const Piezo& d,
                                         const Dielectric& epsS) {
  const int dim = cE.dim;
  const int nv = voigt_size(dim);
  if (d.dim != dim || epsS.dim != dim)
    throw std::invalid_argument("dimension mismatch");
  if (cE.m.rows() != nv || d.m.cols() != nv || epsS.m.rows() != dim)
    throw std::invalid_argument("tensor shape mismatch");

  Eigen::LLT<Eigen::MatrixXd> llt(epsS.m);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("permittivity not symmetric positive definite");
  Eigen::MatrixXd beta = llt.solve(Eigen::MatrixXd::Identity(dim, dim));

  const Eigen::MatrixXd e = d.m * cE.m;  // d x nv
  MaterialTensors mt;
  mt.beta = 0.5 * (beta + beta.transpose());
  mt.h = mt.beta * e;
  mt.c = cE.m + e.transpose() * mt.beta * e;
  return mt;
}

Eigen::MatrixXd compound_matrix(const MaterialTensors& mt) {
  const int nv = static_cast<int>(mt.c.rows());
  const int d = static_cast<int>(mt.beta.rows());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nv + d, nv + d);
  k.topLeftCorner(nv, nv) = mt.c;
  k.topRightCorner(nv, d) = -mt.h.transpose();
  k.bottomLeftCorner(d, nv) = -mt.h;
  k.bottomRightCorner(d, d) = mt.beta;
  return k;
}

double spd_min_eigenvalue(const Eigen::MatrixXd& sym) {
  if (sym.rows() != sym.cols())
    throw std::invalid_argument("matrix not square");
  if ((sym - sym.transpose()).norm() > 1e-10 * (1.0 + sym.norm()))
    throw std::invalid_argument("matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolve failed");
  return es.eigenvalues().minCoeff();
}

}  // namespace ferro
