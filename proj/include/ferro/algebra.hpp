// Small dense tensor algebra for 2-D (plane strain) and 3-D material-point
// computations: symmetric tensors in orthonormal (Mandel) component form,
// piezoelectric coupling tensors, and the algebraic conversion between the
// (S,E)-form and (S,D)-form material tensor sets.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace ferro {

/// Number of independent components of a symmetric d x d tensor.
inline int voigt_size(int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  return dim * (dim + 1) / 2;
}

/// Index pairs of the packed slots. Order: 11,22,12 (2-D); 11,22,33,23,13,12 (3-D).
void voigt_index(int dim, int slot, int& i, int& j);

/// Weight of a packed slot: 1 on diagonal slots, sqrt(2) on shear slots, so
/// that the double contraction a:b equals the plain dot product of the packed
/// vectors for any pair of symmetric tensors.
double voigt_weight(int dim, int slot);

/// Pack a symmetric matrix into its orthonormal component vector.
/// Throws std::invalid_argument if the matrix is not square of dim 2/3 or not
/// symmetric.
Eigen::VectorXd voigt_pack(const Eigen::MatrixXd& sym);

/// Inverse of voigt_pack.
Eigen::MatrixXd voigt_unpack(const Eigen::VectorXd& v);

/// Symmetric second-order tensor stored in packed (orthonormal) form.
class SymTensor {
 public:
  explicit SymTensor(int dim)
      : dim_(dim), v_(Eigen::VectorXd::Zero(voigt_size(dim))) {}
  SymTensor(int dim, const Eigen::VectorXd& packed) : dim_(dim), v_(packed) {
    if (packed.size() != voigt_size(dim))
      throw std::invalid_argument("packed size does not match dim");
  }
  static SymTensor from_matrix(const Eigen::MatrixXd& m) {
    return SymTensor(static_cast<int>(m.rows()), voigt_pack(m));
  }

  int dim() const { return dim_; }
  const Eigen::VectorXd& packed() const { return v_; }
  Eigen::VectorXd& packed() { return v_; }
  Eigen::MatrixXd matrix() const { return voigt_unpack(v_); }

  double ddot(const SymTensor& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
    return v_.dot(o.v_);
  }
  double norm() const { return v_.norm(); }
  double trace() const;
  /// Plain component (i,j), undoing the shear weight.
  double operator()(int i, int j) const;

  SymTensor operator+(const SymTensor& o) const { return {dim_, v_ + o.v_}; }
  SymTensor operator-(const SymTensor& o) const { return {dim_, v_ - o.v_}; }
  SymTensor operator*(double a) const { return {dim_, v_ * a}; }

 private:
  int dim_;
  Eigen::VectorXd v_;
};

/// Fourth-order symmetric tensor (stiffness) as a packed nv x nv matrix.
struct Stiffness {
  int dim;
  Eigen::MatrixXd m;  // nv x nv, symmetric
};

/// Third-order coupling tensor with minor symmetry in the last two slots,
/// packed as a d x nv matrix (shear columns carry the sqrt(2) weight).
struct Piezo {
  int dim;
  Eigen::MatrixXd m;  // d x nv
};

/// Symmetric positive definite dielectric tensor (plain d x d).
struct Dielectric {
  int dim;
  Eigen::MatrixXd m;  // d x d
};

/// Isotropic stiffness from Young's modulus and Poisson ratio. For dim == 2
/// this is the plane-strain restriction.
Stiffness isotropic_stiffness(int dim, double young, double poisson);

/// Pack a full third-order tensor t[k][i][j] (minor symmetric in i,j).
Piezo pack_piezo(int dim, const std::vector<Eigen::MatrixXd>& t);
/// Unpack to full index form, t[k](i,j).
std::vector<Eigen::MatrixXd> unpack_piezo(const Piezo& p);

/// The (S,D)-form material tensor set.
struct MaterialTensors {
  Eigen::MatrixXd c;     // stiffness at constant dielectric displacement, nv x nv
  Eigen::MatrixXd h;     // coupling tensor, d x nv
  Eigen::MatrixXd beta;  // inverse permittivity, d x d
};

/// Convert (cE, d, epsS) of the (S,E)-form constitutive law into the
/// (S,D)-form set: beta = epsS^-1, h = beta*e, cD = cE + e^T*beta*e with
/// e = d*cE. Throws std::invalid_argument on dimension mismatch or a
/// non-invertible permittivity.
MaterialTensors convert_material_tensors(const Stiffness& cE, const Piezo& d,
                                         const Dielectric& epsS);

/// Compound (nv+d) x (nv+d) matrix of the stored-energy quadratic form in
/// the variables (S - S^i, D - P): [[c, -h^T], [-h, beta]].
Eigen::MatrixXd compound_matrix(const MaterialTensors& mt);

/// Smallest eigenvalue of a symmetric matrix (dense eigensolve). Throws
/// std::invalid_argument if the matrix is not symmetric.
double spd_min_eigenvalue(const Eigen::MatrixXd& sym);

}  // namespace ferro
