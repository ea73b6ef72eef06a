// Mixed finite-element discretization at lowest order: continuous piecewise
// linear vector displacements, lowest-order divergence-conforming (BDM1)
// dielectric displacement with single-valued normal traces, elementwise
// constant remanent polarization, and an elementwise constant multiplier
// enforcing Gauss' law exactly. The assembled system implements the
// incremental AbstractProblem.
#pragma once

#include "ferro/constitutive.hpp"
#include "ferro/mesh.hpp"
#include "ferro/vi_solver.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ferro {

/// Resolved boundary conditions for one boundary facet.
struct FacetBc {
  bool clamp = false;      // u = 0
  bool roller_x = false;   // u_x = 0
  bool roller_y = false;   // u_y = 0
  bool pin_y_mid = false;  // u_y = 0 at the side vertex nearest its centroid
  bool insulated = false;  // D.n = 0 (edge dofs eliminated)
  bool traction = false;   // scaled traction applied during loading
  bool electrode = false;  // prescribed-potential boundary term
  // phi0(x, y) = phi_scale * (phi_a + phi_bx x + phi_by y)
  double phi_a = 0.0, phi_bx = 0.0, phi_by = 0.0;
};

/// Default mapping of the mesh-file tags: fix -> clamp, trac -> traction,
/// ins -> insulated, el -> driven electrode (phi_a = 1). Untagged boundary
/// is natural (traction free, zero-potential electrode).
std::vector<FacetBc> bc_from_tags(const Mesh& mesh);

struct DofMap {
  int n_u = 0, n_d = 0, n_p = 0;
  int n_primal = 0;
  int offset_d = 0, offset_p = 0;
  std::vector<int> u_dof;  // vertex*2 + comp -> global index or -1
  std::vector<int> d_dof;  // edge*2 + moment -> global index or -1

  int p_dof(int elem, int comp) const { return offset_p + 2 * elem + comp; }
  static DofMap build(const Mesh& mesh, const std::vector<FacetBc>& bc);
};

/// Per-element BDM1 basis: six vector P1 shape functions in physical
/// coordinates, dual to the two normal-trace moments of each globally
/// oriented edge; divergence constant per function.
struct ElementBasis {
  Eigen::Vector2d xc;           // scaling center
  double h = 1.0;               // scaling length
  Eigen::Matrix<double, 6, 6> coef;  // row f: monomials {1,X,Y} x {vx,vy}
  std::array<double, 6> div{};  // constant divergence

  Eigen::Vector2d eval(int f, const Eigen::Vector2d& x) const;
};
ElementBasis bdm1_basis(const Mesh& mesh, int elem);

/// Moments of a smooth field on an oriented edge (the BDM1 interpolation
/// functionals): (1/|e|) \int (v.n) q_i ds for the two P1 edge functions.
Eigen::Vector2d bdm1_edge_moments(const Mesh& mesh, int edge,
                                  const std::function<Eigen::Vector2d(
                                      const Eigen::Vector2d&)>& field);

/// Load data for one step.
struct LoadData {
  double phi_scale = 0.0;                 // multiplies the electrode data
  Eigen::Vector2d traction{0.0, 0.0};     // on traction facets
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> body;  // optional
};

class FeSystem : public AbstractProblem {
 public:
  FeSystem(Mesh mesh, const MaterialParams& params, std::vector<FacetBc> bc);

  int num_dofs() const override { return dofs_.n_primal; }
  const Eigen::SparseMatrix<double>& constraint_matrix() const override {
    return constraints_;
  }
  void begin_step(const Eigen::VectorXd& w_prev) override;
  double objective(const Eigen::VectorXd& dw,
                   const Eigen::VectorXd& load) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& dw,
                           const Eigen::VectorXd& load) const override;
  Eigen::SparseMatrix<double> hessian(const Eigen::VectorXd& dw) const override;
  bool saturation_ok(const Eigen::VectorXd& dw) const override;

  const Mesh& mesh() const { return mesh_; }
  const DofMap& dofs() const { return dofs_; }
  const MaterialParams& params() const { return params_; }

  /// Assembled load functional: volume force, tractions and the electrode
  /// boundary term -\int phi0 D.n ds.
  Eigen::VectorXd assemble_load(const LoadData& load) const;

  /// Point state of element e at position x (strain and P are elementwise
  /// constant; D is linear). P_prev is the stored history.
  PointState element_state(const Eigen::VectorXd& w, int e,
                           const Eigen::Vector2d& x) const;
  /// Elementwise-constant divergence of the dielectric displacement.
  double element_div(const Eigen::VectorXd& w, int e) const;
  /// Interpolate a smooth dielectric displacement field onto the D dofs.
  void interpolate_d(const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& field,
                     Eigen::VectorXd& w) const;

  /// Nodal displacement (zeros at constrained components).
  Eigen::MatrixXd displacement(const Eigen::VectorXd& w) const;

 private:
  struct ElementCache {
    double area = 0.0;
    Eigen::Matrix<double, 3, 6> strain_op;  // packed strain from u dofs
    ElementBasis basis;
    std::array<Eigen::Vector2d, 6> qp;      // physical quadrature points
    std::array<double, 6> qw;               // weights (sum to area)
    std::array<Eigen::Matrix<double, 2, 6>, 6> dshape;  // D(x_q) from d dofs
  };

  void gather(const Eigen::VectorXd& w, int e, Eigen::Matrix<double, 6, 1>& ue,
              Eigen::Matrix<double, 6, 1>& de, Eigen::Vector2d& pe) const;
  template <typename F>
  void for_each_element_eval(const Eigen::VectorXd& w, F&& fn) const;

  Mesh mesh_;
  MaterialParams params_;
  std::vector<FacetBc> bc_;
  DofMap dofs_;
  std::vector<ElementCache> cache_;
  Eigen::SparseMatrix<double> constraints_;
  Eigen::VectorXd w_prev_;
  Eigen::MatrixXd p_prev_;  // ne x 2
};

/// Cell fields evaluated from the constitutive law at element centroids.
struct CellFields {
  Eigen::MatrixXd u;       // nv x 2
  Eigen::VectorXd abs_p;   // per element
  Eigen::MatrixXd p;       // ne x 2
  Eigen::VectorXd t_xx;    // per element
  Eigen::VectorXd div_d;   // per element
};
CellFields postprocess(const FeSystem& sys, const Eigen::VectorXd& w);

/// Legacy ASCII VTK unstructured grid with point data (u) and cell data
/// (|P|, P components, T_xx, div D).
void write_vtk(const std::string& path, const Mesh& mesh, const CellFields& f);

}  // namespace ferro
