// Pointwise constitutive layer: free energy density (stored part with
// polarization-dependent material tensors plus the irreversible hardening
// part), its first and second derivatives with respect to the point state
// (S, D, P), remanent-strain kinematics, the dissipation density and its
// smooth regularization, and the switching criterion.
#pragma once

#include "ferro/algebra.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ferro {

class SaturationError : public std::runtime_error {
 public:
  explicit SaturationError(const std::string& what) : std::runtime_error(what) {}
};

enum class ModelKind { QuadraticNoSaturation, SaturatingLandis };

struct MaterialParams {
  double E0 = 1e6;      // coercive field, V/m
  double P0 = 0.3;      // saturation polarization, C/m^2
  double S0 = 0.002;    // saturation strain, -
  double m = 2.0;       // saturation exponent, -
  double eps = 1.2e-8;  // permittivity, C/(V m)
  double E_Y = 3e10;    // Young's modulus, N/m^2
  double nu = 0.3;      // Poisson ratio, -
  double d31 = -2.1e-10;  // piezo constant, m/V
  double d33 = 4.2e-10;   // piezo constant, m/V
  double H0 = 1e6 / 3.0;  // hardening modulus, V m/C
  double reg_eps = 0.3e-6;  // dissipation regularization, C/m^2
  ModelKind model = ModelKind::SaturatingLandis;
  bool kinematic_strain = true;
  double sat_margin = 1e-6;  // relative safeguard for |P| < P0

  void validate() const;
  /// Admissible polarization bound used by the solver safeguards.
  double p_bound() const { return P0 * (1.0 - sat_margin); }
};

/// Compound unknown at one material point, plus the polarization history.
struct PointState {
  SymTensor S;
  Eigen::VectorXd D;
  Eigen::VectorXd P;
  Eigen::VectorXd P_prev;

  explicit PointState(int dim)
      : S(dim),
        D(Eigen::VectorXd::Zero(dim)),
        P(Eigen::VectorXd::Zero(dim)),
        P_prev(Eigen::VectorXd::Zero(dim)) {}
  int dim() const { return S.dim(); }
};

struct PointResponse {
  SymTensor T;            // stress
  Eigen::VectorXd E;      // electric field
  Eigen::VectorXd Ehat;   // driving force -d(psi)/dP
  double psi = 0.0;       // energy density

  explicit PointResponse(int dim)
      : T(dim), E(Eigen::VectorXd::Zero(dim)), Ehat(Eigen::VectorXd::Zero(dim)) {}
};

/// Value, gradient and Hessian of the energy density with respect to the
/// packed state [S, D, P] (size nv + 2d).
struct PointEval {
  double psi = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

/// Remanent strain kinematically tied to the polarization:
/// S^i(P) = S0/(2 P0^2) (3 P otimes P - |P|^2 I). Trace-free in 3-D and even
/// in P; the 2-D variant is the in-plane restriction.
SymTensor remanent_strain(const Eigen::VectorXd& P, const MaterialParams& mp);

/// Transversely isotropic coupling tensor about n = P/|P|, scaled linearly by
/// |P|/P0: d_kij = (|P|/P0) [ d33 n_k n_i n_j + d31 n_k (delta_ij - n_i n_j) ],
/// continuously extended by d(0) = 0.
Piezo piezo_tensor(const Eigen::VectorXd& P, const MaterialParams& mp);

/// (S,D)-form tensors at polarization P (conversion of the isotropic
/// (S,E)-form set with the coupling tensor d(P)).
MaterialTensors material_tensors_at(const Eigen::VectorXd& P,
                                    const MaterialParams& mp);

bool saturation_ok(const Eigen::VectorXd& P, const MaterialParams& mp);

/// Stored part of the energy density at a state.
double psi_reversible(const PointState& st, const MaterialParams& mp);

/// Irreversible (hardening) part. Quadratic model: H0 P.P. Saturating model:
/// the radial antiderivative of dpsi_irr, zero at P = 0; diverges as
/// |P| -> P0.
double psi_irreversible(const Eigen::VectorXd& P, const MaterialParams& mp);

/// Gradient of psi_irreversible. Quadratic: 2 H0 P. Saturating:
/// H0 P0^m / (2(m-1)) ((P0-p)^{1-m} - (P0+p)^{1-m}) P/p with p = |P|.
/// Throws SaturationError at or beyond the safeguard bound.
Eigen::VectorXd dpsi_irr(const Eigen::VectorXd& P, const MaterialParams& mp);

/// Full evaluation of psi = psi_reversible + psi_irreversible and its
/// derivatives with respect to [S, D, P].
PointEval evaluate(const PointState& st, const MaterialParams& mp);

/// First derivatives only: T = dpsi/dS, E = dpsi/dD, Ehat = -dpsi/dP.
PointResponse response(const PointState& st, const MaterialParams& mp);

/// Symmetric Hessian of the energy density with respect to [S, D, P].
Eigen::MatrixXd tangent(const PointState& st, const MaterialParams& mp);

/// Unregularized dissipation density E0 |dP|.
double dissipation_density(const Eigen::VectorXd& dP, const MaterialParams& mp);

/// Smoothed norm |r|_eps = |r| - eps/2 for |r| >= eps, |r|^2/(2 eps) below,
/// scaled by E0; with gradient and Hessian.
struct RegularizedDissipation {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};
RegularizedDissipation dissipation_regularized(const Eigen::VectorXd& dP,
                                               double E0, double eps,
                                               bool with_hess = true);

/// Switching criterion value |Ehat|/E0 - 1 (<= 0: no polarization evolution
/// in the unregularized limit).
double switching_value(const Eigen::VectorXd& Ehat, const MaterialParams& mp);

}  // namespace ferro
