// Material-point (0-D) experiments: a homogeneous volume element under
// prescribed nominal electric field and stress, driven through the
// incremental solver; plus an independent semi-analytic oracle for axial
// loading used as quantitative ground truth.
#pragma once

#include "ferro/constitutive.hpp"
#include "ferro/vi_solver.hpp"

#include <vector>

namespace ferro {

/// The 0-D incremental problem in the unknowns w = [S, D, P] (packed, size
/// nv + 2d). Prescribed stress and field enter through the load functional
/// l.w = T_app : S + E_app . D; there are no constraint rows.
class PointProblem : public AbstractProblem {
 public:
  PointProblem(int dim, const MaterialParams& params);

  int num_dofs() const override { return n_; }
  const Eigen::SparseMatrix<double>& constraint_matrix() const override {
    return empty_constraints_;
  }
  void begin_step(const Eigen::VectorXd& w_prev) override;
  double objective(const Eigen::VectorXd& dw,
                   const Eigen::VectorXd& load) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& dw,
                           const Eigen::VectorXd& load) const override;
  Eigen::SparseMatrix<double> hessian(const Eigen::VectorXd& dw) const override;
  bool saturation_ok(const Eigen::VectorXd& dw) const override;

  int dim() const { return dim_; }
  const MaterialParams& params() const { return params_; }

  /// Load coefficient vector for prescribed stress and field.
  Eigen::VectorXd load_vector(const SymTensor& T_app,
                              const Eigen::VectorXd& E_app) const;
  /// Unpack an absolute dof vector into a point state (P_prev from the
  /// current step).
  PointState unpack(const Eigen::VectorXd& w) const;

 private:
  PointState state_at(const Eigen::VectorXd& dw) const;

  int dim_;
  int nv_;
  int n_;
  MaterialParams params_;
  Eigen::VectorXd w_prev_;
  Eigen::SparseMatrix<double> empty_constraints_;
};

/// One prescribed load step of a point experiment.
struct PointLoadStep {
  double t = 0.0;
  Eigen::VectorXd E_app;  // size d
  Eigen::VectorXd T_app;  // packed, size nv
};

struct PointExperiment {
  MaterialParams params;
  int dim = 3;
  std::vector<PointLoadStep> steps;
};

/// Curve table row; "axial" is the last coordinate axis (z in 3-D, y in 2-D).
struct PointCurveRow {
  int step = 0;
  double t = 0.0;
  double E_ax = 0.0;   // applied axial field
  double T_ax = 0.0;   // applied axial stress
  double D_ax = 0.0;
  double P_ax = 0.0;
  double S_ax = 0.0;   // total axial strain
  double absP = 0.0;
};

struct PointRunResult {
  std::vector<PointCurveRow> rows;
  Trajectory trajectory;
};

/// Run the experiment through the incremental solver and sample the curve
/// columns after every converged step.
PointRunResult run_point(const PointExperiment& exp,
                         const NewtonOptions& opt = {},
                         std::vector<IterationRecord>* iteration_log = nullptr);

/// Axial input sample for the oracle: applied field e and axial stress T at
/// pseudo-time t.
struct OracleSample {
  double t = 0.0;
  double e = 0.0;
  double T = 0.0;
  double p = 0.0;  // filled by oracle_trace
};

/// Independent 1-D reduction for axial loading of the uncoupled model
/// (d31 = d33 = 0): the scalar remanent polarization p evolves so that the
/// driving force e + 2 S0 T p / P0^2 - dpsi_irr(p) never leaves [-E0, E0];
/// switching states are resolved by bisection on the consistency condition
/// to 1e-12 relative. Dense pseudo-time substepping between samples.
std::vector<OracleSample> oracle_trace(const MaterialParams& params,
                                       const std::vector<OracleSample>& schedule,
                                       int substeps = 20);

}  // namespace ferro
