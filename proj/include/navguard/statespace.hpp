#pragma once

#include <Eigen/Dense>

namespace navguard {

// Discrete LTI model x(k+1) = A x(k) + B u(k) + v(k), y(k) = C x(k) + w(k)
// with cov(v) = Q and cov(w) = R. Dimensions are carried explicitly so that
// shape errors name the offending matrix instead of failing inside Eigen.
struct LtiModel {
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd B;  // n x r
  Eigen::MatrixXd C;  // m x n
  Eigen::MatrixXd Q;  // n x n, symmetric PSD
  Eigen::MatrixXd R;  // m x m, symmetric PD
  Eigen::Index n = 0;
  Eigen::Index r = 0;
  Eigen::Index m = 0;
};

// Convenience factory: fills n, r, m from the matrix shapes and validates.
LtiModel make_model(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                    const Eigen::MatrixXd& C, const Eigen::MatrixXd& Q,
                    const Eigen::MatrixXd& R);

// Steady-state solution of the estimation Riccati fixed point
// P = A (P - P C^T (C P C^T + R)^-1 C P) A^T + Q with gain
// K = P C^T (C P C^T + R)^-1.
struct RiccatiSolution {
  Eigen::MatrixXd P;
  Eigen::MatrixXd K;
  int iterations = 0;
  // max-abs substitution defect of P, scaled by 1 / (1 + max-abs of P).
  double residual_norm = 0.0;
};

// Returns the model iff every LtiModel invariant holds.
// Throws DimensionMismatch or NotPsd naming the offending matrix.
LtiModel validate_model(LtiModel model);

// PBH test: true iff rank([A - lambda I; C]) = n for every eigenvalue
// lambda of A with |lambda| >= 1 - 1e-9.
bool is_detectable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C);

// Fixed-point iteration of the Riccati recursion from P0 = Q, with each
// iterate re-symmetrized. Stops once the substitution defect drops below
// tol. Throws NotDetectable or NoConvergence.
RiccatiSolution solve_dare(const LtiModel& model, double tol = 1e-10,
                           int max_iter = 10000);

// One steady-state estimator step: A xhat + B u + K (y - C xhat).
Eigen::VectorXd steady_state_step(const LtiModel& model,
                                  const Eigen::MatrixXd& K,
                                  const Eigen::VectorXd& xhat,
                                  const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& y);

}  // namespace navguard
