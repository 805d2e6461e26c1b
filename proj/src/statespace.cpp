#include "navguard/statespace.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "navguard/errors.hpp"

namespace navguard {

namespace {

double max_abs(const Eigen::MatrixXd& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

void require_shape(const Eigen::MatrixXd& M, Eigen::Index rows,
                   Eigen::Index cols, const char* name) {
  if (M.rows() != rows || M.cols() != cols) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(name) + " is " + std::to_string(M.rows()) + "x" +
                    std::to_string(M.cols()) + ", expected " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
}

// Symmetry to 1e-12 relative, then eigenvalue sign check.
void require_covariance(const Eigen::MatrixXd& M, bool strictly_positive,
                        const char* name) {
  const double scale = 1.0 + max_abs(M);
  if (max_abs(M - M.transpose()) > 1e-12 * scale) {
    throw Error(ErrorCode::NotPsd, std::string(name) + " is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (strictly_positive ? (min_eig <= 0.0) : (min_eig < -1e-10 * scale)) {
    throw Error(ErrorCode::NotPsd,
                std::string(name) + " has eigenvalue " +
                    std::to_string(min_eig) +
                    (strictly_positive ? ", must be positive definite"
                                       : ", must be positive semi-definite"));
  }
}

// Right-hand side of the Riccati fixed point for the current P.
Eigen::MatrixXd riccati_rhs(const LtiModel& model, const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd G = model.C * P * model.C.transpose() + model.R;
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (G + G.transpose()));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPsd,
                "innovation covariance C P C^T + R failed SPD factorization");
  }
  const Eigen::MatrixXd X = llt.solve(model.C * P);  // (CPC^T+R)^-1 C P
  return model.A * (P - P * model.C.transpose() * X) * model.A.transpose() +
         model.Q;
}

}  // namespace

LtiModel make_model(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                    const Eigen::MatrixXd& C, const Eigen::MatrixXd& Q,
                    const Eigen::MatrixXd& R) {
  LtiModel model{A, B, C, Q, R, A.rows(), B.cols(), C.rows()};
  return validate_model(std::move(model));
}

LtiModel validate_model(LtiModel model) {
  require_shape(model.A, model.n, model.n, "A");
  require_shape(model.B, model.n, model.r, "B");
  require_shape(model.C, model.m, model.n, "C");
  require_shape(model.Q, model.n, model.n, "Q");
  require_shape(model.R, model.m, model.m, "R");
  require_covariance(model.Q, /*strictly_positive=*/false, "Q");
  require_covariance(model.R, /*strictly_positive=*/true, "R");
  return model;
}

bool is_detectable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "A must be square");
  }
  if (C.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "C has " + std::to_string(C.cols()) + " columns, expected " +
                    std::to_string(n));
  }
  const Eigen::Index m = C.rows();
  Eigen::EigenSolver<Eigen::MatrixXd> eig(A);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> lambda = eig.eigenvalues()(i);
    if (std::abs(lambda) < 1.0 - 1e-9) {
      continue;  // stable mode, always detectable
    }
    Eigen::MatrixXcd pencil(n + m, n);
    pencil.topRows(n) =
        A.cast<std::complex<double>>() -
        lambda * Eigen::MatrixXcd::Identity(n, n);
    pencil.bottomRows(m) = C.cast<std::complex<double>>();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(pencil);
    qr.setThreshold(1e-9);
    if (qr.rank() < n) {
      return false;
    }
  }
  return true;
}

RiccatiSolution solve_dare(const LtiModel& model, double tol, int max_iter) {
  const LtiModel m = validate_model(model);
  if (!is_detectable(m.A, m.C)) {
    throw Error(ErrorCode::NotDetectable,
                "(A, C) fails the PBH rank test at a marginal or unstable "
                "eigenvalue");
  }
  Eigen::MatrixXd P = m.Q;
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::MatrixXd rhs = riccati_rhs(m, P);
    const double defect = max_abs(P - rhs) / (1.0 + max_abs(P));
    if (defect < tol) {
      const Eigen::MatrixXd G = m.C * P * m.C.transpose() + m.R;
      Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (G + G.transpose()));
      if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::NotPsd,
                    "innovation covariance C P C^T + R failed SPD "
                    "factorization");
      }
      RiccatiSolution sol;
      sol.P = P;
      sol.K = llt.solve(m.C * P).transpose();  // P C^T (C P C^T + R)^-1
      sol.iterations = iter;
      sol.residual_norm = defect;
      return sol;
    }
    P = 0.5 * (rhs + rhs.transpose());
  }
  throw Error(ErrorCode::NoConvergence,
              "Riccati iteration exceeded " + std::to_string(max_iter) +
                  " iterations");
}

Eigen::VectorXd steady_state_step(const LtiModel& model,
                                  const Eigen::MatrixXd& K,
                                  const Eigen::VectorXd& xhat,
                                  const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& y) {
  if (K.rows() != model.n || K.cols() != model.m) {
    throw Error(ErrorCode::DimensionMismatch,
                "K is " + std::to_string(K.rows()) + "x" +
                    std::to_string(K.cols()) + ", expected " +
                    std::to_string(model.n) + "x" + std::to_string(model.m));
  }
  if (xhat.size() != model.n) {
    throw Error(ErrorCode::DimensionMismatch, "xhat length != n");
  }
  if (u.size() != model.r) {
    throw Error(ErrorCode::DimensionMismatch, "u length != r");
  }
  if (y.size() != model.m) {
    throw Error(ErrorCode::DimensionMismatch, "y length != m");
  }
  return model.A * xhat + model.B * u + K * (y - model.C * xhat);
}

}  // namespace navguard
