#include "smcbf/nominal.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

namespace smcbf::nominal {

namespace {

double inf_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

constexpr double kRelativeResidualBound = 1e-8;
constexpr int kMaxNewtonIterations = 50;

bool is_hurwitz(const Eigen::MatrixXd& m) {
  return (m.eigenvalues().real().array() < 0.0).all();
}

void check_inputs(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                  const Eigen::MatrixXd& r) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n || r.rows() != b.cols() ||
      r.cols() != b.cols())
    throw std::invalid_argument("solve_care: inconsistent dimensions");
  if (n > 10) throw std::invalid_argument("solve_care: state dimension above 10");
  if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-12 || r.llt().info() != Eigen::Success)
    throw std::invalid_argument("solve_care: R must be symmetric positive definite");
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 ||
      (Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q).eigenvalues().array() < -1e-12).any())
    throw std::invalid_argument("solve_care: Q must be symmetric positive semidefinite");
}

// P = U2 U1⁻¹ from the stable eigenvectors of the Hamiltonian matrix.
Eigen::MatrixXd hamiltonian_initial_guess(const Eigen::MatrixXd& a, const Eigen::MatrixXd& s,
                                          const Eigen::MatrixXd& q) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd ham(2 * n, 2 * n);
  ham << a, -s, -q, -a.transpose();
  Eigen::ComplexEigenSolver<Eigen::MatrixXd> solver(ham);
  if (solver.info() != Eigen::Success) throw CareError("solve_care: Hamiltonian eigensolver failed", NAN);

  std::vector<Eigen::Index> stable;
  for (Eigen::Index i = 0; i < 2 * n; ++i)
    if (solver.eigenvalues()(i).real() < 0.0) stable.push_back(i);
  if (static_cast<Eigen::Index>(stable.size()) != n)
    throw CareError("solve_care: Hamiltonian has eigenvalues on the imaginary axis", NAN);

  Eigen::MatrixXcd basis(2 * n, n);
  for (Eigen::Index j = 0; j < n; ++j) basis.col(j) = solver.eigenvectors().col(stable[j]);
  const Eigen::MatrixXcd u1 = basis.topRows(n);
  const Eigen::MatrixXcd u2 = basis.bottomRows(n);
  const Eigen::MatrixXd p = (u2 * u1.fullPivLu().inverse()).real();
  return 0.5 * (p + p.transpose());
}

}  // namespace

double care_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                     const Eigen::MatrixXd& r, const Eigen::MatrixXd& p) {
  const Eigen::MatrixXd s = b * r.llt().solve(b.transpose());
  return inf_norm(a.transpose() * p + p * a - p * s * p + q);
}

Eigen::MatrixXd solve_continuous_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n * n, n * n);
  // vec(AᵀX) = (I ⊗ Aᵀ) vec X, vec(XA) = (Aᵀ ⊗ I) vec X.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      op.block(i * n, j * n, n, n) += identity(i, j) * a.transpose();
      op.block(i * n, j * n, n, n) += a(j, i) * identity;
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(c.data(), n * n);
  const Eigen::VectorXd x = op.fullPivLu().solve(rhs);
  const Eigen::MatrixXd out = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd solve_care(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           const Eigen::MatrixXd& q, const Eigen::MatrixXd& r) {
  check_inputs(a, b, q, r);
  const Eigen::LLT<Eigen::MatrixXd> r_factor(r);
  const Eigen::MatrixXd s = b * r_factor.solve(b.transpose());
  const double scale = std::max(inf_norm(q), 1.0);

  Eigen::MatrixXd p = hamiltonian_initial_guess(a, s, q);
  double residual = care_residual(a, b, q, r, p) / scale;

  // Kleinman–Newton refinement: solve (A − BK)ᵀP + P(A − BK) + Q + KᵀRK = 0.
  for (int it = 0; it < kMaxNewtonIterations && residual > 0.01 * kRelativeResidualBound; ++it) {
    const Eigen::MatrixXd k = r_factor.solve(b.transpose() * p);
    const Eigen::MatrixXd closed = a - b * k;
    if (!is_hurwitz(closed)) break;
    const Eigen::MatrixXd next = solve_continuous_lyapunov(closed, q + k.transpose() * r * k);
    const double next_residual = care_residual(a, b, q, r, next) / scale;
    if (!(next_residual < residual)) break;
    p = next;
    residual = next_residual;
  }

  if (!(residual <= kRelativeResidualBound))
    throw CareError("solve_care: residual bound not met", residual);
  if (!is_hurwitz(a - s * p)) throw CareError("solve_care: closed loop is not Hurwitz", residual);
  return p;
}

}  // namespace smcbf::nominal
