#include "mshom/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "mshom/errors.hpp"

namespace mshom {

namespace {

constexpr double kDefinitenessTol = 1e-12;

}  // namespace

LinearTwoScale::LinearTwoScale(Matrix A11, Matrix A12, Matrix A21, Matrix A22,
                               Vector b1, Vector b2)
    : A11_(std::move(A11)),
      A12_(std::move(A12)),
      A21_(std::move(A21)),
      A22_(std::move(A22)),
      b1_(std::move(b1)),
      b2_(std::move(b2)) {
  const auto nx = A11_.rows();
  const auto ny = A22_.rows();
  if (nx == 0 || ny == 0 || A11_.cols() != nx || A12_.rows() != nx ||
      A12_.cols() != ny || A21_.rows() != ny || A21_.cols() != nx ||
      A22_.cols() != ny || b1_.size() != nx || b2_.size() != ny) {
    throw ConfigError("LinearTwoScale: inconsistent block shapes");
  }
  if (!(max_symmetric_eigenvalue() < -kDefinitenessTol)) {
    throw ConfigError("LinearTwoScale: A22 is not negative definite");
  }
}

LinearTwoScale LinearTwoScale::Naive() {
  return LinearTwoScale(Matrix::Zero(1, 1), Matrix::Ones(1, 1),
                        Matrix::Ones(1, 1), -Matrix::Ones(1, 1),
                        Vector::Zero(1), Vector::Zero(1));
}

LinearTwoScale LinearTwoScale::Random(int n_x, int n_y, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto fill = [&](int r, int c) {
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = u(rng);
    return m;
  };
  Matrix A11 = fill(n_x, n_x);
  Matrix A12 = fill(n_x, n_y);
  Matrix A21 = fill(n_y, n_x);
  // -(B B^T + I) plus a skew part keeps the symmetric part <= -I.
  const Matrix B = fill(n_y, n_y);
  const Matrix S = fill(n_y, n_y);
  Matrix A22 = -(B * B.transpose() + Matrix::Identity(n_y, n_y)) +
               0.5 * (S - S.transpose());
  Vector b1 = fill(n_x, 1);
  Vector b2 = fill(n_y, 1);
  return LinearTwoScale(std::move(A11), std::move(A12), std::move(A21),
                        std::move(A22), std::move(b1), std::move(b2));
}

double LinearTwoScale::max_symmetric_eigenvalue() const {
  const Matrix sym = 0.5 * (A22_ + A22_.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

TwoScaleSystem LinearTwoScale::as_system(std::string name) const {
  TwoScaleSystem s;
  s.name = std::move(name);
  s.n_x = n_x();
  s.n_y = n_y();
  // Captured by value so the system does not dangle.
  s.f = [A11 = A11_, A12 = A12_, b1 = b1_](const Vector& x, const Vector& y) {
    return Vector(A11 * x + A12 * y + b1);
  };
  s.g = [A21 = A21_, A22 = A22_, b2 = b2_](const Vector& x, const Vector& y) {
    return Vector(A21 * x + A22 * y + b2);
  };
  s.g_jac_y = [A22 = A22_](const Vector&, const Vector&) { return A22; };
  s.g_jac_x = [A21 = A21_](const Vector&, const Vector&) { return A21; };
  s.beta_hat = -max_symmetric_eigenvalue();
  return s;
}

double operator_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  if (!M.allFinite()) return std::numeric_limits<double>::infinity();
  // Scale first so M^T M cannot overflow.
  const double scale = M.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const Matrix S = M / scale;
  const Matrix G = S.transpose() * S;
  Vector v = Vector::Ones(G.cols()) / std::sqrt(static_cast<double>(G.cols()));
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vector w = G * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    w /= n;
    const double next = w.dot(G * w);
    v = std::move(w);
    if (std::abs(next - lambda) <= 1e-15 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return scale * std::sqrt(std::max(lambda, 0.0));
}

namespace {

struct Iteration {
  explicit Iteration(const LinearTwoScale& s, double eps)
      : sys(s), epsilon(eps), lu(s.A22()) {
    C0 = -lu.solve(s.A21());
    d0 = -lu.solve(s.b2());
  }

  Matrix next_C(const Matrix& C) const {
    return C0 + epsilon * lu.solve(C * sys.A11() + C * sys.A12() * C);
  }

  Vector next_d(const Matrix& C, const Vector& d) const {
    return d0 + epsilon * lu.solve(C * sys.b1() + C * sys.A12() * d);
  }

  const LinearTwoScale& sys;
  double epsilon;
  Eigen::PartialPivLU<Matrix> lu;
  Matrix C0;
  Vector d0;
};

}  // namespace

RiccatiSolution riccati_fixed_point(const LinearTwoScale& system,
                                    double epsilon, double tol, int max_iter) {
  if (epsilon < 0.0) throw ConfigError("riccati: epsilon must be >= 0");
  const Iteration it(system, epsilon);

  RiccatiSolution sol;
  Matrix C = it.C0;
  bool converged = false;
  for (int i = 1; i <= max_iter; ++i) {
    Matrix next = it.next_C(C);
    if (!next.allFinite()) {
      throw DivergenceError("riccati: iterates blew up at iteration " +
                            std::to_string(i));
    }
    const double change = operator_norm(next - C);
    if (!std::isfinite(change)) {
      throw DivergenceError("riccati: iterates blew up at iteration " +
                            std::to_string(i));
    }
    C = std::move(next);
    sol.iterations = i;
    if (change <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw DivergenceError("riccati: no convergence within " +
                          std::to_string(max_iter) + " iterations");
  }

  const Matrix& A11 = system.A11();
  const Matrix& A12 = system.A12();
  const Matrix& A21 = system.A21();
  const Matrix& A22 = system.A22();
  const Matrix K = A22 - epsilon * C * A12;
  Eigen::FullPivLU<Matrix> klu(K);
  if (!klu.isInvertible()) {
    throw SingularityError("riccati: A22 - eps C* A12 is singular");
  }
  const Vector rhs = epsilon * C * system.b1() - system.b2();
  sol.d_star = klu.solve(rhs);
  sol.residual_C = operator_norm(epsilon * C * A12 * C + epsilon * C * A11 -
                                 A22 * C - A21);
  sol.residual_d = (K * sol.d_star - rhs).norm();
  sol.C_star = std::move(C);
  return sol;
}

RiccatiIterate riccati_iterates(const LinearTwoScale& system, double epsilon,
                                int k) {
  if (k < 0) throw ConfigError("riccati_iterates: k must be >= 0");
  const Iteration it(system, epsilon);
  Matrix C = it.C0;
  Vector d = it.d0;
  for (int j = 0; j < k; ++j) {
    Vector d_next = it.next_d(C, d);
    C = it.next_C(C);
    d = std::move(d_next);
  }
  return {std::move(C), std::move(d)};
}

}  // namespace mshom
