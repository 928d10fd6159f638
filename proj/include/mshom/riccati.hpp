#pragma once

#include <cstdint>

#include "mshom/system.hpp"

namespace mshom {

/// Linear slow-fast system
///
///   dx/dt = A11 x + A12 y + b1,
///   dy/dt = (A21 x + A22 y + b2) / eps,
///
/// whose invariant manifold is the affine graph y = C* x + d*.
class LinearTwoScale {
 public:
  /// Throws ConfigError on mismatched shapes or if the symmetric part of
  /// A22 has an eigenvalue >= -1e-12.
  LinearTwoScale(Matrix A11, Matrix A12, Matrix A21, Matrix A22, Vector b1,
                 Vector b2);

  /// The scalar system x' = y, eps y' = x - y.
  static LinearTwoScale Naive();
  /// Random instance with a negative-definite A22, reproducible from seed.
  static LinearTwoScale Random(int n_x, int n_y, std::uint64_t seed);

  const Matrix& A11() const { return A11_; }
  const Matrix& A12() const { return A12_; }
  const Matrix& A21() const { return A21_; }
  const Matrix& A22() const { return A22_; }
  const Vector& b1() const { return b1_; }
  const Vector& b2() const { return b2_; }
  int n_x() const { return static_cast<int>(A11_.rows()); }
  int n_y() const { return static_cast<int>(A22_.rows()); }

  /// Largest eigenvalue of (A22 + A22^T) / 2 (negative).
  double max_symmetric_eigenvalue() const;

  /// The same system as a TwoScaleSystem with analytic Jacobians and
  /// beta_hat = -max_symmetric_eigenvalue().
  TwoScaleSystem as_system(std::string name = "linear") const;

 private:
  Matrix A11_, A12_, A21_, A22_;
  Vector b1_, b2_;
};

struct RiccatiSolution {
  Matrix C_star;
  Vector d_star;
  /// ||eps C A12 C + eps C A11 - A22 C - A21||
  double residual_C = 0.0;
  /// ||(A22 - eps C A12) d - (eps C b1 - b2)||
  double residual_d = 0.0;
  int iterations = 0;
};

/// Largest singular value of M by power iteration on M^T M.
double operator_norm(const Matrix& M);

/// Solves the manifold equations for (C*, d*) by iterating
///   C <- -A22^{-1} A21 + eps A22^{-1} C A11 + eps A22^{-1} C A12 C
/// from C = -A22^{-1} A21 until successive iterates differ by at most tol
/// in operator norm, then solving (A22 - eps C A12) d = eps C b1 - b2.
///
/// Throws DivergenceError if max_iter is exhausted (eps too large) and
/// SingularityError if A22 - eps C* A12 is singular.
RiccatiSolution riccati_fixed_point(const LinearTwoScale& system,
                                    double epsilon, double tol = 1e-14,
                                    int max_iter = 10000);

struct RiccatiIterate {
  Matrix C;
  Vector d;
};

/// (C_k, d_k) of the fixed-point recursion started at
/// C_0 = -A22^{-1} A21, d_0 = -A22^{-1} b2. These are the exact affine
/// coefficients of the k-th order manifold approximation.
RiccatiIterate riccati_iterates(const LinearTwoScale& system, double epsilon,
                                int k);

}  // namespace mshom
