// SPDX-License-Identifier: Apache-2.0
//
// Internal machinery shared by the interior-point solver and the first-order
// oracle: the translation of an SdpProblem into equality standard form
//
//   minimize <C, Z>  s.t.  A(Z) = b,  Z >= 0,
//
// where Z is the direct sum of the user blocks and one 2x2 slack block per
// LMI constraint. Hermitian 2x2 matrices are vectorized over the orthonormal
// basis {E00, E11, sigma_x/sqrt(2), sigma_y/sqrt(2)}, so each matrix
// constraint contributes four scalar equations.
#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tsteer/sdp.hpp"

namespace tsteer::detail {

using Eigen::Matrix2cd;
using Eigen::Vector4d;
using Eigen::VectorXd;

inline Vector4d vec_herm(const Matrix2cd& h) {
  constexpr double kSqrt2 = 1.41421356237309504880;
  Vector4d v;
  v << h(0, 0).real(), h(1, 1).real(), kSqrt2 * h(0, 1).real(), -kSqrt2 * h(0, 1).imag();
  return v;
}

inline Matrix2cd mat_herm(const Vector4d& v) {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  const std::complex<double> off(v(2) * kInvSqrt2, -v(3) * kInvSqrt2);
  Matrix2cd h;
  h << std::complex<double>(v(0), 0.0), off, std::conj(off), std::complex<double>(v(1), 0.0);
  return h;
}

inline double herm_inner(const Matrix2cd& a, const Matrix2cd& b) {
  return (a * b).trace().real();
}

/// Closed-form eigendecomposition of a 2x2 Hermitian matrix.
struct HermEig {
  double hi = 0.0;
  double lo = 0.0;
  Eigen::Vector2cd vhi;
  Eigen::Vector2cd vlo;
};
HermEig herm_eig(const Matrix2cd& h);

/// Projection onto the PSD cone (eigenvalue clipping).
Matrix2cd psd_project(const Matrix2cd& h);

/// Lower-triangular Cholesky factor; falls back to factoring h + reg*I when
/// a pivot is not strictly positive.
Matrix2cd chol2(const Matrix2cd& h, double reg);

struct ConicForm {
  int n_user = 0;    // variable blocks in the original problem
  int n_cons = 0;    // LMI constraints, one slack block each
  int n_blocks = 0;  // n_user + n_cons
  std::vector<Matrix2cd> cost;  // minimization objective per block
  VectorXd b;                   // 4 * n_cons
  std::vector<std::vector<std::pair<int, double>>> cons_terms;   // per constraint: (user block, coeff)
  std::vector<std::vector<std::pair<int, double>>> block_terms;  // per user block: (constraint, coeff)

  VectorXd apply_a(const std::vector<Matrix2cd>& z) const;
  std::vector<Matrix2cd> apply_at(const VectorXd& y) const;
};

ConicForm build_conic_form(const SdpProblem& problem);

}  // namespace tsteer::detail
