// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace tsteer {

using Complex = std::complex<double>;

/// Global default tolerance for positive-semidefiniteness checks. Used
/// everywhere no tighter tolerance is called for; overridable per call.
inline constexpr double kPsdTol = 1e-9;

/// 2x2 complex Hermitian matrix. Hermiticity is structural: the diagonal is
/// stored as two reals and only the upper off-diagonal entry is kept, the
/// lower one being its conjugate. All public constructors reject non-finite
/// entries, so downstream arithmetic never sees NaN/Inf.
class Hermitian2 {
 public:
  Hermitian2() : m00_(0.0), m11_(0.0), m01_(0.0, 0.0) {}
  Hermitian2(double m00, double m11, Complex m01);

  double m00() const { return m00_; }
  double m11() const { return m11_; }
  Complex m01() const { return m01_; }

  double trace() const { return m00_ + m11_; }
  double det() const { return m00_ * m11_ - std::norm(m01_); }

  Eigen::Matrix2cd matrix() const;

  /// Hermitian part (M + M^dag)/2 of an arbitrary 2x2 matrix. Used to fold
  /// results of conjugations U M U^dag back into structural form.
  static Hermitian2 hermitian_part(const Eigen::Matrix2cd& m);

  static Hermitian2 identity() { return Hermitian2(1.0, 1.0, Complex(0.0, 0.0)); }
  static Hermitian2 zero() { return Hermitian2(); }

  Hermitian2& operator+=(const Hermitian2& rhs);
  Hermitian2& operator-=(const Hermitian2& rhs);
  Hermitian2& operator*=(double scale);

  friend Hermitian2 operator+(Hermitian2 lhs, const Hermitian2& rhs) { return lhs += rhs; }
  friend Hermitian2 operator-(Hermitian2 lhs, const Hermitian2& rhs) { return lhs -= rhs; }
  friend Hermitian2 operator*(double scale, Hermitian2 rhs) { return rhs *= scale; }
  friend Hermitian2 operator*(Hermitian2 lhs, double scale) { return lhs *= scale; }

 private:
  double m00_, m11_;
  Complex m01_;
};

/// Hilbert-Schmidt inner product tr(AB); real for Hermitian arguments.
double inner(const Hermitian2& a, const Hermitian2& b);

/// Frobenius norm.
double frobenius_norm(const Hermitian2& a);

/// Eigenvalues of a 2x2 Hermitian matrix via the closed-form quadratic,
/// returned in descending order. Their sum equals the trace and their
/// product the determinant up to rounding.
std::pair<double, double> eig2(const Hermitian2& h);

/// Eigendecomposition: eigenvalues descending plus matching orthonormal
/// eigenvectors (columns).
struct Eig2 {
  double eval_hi = 0.0;
  double eval_lo = 0.0;
  Eigen::Vector2cd evec_hi;
  Eigen::Vector2cd evec_lo;
};
Eig2 eig2_full(const Hermitian2& h);

/// True iff the minimum eigenvalue is >= -tol.
bool is_psd(const Hermitian2& h, double tol = kPsdTol);

/// A physical qubit state: Hermitian, unit trace (1e-12) and minimum
/// eigenvalue >= -1e-9. Construction validates; instances are immutable.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Hermitian2& op);

  const Hermitian2& op() const { return op_; }
  Eigen::Matrix2cd matrix() const { return op_.matrix(); }

 private:
  Hermitian2 op_;
};

/// Physicality repair used after tomography: clip negative eigenvalues to
/// zero in the eigenbasis of h, then renormalize to unit trace. Idempotent
/// on valid density matrices; rejects inputs with nonpositive trace.
DensityMatrix nearest_density(const Hermitian2& h);

/// <psi|rho|psi> for a normalized pure state. Rejects unnormalized psi
/// (tolerance 1e-12 on the norm).
double fidelity_pure(const Eigen::Vector2cd& psi, const DensityMatrix& rho);

}  // namespace tsteer
