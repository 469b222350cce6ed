// SPDX-License-Identifier: Apache-2.0
#include "tsteer/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsteer {

namespace {

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

Hermitian2::Hermitian2(double m00, double m11, Complex m01) : m00_(m00), m11_(m11), m01_(m01) {
  if (!std::isfinite(m00) || !std::isfinite(m11) || !finite(m01)) {
    throw std::invalid_argument("Hermitian2: non-finite entry");
  }
}

Eigen::Matrix2cd Hermitian2::matrix() const {
  Eigen::Matrix2cd m;
  m << Complex(m00_, 0.0), m01_, std::conj(m01_), Complex(m11_, 0.0);
  return m;
}

Hermitian2 Hermitian2::hermitian_part(const Eigen::Matrix2cd& m) {
  return Hermitian2(m(0, 0).real(), m(1, 1).real(), 0.5 * (m(0, 1) + std::conj(m(1, 0))));
}

Hermitian2& Hermitian2::operator+=(const Hermitian2& rhs) {
  m00_ += rhs.m00_;
  m11_ += rhs.m11_;
  m01_ += rhs.m01_;
  return *this;
}

Hermitian2& Hermitian2::operator-=(const Hermitian2& rhs) {
  m00_ -= rhs.m00_;
  m11_ -= rhs.m11_;
  m01_ -= rhs.m01_;
  return *this;
}

Hermitian2& Hermitian2::operator*=(double scale) {
  m00_ *= scale;
  m11_ *= scale;
  m01_ *= scale;
  return *this;
}

double inner(const Hermitian2& a, const Hermitian2& b) {
  // tr(AB) = a00 b00 + a11 b11 + 2 Re(a01 conj(b01))
  return a.m00() * b.m00() + a.m11() * b.m11() +
         2.0 * (a.m01().real() * b.m01().real() + a.m01().imag() * b.m01().imag());
}

double frobenius_norm(const Hermitian2& a) { return std::sqrt(inner(a, a)); }

std::pair<double, double> eig2(const Hermitian2& h) {
  const double mean = 0.5 * (h.m00() + h.m11());
  const double half_gap = 0.5 * (h.m00() - h.m11());
  const double radius = std::hypot(half_gap, std::abs(h.m01()));
  return {mean + radius, mean - radius};
}

Eig2 eig2_full(const Hermitian2& h) {
  Eig2 out;
  const auto [hi, lo] = eig2(h);
  out.eval_hi = hi;
  out.eval_lo = lo;
  const Complex b = h.m01();
  // Pick the numerically larger of the two equivalent eigenvector formulas.
  const double r1 = std::hypot(std::abs(b), hi - h.m00());
  const double r2 = std::hypot(h.m00() - lo, std::abs(b));
  if (r1 < 1e-300 && r2 < 1e-300) {
    out.evec_hi << 1.0, 0.0;
    out.evec_lo << 0.0, 1.0;
    return out;
  }
  if (r1 >= r2) {
    out.evec_hi << b / r1, Complex(hi - h.m00(), 0.0) / r1;
  } else {
    out.evec_hi << Complex(h.m00() - lo, 0.0) / r2, std::conj(b) / r2;
  }
  // Orthogonal complement in 2d.
  out.evec_lo << -std::conj(out.evec_hi(1)), std::conj(out.evec_hi(0));
  return out;
}

bool is_psd(const Hermitian2& h, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("is_psd: tol must be >= 0");
  return eig2(h).second >= -tol;
}

DensityMatrix::DensityMatrix(const Hermitian2& op) : op_(op) {
  if (std::abs(op.trace() - 1.0) > 1e-12) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1 by more than 1e-12");
  }
  if (eig2(op).second < -1e-9) {
    throw std::invalid_argument("DensityMatrix: minimum eigenvalue below -1e-9");
  }
}

DensityMatrix nearest_density(const Hermitian2& h) {
  if (!(h.trace() > 0.0)) throw std::invalid_argument("nearest_density: nonpositive trace");
  const Eig2 ed = eig2_full(h);
  const double hi = std::max(ed.eval_hi, 0.0);
  const double lo = std::max(ed.eval_lo, 0.0);
  const double total = hi + lo;
  const Eigen::Matrix2cd repaired = (hi / total) * ed.evec_hi * ed.evec_hi.adjoint() +
                                    (lo / total) * ed.evec_lo * ed.evec_lo.adjoint();
  return DensityMatrix(Hermitian2::hermitian_part(repaired));
}

double fidelity_pure(const Eigen::Vector2cd& psi, const DensityMatrix& rho) {
  if (std::abs(psi.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("fidelity_pure: psi is not normalized");
  }
  const double value = (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace tsteer
