// SPDX-License-Identifier: Apache-2.0
#include "tsteer/states.hpp"

#include <cmath>
#include <stdexcept>

namespace tsteer {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

PauliAxis axis_from_index(int index) {
  if (index < 1 || index > 3) throw std::invalid_argument("axis index must be 1, 2 or 3");
  return static_cast<PauliAxis>(index);
}

Outcome outcome_from_sign(int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("outcome must be +1 or -1");
  return static_cast<Outcome>(sign);
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

PreparationConfig PreparationConfig::from_purity(double purity) {
  if (!(purity >= 0.5 && purity <= 1.0)) {
    throw std::invalid_argument("purity must lie in [0.5, 1]");
  }
  return PreparationConfig{std::sqrt(2.0 * purity - 1.0)};
}

void PreparationConfig::validate() const {
  if (!(shrink_s >= 0.0 && shrink_s <= 1.0)) {
    throw std::invalid_argument("shrink factor s must lie in [0, 1]");
  }
}

Hermitian2 pauli_matrix(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::a1:
      return Hermitian2(0.0, 0.0, Complex(1.0, 0.0));
    case PauliAxis::a2:
      return Hermitian2(0.0, 0.0, Complex(0.0, -1.0));
    case PauliAxis::a3:
      return Hermitian2(1.0, -1.0, Complex(0.0, 0.0));
  }
  throw std::invalid_argument("invalid Pauli axis");
}

Eigen::Vector2cd pauli_eigenstate(PauliAxis axis, Outcome a) {
  Eigen::Vector2cd psi;
  const bool plus = (a == Outcome::plus);
  switch (axis) {
    case PauliAxis::a1:  // |+> and |->
      psi << Complex(kInvSqrt2, 0.0), Complex(plus ? kInvSqrt2 : -kInvSqrt2, 0.0);
      return psi;
    case PauliAxis::a2:  // |L> and |R>
      psi << Complex(kInvSqrt2, 0.0), Complex(0.0, plus ? kInvSqrt2 : -kInvSqrt2);
      return psi;
    case PauliAxis::a3:  // |H> and |V>
      if (plus) {
        psi << Complex(1.0, 0.0), Complex(0.0, 0.0);
      } else {
        psi << Complex(0.0, 0.0), Complex(1.0, 0.0);
      }
      return psi;
  }
  throw std::invalid_argument("invalid Pauli axis");
}

BlochVector bloch_direction(PauliAxis axis, Outcome a) {
  const double sign = outcome_sign(a);
  switch (axis) {
    case PauliAxis::a1:
      return BlochVector{sign, 0.0, 0.0};
    case PauliAxis::a2:
      return BlochVector{0.0, sign, 0.0};
    case PauliAxis::a3:
      return BlochVector{0.0, 0.0, sign};
  }
  throw std::invalid_argument("invalid Pauli axis");
}

BlochVector bloch_vector(const Hermitian2& h) {
  return BlochVector{2.0 * h.m01().real(), -2.0 * h.m01().imag(), h.m00() - h.m11()};
}

BlochVector bloch_vector(const DensityMatrix& rho) { return bloch_vector(rho.op()); }

DensityMatrix density_from_bloch(const BlochVector& v) {
  if (v.norm() > 1.0 + 1e-9) {
    throw std::invalid_argument("density_from_bloch: Bloch vector norm exceeds 1");
  }
  return DensityMatrix(
      Hermitian2(0.5 * (1.0 + v.z), 0.5 * (1.0 - v.z), 0.5 * Complex(v.x, -v.y)));
}

DensityMatrix prepare_with_impurity(PauliAxis axis, Outcome a, const PreparationConfig& cfg) {
  cfg.validate();
  BlochVector n = bloch_direction(axis, a);
  n.x *= cfg.shrink_s;
  n.y *= cfg.shrink_s;
  n.z *= cfg.shrink_s;
  return density_from_bloch(n);
}

}  // namespace tsteer
