// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include "tsteer/linalg.hpp"

namespace tsteer {

/// Measurement axes A_i = sigma_i, i = 1..3 (x, y, z).
enum class PauliAxis : int { a1 = 1, a2 = 2, a3 = 3 };

/// Binary measurement outcome a = +/-1.
enum class Outcome : int { plus = +1, minus = -1 };

inline constexpr std::array<PauliAxis, 3> kAllAxes{PauliAxis::a1, PauliAxis::a2, PauliAxis::a3};
inline constexpr std::array<Outcome, 2> kAllOutcomes{Outcome::plus, Outcome::minus};

inline int axis_index(PauliAxis axis) { return static_cast<int>(axis); }
inline int outcome_sign(Outcome a) { return static_cast<int>(a); }

PauliAxis axis_from_index(int index);   // 1..3
Outcome outcome_from_sign(int sign);    // +1/-1

/// Expectation values (tr(rho sigma_1), tr(rho sigma_2), tr(rho sigma_3)).
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

/// Alice's source quality: Bloch vectors of the prepared eigenstates are
/// contracted isotropically by s = sqrt(2p - 1), p being the state purity.
struct PreparationConfig {
  double shrink_s = 0.96;

  static PreparationConfig from_purity(double purity);
  void validate() const;  // s in [0, 1]
};

/// Pauli matrix sigma_i.
Hermitian2 pauli_matrix(PauliAxis axis);

/// Eigenstate |a, A_i> in the {|H>, |V>} basis, phase fixed so that the
/// first amplitude is real and nonnegative.
Eigen::Vector2cd pauli_eigenstate(PauliAxis axis, Outcome a);

/// Unit Bloch direction of |a, A_i>.
BlochVector bloch_direction(PauliAxis axis, Outcome a);

BlochVector bloch_vector(const DensityMatrix& rho);
BlochVector bloch_vector(const Hermitian2& h);  // tr(h sigma_i), no normalization

/// (I + v.sigma)/2; rejects |v| > 1 + 1e-9.
DensityMatrix density_from_bloch(const BlochVector& v);

/// Alice's imperfect preparation of |a, A_i>: (I + s n.sigma)/2 with n the
/// ideal Bloch direction.
DensityMatrix prepare_with_impurity(PauliAxis axis, Outcome a, const PreparationConfig& cfg);

}  // namespace tsteer
