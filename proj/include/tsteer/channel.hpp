// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tsteer/linalg.hpp"

namespace tsteer {

/// Parameters of the nonunitary channel between the two measurements plus
/// the measured imperfections of the optical setup.
struct ChannelParams {
  double gamma = 2e7;                  // damping constant, 1/s
  bool rotation_enabled = true;        // polarization rotation R(4 t) in the loop
  double extra_dephasing_rate = 0.05;  // extra off-diagonal decay per unit dimensionless time
  double analyzer_rotation_deg = 7.0;  // beam-splitter rotation about z at the analyzer
  double pdl_ratio = 0.96;             // T(H)/T(V), polarization-dependent loss
  double tech_transmissivity = 0.10;   // polarization-independent single-loop transmissivity

  void validate() const;
};

/// Evolution time in units of 1/gamma: t_tilde = gamma * t_B. All of the
/// numeric core works in these units; conversion from seconds lives at the
/// CLI boundary.
struct DimensionlessTime {
  double value = 0.0;

  explicit DimensionlessTime(double t_tilde);
  DimensionlessTime() = default;
};

DimensionlessTime dimensionless_from_seconds(double t_seconds, const ChannelParams& params);

/// R(theta) = I cos(theta) + i sigma_2 sin(theta), a real orthogonal matrix
/// [[cos, sin], [-sin, cos]] with unit determinant.
Eigen::Matrix2d rotation_matrix(double theta);

/// One step of the channel applied to an arbitrary Hermitian operator
/// (linear, so it acts on subnormalized assemblage members directly):
/// V-population damping by e^{-t}, off-diagonal decay by e^{-t/2}, then the
/// optional R(4t) rotation. With imperfections enabled, the off-diagonals
/// pick up the extra factor e^{-rate*t} before the rotation and the output
/// is conjugated by the analyzer z-rotation last.
Hermitian2 evolve_operator(const Hermitian2& h, DimensionlessTime t, const ChannelParams& params,
                           bool imperfections);

DensityMatrix evolve(const DensityMatrix& rho, DimensionlessTime t, const ChannelParams& params,
                     bool imperfections);

/// Filter transmittance tau in (0, 1]  <->  evolution time t = -ln(tau).
DimensionlessTime time_from_transmittance(double tau);
double transmittance_from_time(DimensionlessTime t);

}  // namespace tsteer
