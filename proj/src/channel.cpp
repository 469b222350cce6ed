// SPDX-License-Identifier: Apache-2.0
#include "tsteer/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tsteer {

void ChannelParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("ChannelParams: gamma must be positive and finite");
  }
  if (!(extra_dephasing_rate >= 0.0) || !std::isfinite(extra_dephasing_rate)) {
    throw std::invalid_argument("ChannelParams: extra_dephasing_rate must be >= 0");
  }
  if (!std::isfinite(analyzer_rotation_deg)) {
    throw std::invalid_argument("ChannelParams: analyzer_rotation_deg must be finite");
  }
  if (!(pdl_ratio > 0.0 && pdl_ratio <= 1.0)) {
    throw std::invalid_argument("ChannelParams: pdl_ratio must lie in (0, 1]");
  }
  if (!(tech_transmissivity > 0.0 && tech_transmissivity <= 1.0)) {
    throw std::invalid_argument("ChannelParams: tech_transmissivity must lie in (0, 1]");
  }
}

DimensionlessTime::DimensionlessTime(double t_tilde) : value(t_tilde) {
  if (!(t_tilde >= 0.0) || !std::isfinite(t_tilde)) {
    throw std::invalid_argument("DimensionlessTime: t must be finite and >= 0");
  }
}

DimensionlessTime dimensionless_from_seconds(double t_seconds, const ChannelParams& params) {
  params.validate();
  return DimensionlessTime(params.gamma * t_seconds);
}

Eigen::Matrix2d rotation_matrix(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("rotation_matrix: non-finite angle");
  Eigen::Matrix2d r;
  r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return r;
}

Hermitian2 evolve_operator(const Hermitian2& h, DimensionlessTime t, const ChannelParams& params,
                           bool imperfections) {
  params.validate();
  const double survive = std::exp(-t.value);
  const double coherence = std::exp(-0.5 * t.value);

  // Relaxation toward H: the V population decays by e^{-t}, coherences by
  // e^{-t/2}; the lost population is returned to H, so the map preserves the
  // trace for any input weight.
  double m11 = h.m11() * survive;
  double m00 = h.m00() + h.m11() * (1.0 - survive);
  Complex m01 = h.m01() * coherence;

  if (imperfections) {
    m01 *= std::exp(-params.extra_dephasing_rate * t.value);
  }

  Hermitian2 out(m00, m11, m01);

  if (params.rotation_enabled) {
    const Eigen::Matrix2cd r = rotation_matrix(4.0 * t.value).cast<Complex>();
    out = Hermitian2::hermitian_part(r * out.matrix() * r.transpose());
  }

  if (imperfections) {
    // The analyzer beam splitter rotates incoming polarization about z;
    // on the off-diagonal this is a phase e^{-i phi}.
    const double phi = params.analyzer_rotation_deg * std::numbers::pi / 180.0;
    out = Hermitian2(out.m00(), out.m11(), out.m01() * std::exp(Complex(0.0, -phi)));
  }
  return out;
}

DensityMatrix evolve(const DensityMatrix& rho, DimensionlessTime t, const ChannelParams& params,
                     bool imperfections) {
  return DensityMatrix(evolve_operator(rho.op(), t, params, imperfections));
}

DimensionlessTime time_from_transmittance(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("transmittance must lie in (0, 1]");
  }
  return DimensionlessTime(-std::log(tau));
}

double transmittance_from_time(DimensionlessTime t) { return std::exp(-t.value); }

}  // namespace tsteer
