// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tsteer/metrics.hpp"
#include "tsteer/weight.hpp"

namespace tsteer {

/// One pass over a grid of evolution times, producing the analytic curves
/// (steering parameters, weights, QBER, security flags, Stokes vectors).
struct SweepSpec {
  std::vector<double> t_grid;  // ascending, nonempty
  bool include_n2 = true;
  bool include_n3 = true;
  ChannelParams channel;
  PreparationConfig prep;
  bool imperfections = true;
  bool compute_weight = true;
  WeightTolerances weight_tols;

  void validate() const;
};

struct SweepRow {
  double t_tilde = 0.0;
  std::optional<double> s2, s3, w2, w3, qber2, qber3;
  std::optional<bool> bb84_secure, b98_secure;
  // Bloch vector of each evolved conditional state, canonical member order.
  std::array<std::optional<std::array<double, 3>>, 6> stokes;
  // Reference curves for the rotation-off channel.
  double s2_dotted_ref = 0.0;
  double s3_dotted_ref = 0.0;
  // Empty while the weight solve reached optimality, the status name
  // otherwise (recorded in-row; the sweep continues).
  std::string w2_status, w3_status;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);         // parallel over grid points
std::vector<SweepRow> run_sweep_serial(const SweepSpec& spec);  // reference implementation

bool sweep_had_solver_failure(const std::vector<SweepRow>& rows);

/// Deterministic CSV: 12 significant digits, '.' decimal separator, LF line
/// endings, booleans as 0/1, absent columns empty.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string sweep_csv_string(const std::vector<SweepRow>& rows);

}  // namespace tsteer
