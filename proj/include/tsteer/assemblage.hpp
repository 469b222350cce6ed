// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tsteer/channel.hpp"
#include "tsteer/states.hpp"

namespace tsteer {

/// Canonical position of member (axis, outcome): axes ascending, +1 before
/// -1. This order is shared by serialization, SDP constraint indexing and
/// the fidelity tables.
int member_slot(PauliAxis axis, Outcome a);

/// The collection of subnormalized conditional states sigma_{a|A_i} =
/// P(a|A_i) rho_{a|A_i} held by Bob, for the first n_measurements Pauli
/// settings.
struct Assemblage {
  int n_measurements = 2;               // 2 or 3
  std::vector<Hermitian2> members;      // canonical order, size 2 * n_measurements

  const Hermitian2& member(PauliAxis axis, Outcome a) const;
  Hermitian2& member(PauliAxis axis, Outcome a);

  /// Normalized conditional state sigma / tr(sigma).
  DensityMatrix conditional_state(PauliAxis axis, Outcome a) const;

  /// P(a|A_i) = tr sigma_{a|A_i}.
  double probability(PauliAxis axis, Outcome a) const;
};

/// One deterministic response function: an outcome assigned to every
/// measurement setting. gamma_id enumerates all 2^n assignments by binary
/// counting with axis 1 as the least significant bit and bit value 0
/// mapping to outcome +1.
struct DeterministicStrategy {
  int gamma_id = 0;
  int n_measurements = 2;

  Outcome outcome_for(PauliAxis axis) const;
  bool assigns(PauliAxis axis, Outcome a) const { return outcome_for(axis) == a; }
};

std::vector<DeterministicStrategy> deterministic_strategies(int n_measurements);

/// sigma_{a|A_i} = (1/2) * rho_prepared(i, a) for the first n settings.
Assemblage initial_assemblage(int n_measurements, const PreparationConfig& cfg);

/// Member-wise application of the channel (linear and trace preserving, so
/// all assemblage invariants survive).
Assemblage evolve_assemblage(const Assemblage& asm_in, DimensionlessTime t,
                             const ChannelParams& params, bool imperfections);

struct ConsistencyReport {
  bool consistent = false;
  double max_violation = 0.0;
  std::string worst_location;
};

/// Checks the three assemblage invariants at tolerance tol: every member
/// PSD, per-setting probabilities summing to one, and a setting-independent
/// reduced state (Frobenius distance).
ConsistencyReport check_consistency(const Assemblage& asm_in, double tol = 1e-8);

nlohmann::json assemblage_to_json(const Assemblage& asm_in);
Assemblage assemblage_from_json(const nlohmann::json& j);

}  // namespace tsteer
