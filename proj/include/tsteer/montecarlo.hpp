// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsteer/assemblage.hpp"
#include "tsteer/channel.hpp"
#include "tsteer/states.hpp"

namespace tsteer {

/// One emulated experiment: every prepared eigenstate of the first N axes is
/// sent through the loop and analyzed in all three Pauli bases.
struct RunConfig {
  int n_measurements = 2;
  long long shots_per_setting = 1'000'000;
  std::uint64_t rng_seed = 1;
  double t_tilde = 0.0;
  ChannelParams channel;
  PreparationConfig prep;
  bool imperfections = true;
  bool include_loss_model = false;

  void validate() const;
};

/// Photon tallies for one (preparation, analysis) cell.
struct CountRecord {
  int prep_axis = 1;
  int prep_outcome = 1;
  int analysis_axis = 1;
  int analysis_outcome = 1;
  long long counts = 0;
  long long shots = 0;
};

/// Emulates the photon-counting experiment shot by shot. Per shot the V
/// component of the (dephased, filtered) state is erased with probability
/// (1 - tau) * P(V); an erased photon is still counted by Bob, in the state
/// R(4t)|H>, so the delivered ensemble averages exactly to the channel
/// output. Counts are reproducible from the seed; each setting samples from
/// its own derived stream, so the parallel and serial drivers tally
/// identical records.
std::vector<CountRecord> simulate_counts(const RunConfig& cfg);
std::vector<CountRecord> simulate_counts_serial(const RunConfig& cfg);

/// Stokes estimates with binomial standard errors for one prepared state.
struct MemberEstimate {
  int prep_axis = 1;
  int prep_outcome = 1;
  std::array<double, 3> stokes{};     // raw linear-inversion estimates
  std::array<double, 3> stokes_se{};  // binomial propagation
  long long shots_per_basis = 0;
  bool repaired = false;              // nearest_density applied
};

struct ReconstructionResult {
  Assemblage assemblage;                 // member weights fixed at 1/2
  std::vector<MemberEstimate> estimates; // canonical member order
};

/// Linear-inversion tomography per prepared state, with eigenvalue-clipping
/// repair whenever shot noise drives the Stokes vector outside the Bloch
/// ball. Rejects incomplete record sets naming the missing cells.
ReconstructionResult reconstruct_assemblage(const std::vector<CountRecord>& records);

/// S_N and its standard error from the raw Stokes estimates (delta method
/// on the matched-basis components, member weights 1/2).
struct SParamEstimate {
  double value = 0.0;
  double std_error = 0.0;
};
SParamEstimate reconstructed_s_param(const ReconstructionResult& recon, int n_measurements);

/// Count CSV: header prep_axis,prep_outcome,analysis_axis,analysis_outcome,
/// counts,shots; one row per cell in canonical order; LF line endings.
void write_counts_csv(std::ostream& out, const std::vector<CountRecord>& records);
std::string counts_csv_string(const std::vector<CountRecord>& records);

/// Parses a count CSV, rejecting malformed input with row/column
/// diagnostics.
std::vector<CountRecord> parse_counts_csv(std::istream& in);

/// Sidecar metadata: the run configuration plus the RNG identifier and,
/// when the loss model is enabled, the per-setting rate factors implied by
/// the polarization-dependent and technological losses. Rates never alter
/// the tallies themselves; erased photons are counted at Bob's side.
nlohmann::json run_metadata(const RunConfig& cfg);

}  // namespace tsteer
