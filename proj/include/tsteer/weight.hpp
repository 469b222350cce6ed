// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <json.hpp>

#include "tsteer/assemblage.hpp"
#include "tsteer/sdp.hpp"

namespace tsteer {

struct WeightTolerances {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iter = 200;
  double clamp_band = 1e-6;  // results this close to 0 or 1 snap to the endpoint
};

struct WeightResult {
  double w_t = 0.0;
  double certificate_gap = 0.0;
  bool clamped = false;
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<Hermitian2> unsteerable_part;  // sigma_gamma blocks in strategy order
};

/// The semidefinite program behind the steerable weight: maximize
/// sum_gamma tr(sigma_gamma) over PSD blocks subject to
/// sigma_{a|A_i} - sum_gamma D_gamma(a|A_i) sigma_gamma >= 0. Exposed so the
/// solver and the independent oracle consume identical program data.
SdpProblem weight_problem(const Assemblage& asm_in);

/// Temporal steerable weight w = 1 - (optimal unsteerable fraction),
/// computed with the interior-point solver. Inconsistent assemblages are
/// rejected; solver failures are propagated through the status field.
WeightResult steerable_weight(const Assemblage& asm_in, const WeightTolerances& tols = {});

/// Certified bracket on the steerable weight, computed independently of the
/// interior-point path: the upper end comes from an explicitly feasible
/// unsteerable decomposition (first-order splitting iterations polished by a
/// greedy search over a Bloch-sphere direction grid), the lower end from an
/// explicitly feasible steering witness normalized through its minimum
/// eigenvalue. Feasibility of both certificates is re-verified with
/// closed-form eigenvalue checks, so  lower <= w_t <= upper  holds up to
/// those checks' tolerance regardless of how well the searches converged.
struct WeightBracket {
  double lower = 0.0;
  double upper = 1.0;

  double width() const { return upper - lower; }
  bool contains(double w, double slack) const { return w >= lower - slack && w <= upper + slack; }
};

WeightBracket oracle_weight(const Assemblage& asm_in, int grid_resolution = 16);

/// First t at which the weight (as reported by the solver) drops into the
/// clamp band and stays there, located by bisection on [t_lo, t_hi].
/// Requires w(t_lo) above the band and w(t_hi) inside it.
double find_unsteerability_onset(int n_measurements, const PreparationConfig& prep,
                                 const ChannelParams& params, bool imperfections, double t_lo,
                                 double t_hi, double t_tol = 1e-4);

nlohmann::json weight_result_to_json(const WeightResult& result);

}  // namespace tsteer
