// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "tsteer/linalg.hpp"

namespace tsteer {

/// One addend coeff * X_block of a linear combination of variable blocks.
struct BlockTerm {
  int block = 0;
  double coeff = 0.0;
};

/// Linear matrix inequality  constant - sum_k coeff_k X_{block_k} >= 0.
struct LmiConstraint {
  Hermitian2 constant;
  std::vector<BlockTerm> terms;
};

/// Conic program over 2x2 Hermitian PSD variable blocks:
///
///   maximize    sum_k <objective_k, X_k>
///   subject to  X_k >= 0 for every block,
///               every LmiConstraint holds.
struct SdpProblem {
  int n_blocks = 0;
  std::vector<Hermitian2> objective;      // one entry per block
  std::vector<LmiConstraint> constraints;

  void validate() const;
};

enum class SolveStatus { optimal, infeasible, max_iterations };

const char* to_string(SolveStatus status);

struct SolverOptions {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iter = 200;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::max_iterations;
  double primal_value = 0.0;  // sum <objective_k, X_k> at the returned blocks
  double dual_value = 0.0;    // matching upper bound
  double gap = 0.0;           // |primal - dual| / (1 + |primal| + |dual|)
  double max_residual = 0.0;  // worst primal/dual equation residual
  int iterations = 0;
  std::vector<Hermitian2> blocks;           // recovered variable blocks
  std::vector<Hermitian2> constraint_duals; // PSD multiplier per LMI constraint
};

/// Primal-dual interior-point solve (Nesterov-Todd scaling, Mehrotra-style
/// centering) specialized to direct sums of 2x2 Hermitian cones. All
/// factorizations are dense and closed-form; identical inputs produce
/// bit-identical outputs within one build.
SdpSolution solve_sdp(const SdpProblem& problem, const SolverOptions& options = {});

}  // namespace tsteer
