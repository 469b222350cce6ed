// SPDX-License-Identifier: Apache-2.0
#include "tsteer/weight.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

#include "conic_form.hpp"

namespace tsteer {

namespace {

using detail::ConicForm;
using detail::herm_eig;
using detail::mat_herm;
using detail::psd_project;
using detail::vec_herm;
using Eigen::Matrix2cd;
using Eigen::MatrixXd;
using Eigen::Vector2cd;
using Eigen::VectorXd;

void require_consistent(const Assemblage& asm_in) {
  const ConsistencyReport report = check_consistency(asm_in);
  if (!report.consistent) {
    throw std::invalid_argument("assemblage is inconsistent (worst violation " +
                                std::to_string(report.max_violation) + " at " +
                                report.worst_location + ")");
  }
}

/// Candidate Bloch directions: a Fibonacci lattice on the sphere.
std::vector<Vector2cd> direction_grid(int resolution) {
  const int count = std::max(8, 2 * resolution * resolution);
  std::vector<Vector2cd> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double phi = golden * i;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    // Pure state with Bloch vector (r cos phi, r sin phi, z).
    const double half = std::acos(std::clamp(z, -1.0, 1.0)) * 0.5;
    Vector2cd psi;
    psi << std::cos(half), std::sin(half) * std::exp(std::complex<double>(0.0, phi));
    dirs.push_back(psi);
  }
  return dirs;
}

/// sup { a >= 0 : slack - a |psi><psi| >= 0 } for a PSD slack matrix.
double max_rank_one_step(const Matrix2cd& slack, const Vector2cd& psi) {
  const double tr = slack.trace().real();
  const double overlap = (psi.adjoint() * slack * psi)(0, 0).real();
  const double denom = tr - overlap;  // psi^dag adj(slack) psi
  const double det = slack.determinant().real();
  if (denom > 1e-14) return std::max(0.0, det) / denom;
  return std::max(0.0, overlap);
}

struct AdmmOutcome {
  std::vector<Matrix2cd> primal;  // PSD blocks (user + slack)
  VectorXd dual;                  // multiplier of A(Z) = b
  double primal_res = 0.0;
  double dual_res = 0.0;
};

/// Two-block splitting (alternating projections onto the affine feasible
/// set and the PSD cone with a scaled running multiplier), with standard
/// over-relaxation and residual-balancing penalty updates. The affine
/// projection reuses one Cholesky factorization of A A^T, which block-
/// diagonalizes over the four Hermitian basis components.
AdmmOutcome admm_solve(const ConicForm& form, int max_iter, double rho) {
  constexpr double kOverRelax = 1.6;
  const int nb = form.n_blocks;
  const int mc = form.n_cons;

  MatrixXd gram = MatrixXd::Identity(mc, mc);
  for (int j1 = 0; j1 < mc; ++j1) {
    for (int j2 = 0; j2 < mc; ++j2) {
      double dot = 0.0;
      for (const auto& [k1, c1] : form.cons_terms[static_cast<std::size_t>(j1)]) {
        for (const auto& [k2, c2] : form.cons_terms[static_cast<std::size_t>(j2)]) {
          if (k1 == k2) dot += c1 * c2;
        }
      }
      gram(j1, j2) += dot;
    }
  }
  const Eigen::LLT<MatrixXd> gram_fact(gram);

  auto solve_aat = [&](const VectorXd& v) {
    VectorXd out(v.size());
    MatrixXd rhs(mc, 4);
    for (int j = 0; j < mc; ++j) {
      for (int r = 0; r < 4; ++r) rhs(j, r) = v(4 * j + r);
    }
    const MatrixXd sol = gram_fact.solve(rhs);
    for (int j = 0; j < mc; ++j) {
      for (int r = 0; r < 4; ++r) out(4 * j + r) = sol(j, r);
    }
    return out;
  };

  std::vector<Matrix2cd> y_blocks(static_cast<std::size_t>(nb), Matrix2cd::Zero());
  std::vector<Matrix2cd> u_blocks(static_cast<std::size_t>(nb), Matrix2cd::Zero());
  std::vector<Matrix2cd> z_blocks(static_cast<std::size_t>(nb), Matrix2cd::Zero());
  VectorXd xi = VectorXd::Zero(4 * mc);

  AdmmOutcome out;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<Matrix2cd> v(static_cast<std::size_t>(nb));
    for (int blk = 0; blk < nb; ++blk) {
      const auto bi = static_cast<std::size_t>(blk);
      v[bi] = y_blocks[bi] - u_blocks[bi] - form.cost[bi] / rho;
    }
    xi = solve_aat(form.apply_a(v) - form.b);
    const std::vector<Matrix2cd> at_xi = form.apply_at(xi);

    double primal_res = 0.0;
    double dual_res = 0.0;
    for (int blk = 0; blk < nb; ++blk) {
      const auto bi = static_cast<std::size_t>(blk);
      z_blocks[bi] = v[bi] - at_xi[bi];
      const Matrix2cd relaxed = kOverRelax * z_blocks[bi] + (1.0 - kOverRelax) * y_blocks[bi];
      const Matrix2cd y_prev = y_blocks[bi];
      y_blocks[bi] = psd_project(relaxed + u_blocks[bi]);
      u_blocks[bi] += relaxed - y_blocks[bi];
      primal_res = std::max(primal_res, (z_blocks[bi] - y_blocks[bi]).cwiseAbs().maxCoeff());
      dual_res = std::max(dual_res, rho * (y_blocks[bi] - y_prev).cwiseAbs().maxCoeff());
    }
    out.primal_res = primal_res;
    out.dual_res = dual_res;
    if (primal_res < 1e-11 && dual_res < 1e-11) break;
    // Residual balancing; the affine-projection factor is rho independent,
    // only the scaled multiplier needs rescaling.
    if ((iter + 1) % 100 == 0 && iter + 1 < max_iter) {
      double scale = 1.0;
      if (primal_res > 10.0 * dual_res) {
        scale = 2.0;
      } else if (dual_res > 10.0 * primal_res) {
        scale = 0.5;
      }
      if (scale != 1.0) {
        rho *= scale;
        for (auto& u : u_blocks) u /= scale;
      }
    }
  }
  out.primal = y_blocks;
  out.dual = -rho * xi;
  return out;
}

}  // namespace

SdpProblem weight_problem(const Assemblage& asm_in) {
  const auto strategies = deterministic_strategies(asm_in.n_measurements);
  SdpProblem problem;
  problem.n_blocks = static_cast<int>(strategies.size());
  problem.objective.assign(strategies.size(), Hermitian2::identity());
  for (int i = 1; i <= asm_in.n_measurements; ++i) {
    for (Outcome a : kAllOutcomes) {
      const PauliAxis axis = axis_from_index(i);
      LmiConstraint cons;
      cons.constant = asm_in.member(axis, a);
      for (const DeterministicStrategy& strat : strategies) {
        if (strat.assigns(axis, a)) cons.terms.push_back({strat.gamma_id, 1.0});
      }
      problem.constraints.push_back(std::move(cons));
    }
  }
  return problem;
}

WeightResult steerable_weight(const Assemblage& asm_in, const WeightTolerances& tols) {
  require_consistent(asm_in);
  SolverOptions options;
  options.gap_tol = tols.gap_tol;
  options.feas_tol = tols.feas_tol;
  options.max_iter = tols.max_iter;
  const SdpSolution solution = solve_sdp(weight_problem(asm_in), options);

  WeightResult result;
  result.status = solution.status;
  result.certificate_gap = solution.gap;
  result.unsteerable_part = solution.blocks;
  double w = 1.0 - solution.primal_value;
  if (w < tols.clamp_band) {
    result.clamped = w != 0.0;
    w = 0.0;
  } else if (w > 1.0 - tols.clamp_band) {
    result.clamped = w != 1.0;
    w = 1.0;
  }
  result.w_t = w;
  return result;
}

WeightBracket oracle_weight(const Assemblage& asm_in, int grid_resolution) {
  require_consistent(asm_in);
  if (grid_resolution < 2) throw std::invalid_argument("oracle_weight: grid_resolution too small");
  const SdpProblem problem = weight_problem(asm_in);
  const ConicForm form = detail::build_conic_form(problem);
  const auto strategies = deterministic_strategies(asm_in.n_measurements);
  const int n_user = form.n_user;
  const int n_cons = form.n_cons;

  const std::vector<Matrix2cd> constants = [&] {
    std::vector<Matrix2cd> out;
    out.reserve(static_cast<std::size_t>(n_cons));
    for (const LmiConstraint& cons : problem.constraints) out.push_back(cons.constant.matrix());
    return out;
  }();

  const AdmmOutcome admm = admm_solve(form, 6000 + 500 * grid_resolution, 1.0);

  // ---- Lower end: explicitly feasible steering witness. ----
  // Dual multipliers F_j >= 0 with sum_i F_{gamma(i), i} >= I for every
  // strategy certify  w >= 1 - sum_j tr(F_j sigma_j). Any PSD family can be
  // normalized into feasibility through the worst strategy eigenvalue.
  std::vector<Matrix2cd> witness(static_cast<std::size_t>(n_cons));
  for (int j = 0; j < n_cons; ++j) {
    witness[static_cast<std::size_t>(j)] = psd_project(-mat_herm(admm.dual.segment<4>(4 * j)));
  }
  auto witness_value = [&](const std::vector<Matrix2cd>& f) {
    double worst = std::numeric_limits<double>::infinity();
    for (const DeterministicStrategy& strat : strategies) {
      Matrix2cd sum = Matrix2cd::Zero();
      for (int i = 1; i <= asm_in.n_measurements; ++i) {
        const PauliAxis axis = axis_from_index(i);
        sum += f[static_cast<std::size_t>(member_slot(axis, strat.outcome_for(axis)))];
      }
      worst = std::min(worst, herm_eig(sum).lo);
    }
    if (worst <= 1e-12) return std::numeric_limits<double>::infinity();
    double value = 0.0;
    for (int j = 0; j < n_cons; ++j) {
      value += detail::herm_inner(f[static_cast<std::size_t>(j)],
                                  constants[static_cast<std::size_t>(j)]);
    }
    return value / worst;
  };
  double dual_value = witness_value(witness);
  if (!std::isfinite(dual_value)) {
    // Degenerate multiplier; fall back to lifting the first-axis pair, which
    // raises every strategy sum by the identity.
    for (Outcome a : kAllOutcomes) {
      witness[static_cast<std::size_t>(member_slot(PauliAxis::a1, a))] += Matrix2cd::Identity();
    }
    dual_value = witness_value(witness);
  }

  // At the optimum each hidden state is supported on the kernel of its dual
  // slack, so the witness hands the decomposition search its best candidate
  // direction per block.
  std::vector<Vector2cd> kernel_dirs(static_cast<std::size_t>(n_user));
  for (int k = 0; k < n_user; ++k) {
    const DeterministicStrategy& strat = strategies[static_cast<std::size_t>(k)];
    Matrix2cd sum = Matrix2cd::Zero();
    for (int i = 1; i <= asm_in.n_measurements; ++i) {
      const PauliAxis axis = axis_from_index(i);
      sum += witness[static_cast<std::size_t>(member_slot(axis, strat.outcome_for(axis)))];
    }
    kernel_dirs[static_cast<std::size_t>(k)] = herm_eig(sum).vlo;
  }

  // ---- Upper end: explicitly feasible unsteerable decomposition. ----
  auto slack_of = [&](int j, const std::vector<Matrix2cd>& p) {
    Matrix2cd slack = constants[static_cast<std::size_t>(j)];
    for (const auto& [k, coeff] : form.cons_terms[static_cast<std::size_t>(j)]) {
      slack -= coeff * p[static_cast<std::size_t>(k)];
    }
    return slack;
  };

  // Largest common scale in [0, 1] keeping every slack PSD (its minimum
  // eigenvalue is concave in the scale). The -1e-11 floor tolerates members
  // that are singular up to rounding; it perturbs the certified value by far
  // less than the bracket widths quoted to callers.
  constexpr double kSlackFloor = -1e-11;
  auto max_feasible_scale = [&](const std::vector<Matrix2cd>& p) {
    auto ok = [&](double t) {
      for (int j = 0; j < n_cons; ++j) {
        Matrix2cd slack = constants[static_cast<std::size_t>(j)];
        for (const auto& [k, coeff] : form.cons_terms[static_cast<std::size_t>(j)]) {
          slack -= t * coeff * p[static_cast<std::size_t>(k)];
        }
        if (herm_eig(slack).lo < kSlackFloor) return false;
      }
      return true;
    };
    if (ok(1.0)) return 1.0;
    if (!ok(0.0)) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 60; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (ok(mid) ? lo : hi) = mid;
    }
    return lo;
  };

  // Direction-aware repair: a slack violated by eigenvalue -delta along |d>
  // is healed by stripping the d-aligned rank-one component off the
  // participating blocks. Removing PSD mass can only raise every other
  // slack, so the sweep is monotone, and the trace cost stays proportional
  // to the violation itself. Uniform scaling would instead pay the
  // violation divided by the member's smallest eigenvalue, which is ruinous
  // for nearly singular members.
  auto direction_repair = [&](std::vector<Matrix2cd>& p) {
    for (int round = 0; round < 12; ++round) {
      bool any_violation = false;
      for (int j = 0; j < n_cons; ++j) {
        const detail::HermEig slack_eig = herm_eig(slack_of(j, p));
        if (slack_eig.lo >= 0.0) continue;
        any_violation = true;
        double deficit = -slack_eig.lo * (1.0 + 1e-9) + 1e-15;
        const Vector2cd d = slack_eig.vlo;
        for (int attempt = 0; attempt < 8 && deficit > 0.0; ++attempt) {
          int best_k = -1;
          double best_gain = 1e-18;
          for (const auto& [k, coeff] : form.cons_terms[static_cast<std::size_t>(j)]) {
            (void)coeff;
            const double gain = (d.adjoint() * p[static_cast<std::size_t>(k)] * d)(0, 0).real();
            if (gain > best_gain) {
              best_gain = gain;
              best_k = k;
            }
          }
          if (best_k < 0) break;
          Matrix2cd& sigma = p[static_cast<std::size_t>(best_k)];
          const Vector2cd sd = sigma * d;
          const double alpha = std::min(1.0, deficit / best_gain);
          sigma = psd_project(sigma - (alpha / best_gain) * sd * sd.adjoint());
          deficit -= alpha * best_gain;
        }
      }
      if (!any_violation) break;
    }
  };

  // Greedy rank-one augmentation over a Bloch direction grid: for every
  // hidden-state block, add as much of the best candidate projector as the
  // participating slacks allow. Monotone in the recovered trace and exactly
  // feasible at every step. The search runs from the (repaired) splitting
  // iterate and from scratch; a poorly supported warm start cannot be
  // unwound by augmentation alone, so the better endpoint wins.
  const std::vector<Vector2cd> grid = direction_grid(grid_resolution);
  auto greedy_value = [&](std::vector<Matrix2cd> parts) {
    std::vector<Matrix2cd> slacks(static_cast<std::size_t>(n_cons));
    for (int j = 0; j < n_cons; ++j) slacks[static_cast<std::size_t>(j)] = slack_of(j, parts);
    for (int pass = 0; pass < 60; ++pass) {
      double pass_gain = 0.0;
      for (int k = 0; k < n_user; ++k) {
        const auto& active = form.block_terms[static_cast<std::size_t>(k)];
        auto step_for = [&](const Vector2cd& psi) {
          double a = std::numeric_limits<double>::infinity();
          for (const auto& [j, coeff] : active) {
            (void)coeff;
            a = std::min(a, max_rank_one_step(slacks[static_cast<std::size_t>(j)], psi));
          }
          return a;
        };
        double best_step = 0.0;
        Vector2cd best_psi;
        auto consider = [&](const Vector2cd& psi) {
          const double a = step_for(psi);
          if (a > best_step) {
            best_step = a;
            best_psi = psi;
          }
        };
        for (const Vector2cd& psi : grid) consider(psi);
        // The witness kernel and the eigenvectors of the participating
        // slacks are natural candidates as well.
        consider(kernel_dirs[static_cast<std::size_t>(k)]);
        for (const auto& [j, coeff] : active) {
          (void)coeff;
          const detail::HermEig e = herm_eig(slacks[static_cast<std::size_t>(j)]);
          consider(e.vhi);
          consider(e.vlo);
        }
        if (best_step > 1e-12) {
          const Matrix2cd add = best_step * best_psi * best_psi.adjoint();
          parts[static_cast<std::size_t>(k)] += add;
          for (const auto& [j, coeff] : active) {
            (void)coeff;
            slacks[static_cast<std::size_t>(j)] -= add;
          }
          pass_gain += best_step;
        }
      }
      if (pass_gain < 1e-11) break;
    }
    // Certify: repair any rounding-level violation, then shrink if a slack
    // still sits below the floor, and take the recovered trace.
    direction_repair(parts);
    const double certify_scale = max_feasible_scale(parts);
    double recovered = 0.0;
    for (const Matrix2cd& p : parts) recovered += p.trace().real();
    return recovered * certify_scale;
  };

  std::vector<Matrix2cd> warm(static_cast<std::size_t>(n_user));
  for (int k = 0; k < n_user; ++k) {
    warm[static_cast<std::size_t>(k)] = psd_project(admm.primal[static_cast<std::size_t>(k)]);
  }
  direction_repair(warm);

  // Third candidate, built from the witness by complementary slackness: the
  // hidden states live on the dual-slack kernels, and active constraints
  // (those carrying a nonzero multiplier) are tight along the multiplier's
  // range. That turns the weights into a small linear system. Infeasible
  // slop from an imperfect witness is removed by the shared certification.
  std::vector<Matrix2cd> slackness(static_cast<std::size_t>(n_user), Matrix2cd::Zero());
  {
    const double f_scale = [&] {
      double top = 0.0;
      for (const Matrix2cd& f : witness) top = std::max(top, herm_eig(f).hi);
      return top;
    }();
    std::vector<int> support;
    for (int k = 0; k < n_user; ++k) {
      const DeterministicStrategy& strat = strategies[static_cast<std::size_t>(k)];
      Matrix2cd sum = Matrix2cd::Zero();
      for (int i = 1; i <= asm_in.n_measurements; ++i) {
        const PauliAxis axis = axis_from_index(i);
        sum += witness[static_cast<std::size_t>(member_slot(axis, strat.outcome_for(axis)))];
      }
      const detail::HermEig e = herm_eig(sum);
      // Strictly positive dual slack forces a vanishing hidden state.
      if (e.lo <= e.hi * 1e-3 + 1e-9) support.push_back(k);
    }
    std::vector<std::pair<int, Vector2cd>> active;  // (constraint, tight direction)
    for (int j = 0; j < n_cons; ++j) {
      const detail::HermEig e = herm_eig(witness[static_cast<std::size_t>(j)]);
      if (e.hi > 1e-6 * f_scale) active.emplace_back(j, e.vhi);
      if (e.lo > 1e-3 * f_scale) active.emplace_back(j, e.vlo);
    }
    if (!support.empty() && !active.empty()) {
      Eigen::MatrixXd a_mat(active.size(), support.size());
      Eigen::VectorXd rhs(active.size());
      for (std::size_t row = 0; row < active.size(); ++row) {
        const auto& [j, phi] = active[row];
        rhs(static_cast<Eigen::Index>(row)) =
            (phi.adjoint() * constants[static_cast<std::size_t>(j)] * phi)(0, 0).real();
        for (std::size_t col = 0; col < support.size(); ++col) {
          const int k = support[col];
          double coeff = 0.0;
          for (const auto& [jj, c] : form.block_terms[static_cast<std::size_t>(k)]) {
            if (jj == j) coeff = c;
          }
          const Complex overlap = kernel_dirs[static_cast<std::size_t>(k)].dot(phi);
          a_mat(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
              coeff * std::norm(overlap);
        }
      }
      const Eigen::VectorXd c =
          a_mat.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
      for (std::size_t col = 0; col < support.size(); ++col) {
        const double weight = std::max(0.0, c(static_cast<Eigen::Index>(col)));
        const Vector2cd& dir = kernel_dirs[static_cast<std::size_t>(support[col])];
        slackness[static_cast<std::size_t>(support[col])] = weight * dir * dir.adjoint();
      }
      direction_repair(slackness);
    }
  }

  const double value_warm = greedy_value(std::move(warm));
  const double value_slackness = greedy_value(std::move(slackness));
  const double value_zero = greedy_value(
      std::vector<Matrix2cd>(static_cast<std::size_t>(n_user), Matrix2cd::Zero()));
  if (std::getenv("TSTEER_ORACLE_DEBUG") != nullptr) {
    std::fprintf(stderr,
                 "oracle: admm pres=%.2e dres=%.2e | warm=%.9f slackness=%.9f zero=%.9f dual=%.9f\n",
                 admm.primal_res, admm.dual_res, value_warm, value_slackness, value_zero,
                 dual_value);
  }
  const double recovered = std::max({value_warm, value_slackness, value_zero});

  WeightBracket bracket;
  bracket.upper = std::clamp(1.0 - recovered, 0.0, 1.0);
  bracket.lower = std::clamp(1.0 - dual_value, 0.0, bracket.upper);
  return bracket;
}

double find_unsteerability_onset(int n_measurements, const PreparationConfig& prep,
                                 const ChannelParams& params, bool imperfections, double t_lo,
                                 double t_hi, double t_tol) {
  if (!(t_lo < t_hi)) throw std::invalid_argument("find_unsteerability_onset: need t_lo < t_hi");
  WeightTolerances tols;
  auto weight_at = [&](double t) {
    const Assemblage evolved = evolve_assemblage(initial_assemblage(n_measurements, prep),
                                                 DimensionlessTime(t), params, imperfections);
    return steerable_weight(evolved, tols).w_t;
  };
  if (weight_at(t_lo) <= 0.0) {
    throw std::invalid_argument("find_unsteerability_onset: already unsteerable at t_lo");
  }
  if (weight_at(t_hi) > 0.0) {
    throw std::invalid_argument("find_unsteerability_onset: still steerable at t_hi");
  }
  double lo = t_lo, hi = t_hi;
  while (hi - lo > t_tol) {
    const double mid = 0.5 * (lo + hi);
    (weight_at(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

nlohmann::json weight_result_to_json(const WeightResult& result) {
  nlohmann::json parts = nlohmann::json::array();
  for (const Hermitian2& sigma : result.unsteerable_part) {
    const Complex m10 = std::conj(sigma.m01());
    parts.push_back({{sigma.m00(), 0.0},
                     {sigma.m01().real(), sigma.m01().imag()},
                     {m10.real(), m10.imag()},
                     {sigma.m11(), 0.0}});
  }
  return nlohmann::json{{"w_t", result.w_t},
                        {"certificate_gap", result.certificate_gap},
                        {"clamped", result.clamped},
                        {"status", to_string(result.status)},
                        {"unsteerable_part", parts}};
}

}  // namespace tsteer
