// SPDX-License-Identifier: Apache-2.0
//
// Primal-dual path-following solver for direct sums of 2x2 Hermitian PSD
// cones. The search direction uses Nesterov-Todd scaling computed per block
// from Cholesky factors and a closed-form 2x2 SVD; the centering parameter
// follows Mehrotra's predictor heuristic. The Schur complement never exceeds
// 24x24 for the programs built here, so everything is dense.
#include "tsteer/sdp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "conic_form.hpp"

namespace tsteer {

namespace {

using detail::ConicForm;
using detail::HermEig;
using detail::herm_eig;
using detail::herm_inner;
using detail::mat_herm;
using detail::vec_herm;
using Eigen::Matrix2cd;
using Eigen::Matrix4d;
using Eigen::MatrixXd;
using Eigen::Vector4d;
using Eigen::VectorXd;

constexpr double kFactorReg = 1e-12;  // regularization added to factorizations only
constexpr double kStepFraction = 0.98;

const std::array<Matrix2cd, 4>& herm_basis() {
  static const std::array<Matrix2cd, 4> basis = [] {
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    std::array<Matrix2cd, 4> b;
    b[0] << 1, 0, 0, 0;
    b[1] << 0, 0, 0, 1;
    b[2] << 0, kInvSqrt2, kInvSqrt2, 0;
    b[3] << 0, std::complex<double>(0, -kInvSqrt2), std::complex<double>(0, kInvSqrt2), 0;
    return b;
  }();
  return basis;
}

Matrix2cd hermitize(const Matrix2cd& m) { return 0.5 * (m + m.adjoint()); }

Matrix2cd herm_inverse(const Matrix2cd& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const std::complex<double> b = h(0, 1);
  const double det = a * d - std::norm(b);
  if (det == 0.0) throw std::runtime_error("herm_inverse: singular matrix");
  Matrix2cd inv;
  inv << std::complex<double>(d, 0.0), -b, -std::conj(b), std::complex<double>(a, 0.0);
  return inv / det;
}

/// Nesterov-Todd scaling point of the pair (X, S): W = R R^dag with
/// R^-1 X R^-dag = R^dag S R = diag(singular values of chol(S)^dag chol(X)).
struct NtScaling {
  Matrix2cd w;
};

NtScaling nt_scaling(const Matrix2cd& x, const Matrix2cd& s) {
  const Matrix2cd lx = detail::chol2(x, kFactorReg);
  const Matrix2cd ls = detail::chol2(s, kFactorReg);
  const Matrix2cd g = ls.adjoint() * lx;
  // Closed-form SVD of g through the eigenbasis of g^dag g.
  const HermEig gram = herm_eig(hermitize(g.adjoint() * g));
  const double s_hi = std::sqrt(std::max(gram.hi, kFactorReg * kFactorReg));
  const double s_lo = std::sqrt(std::max(gram.lo, kFactorReg * kFactorReg));
  Matrix2cd v;
  v.col(0) = gram.vhi;
  v.col(1) = gram.vlo;
  Matrix2cd sigma_inv_sqrt = Matrix2cd::Zero();
  sigma_inv_sqrt(0, 0) = 1.0 / std::sqrt(s_hi);
  sigma_inv_sqrt(1, 1) = 1.0 / std::sqrt(s_lo);
  const Matrix2cd r = lx * v * sigma_inv_sqrt;
  NtScaling out;
  out.w = hermitize(r * r.adjoint());
  return out;
}

/// Largest alpha in [0, cap] keeping x + alpha*dx positive semidefinite.
double max_step(const Matrix2cd& x, const Matrix2cd& dx, double cap) {
  const Matrix2cd l = detail::chol2(x, kFactorReg);
  // H = L^-1 dx L^-dag via two lower-triangular solves.
  const Matrix2cd y = l.triangularView<Eigen::Lower>().solve(dx);
  const Matrix2cd h = hermitize(l.triangularView<Eigen::Lower>().solve(y.adjoint()).adjoint());
  const double lambda_min = herm_eig(h).lo;
  if (lambda_min >= 0.0) return cap;
  return std::min(cap, -1.0 / lambda_min);
}

struct Iterate {
  std::vector<Matrix2cd> x;
  std::vector<Matrix2cd> s;
  VectorXd y;
};

}  // namespace

void SdpProblem::validate() const {
  if (n_blocks <= 0) throw std::invalid_argument("SdpProblem: need at least one block");
  if (objective.size() != static_cast<std::size_t>(n_blocks)) {
    throw std::invalid_argument("SdpProblem: objective size must equal n_blocks");
  }
  for (const LmiConstraint& cons : constraints) {
    for (const BlockTerm& term : cons.terms) {
      if (term.block < 0 || term.block >= n_blocks) {
        throw std::invalid_argument("SdpProblem: constraint references unknown block");
      }
      if (!std::isfinite(term.coeff)) {
        throw std::invalid_argument("SdpProblem: non-finite constraint coefficient");
      }
    }
  }
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::max_iterations:
      return "max_iterations";
  }
  return "unknown";
}

SdpSolution solve_sdp(const SdpProblem& problem, const SolverOptions& options) {
  const ConicForm form = detail::build_conic_form(problem);
  const int nb = form.n_blocks;
  const int m = 4 * form.n_cons;
  const double trace_dim = 2.0 * nb;

  // Starting point: scaled multiples of the identity on both sides.
  double x_scale = 1.0;
  for (int j = 0; j < form.n_cons; ++j) {
    x_scale = std::max(x_scale, form.b.segment<4>(4 * j).norm());
  }
  double s_scale = 1.0;
  for (const Matrix2cd& c : form.cost) s_scale = std::max(s_scale, c.norm());

  Iterate it;
  it.x.assign(static_cast<std::size_t>(nb), x_scale * Matrix2cd::Identity());
  it.s.assign(static_cast<std::size_t>(nb), s_scale * Matrix2cd::Identity());
  it.y = VectorXd::Zero(m);

  SdpSolution solution;
  auto finalize = [&](SolveStatus status, double pobj_int, double dobj_int, double gap,
                      double residual, int iters) {
    solution.status = status;
    solution.primal_value = -pobj_int;
    solution.dual_value = -dobj_int;
    solution.gap = gap;
    solution.max_residual = residual;
    solution.iterations = iters;
    solution.blocks.clear();
    for (int k = 0; k < form.n_user; ++k) {
      solution.blocks.push_back(Hermitian2::hermitian_part(it.x[static_cast<std::size_t>(k)]));
    }
    solution.constraint_duals.clear();
    for (int j = 0; j < form.n_cons; ++j) {
      solution.constraint_duals.push_back(
          Hermitian2::hermitian_part(-mat_herm(it.y.segment<4>(4 * j))));
    }
    return solution;
  };

  const auto& basis = herm_basis();
  double pobj = 0.0, dobj = 0.0, gap = 1.0, residual = 1.0;

  try {
    for (int iter = 0; iter < options.max_iter; ++iter) {
      // Residuals and objectives.
      const VectorXd rp = form.b - form.apply_a(it.x);
      std::vector<Matrix2cd> aty = form.apply_at(it.y);
      std::vector<Matrix2cd> rd(static_cast<std::size_t>(nb));
      double dres = 0.0;
      double mu = 0.0;
      pobj = 0.0;
      for (int blk = 0; blk < nb; ++blk) {
        const auto bi = static_cast<std::size_t>(blk);
        rd[bi] = form.cost[bi] - it.s[bi] - aty[bi];
        dres = std::max(dres, rd[bi].cwiseAbs().maxCoeff());
        mu += herm_inner(it.x[bi], it.s[bi]);
        pobj += herm_inner(form.cost[bi], it.x[bi]);
      }
      mu /= trace_dim;
      dobj = form.b.dot(it.y);
      const double pres = rp.size() > 0 ? rp.cwiseAbs().maxCoeff() : 0.0;
      residual = std::max(pres, dres);
      gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

      if (gap <= options.gap_tol && residual <= options.feas_tol) {
        return finalize(SolveStatus::optimal, pobj, dobj, gap, residual, iter);
      }

      // Primal infeasibility: the dual objective grows without bound along a
      // Farkas ray y with A*(y) <= 0. Certify against the scaled ray.
      if (dobj > 1e8 * (1.0 + x_scale)) {
        const VectorXd ray = it.y / dobj;
        std::vector<Matrix2cd> at_ray = form.apply_at(ray);
        double worst = 0.0;
        for (const Matrix2cd& blk_ray : at_ray) {
          worst = std::max(worst, herm_eig(hermitize(blk_ray)).hi);
        }
        if (worst <= 1e-6) {
          return finalize(SolveStatus::infeasible, pobj, dobj, gap, residual, iter);
        }
      }

      // Block scalings and the Schur complement M = A W A^T W-weighted.
      std::vector<Matrix2cd> w(static_cast<std::size_t>(nb));
      std::vector<Matrix4d> t(static_cast<std::size_t>(nb));
      for (int blk = 0; blk < nb; ++blk) {
        const auto bi = static_cast<std::size_t>(blk);
        w[bi] = nt_scaling(it.x[bi], it.s[bi]).w;
        for (int r = 0; r < 4; ++r) {
          const Matrix2cd wbw = w[bi] * basis[static_cast<std::size_t>(r)] * w[bi];
          for (int c = 0; c < 4; ++c) {
            t[bi](r, c) = herm_inner(basis[static_cast<std::size_t>(c)], wbw);
          }
        }
        t[bi] = 0.5 * (t[bi] + t[bi].transpose()).eval();
      }
      MatrixXd schur = MatrixXd::Zero(m, m);
      for (int j = 0; j < form.n_cons; ++j) {
        schur.block<4, 4>(4 * j, 4 * j) += t[static_cast<std::size_t>(form.n_user + j)];
      }
      for (int k = 0; k < form.n_user; ++k) {
        const auto& terms = form.block_terms[static_cast<std::size_t>(k)];
        for (const auto& [j1, c1] : terms) {
          for (const auto& [j2, c2] : terms) {
            schur.block<4, 4>(4 * j1, 4 * j2) += c1 * c2 * t[static_cast<std::size_t>(k)];
          }
        }
      }
      schur.diagonal().array() += kFactorReg;
      const Eigen::LDLT<MatrixXd> schur_fact(schur);

      std::vector<Matrix2cd> w_rd_w(static_cast<std::size_t>(nb));
      for (int blk = 0; blk < nb; ++blk) {
        const auto bi = static_cast<std::size_t>(blk);
        w_rd_w[bi] = hermitize(w[bi] * rd[bi] * w[bi]);
      }
      const VectorXd a_wrdw = form.apply_a(w_rd_w);

      auto solve_direction = [&](const std::vector<Matrix2cd>& rc, VectorXd& dy,
                                 std::vector<Matrix2cd>& dx, std::vector<Matrix2cd>& ds) {
        const VectorXd rhs = rp - form.apply_a(rc) + a_wrdw;
        dy = schur_fact.solve(rhs);
        std::vector<Matrix2cd> at_dy = form.apply_at(dy);
        dx.resize(static_cast<std::size_t>(nb));
        ds.resize(static_cast<std::size_t>(nb));
        for (int blk = 0; blk < nb; ++blk) {
          const auto bi = static_cast<std::size_t>(blk);
          ds[bi] = hermitize(rd[bi] - at_dy[bi]);
          dx[bi] = hermitize(rc[bi] - w[bi] * ds[bi] * w[bi]);
        }
      };

      // Predictor (affine scaling) step.
      std::vector<Matrix2cd> rc_aff(static_cast<std::size_t>(nb));
      for (int blk = 0; blk < nb; ++blk) {
        rc_aff[static_cast<std::size_t>(blk)] = -it.x[static_cast<std::size_t>(blk)];
      }
      VectorXd dy_aff;
      std::vector<Matrix2cd> dx_aff, ds_aff;
      solve_direction(rc_aff, dy_aff, dx_aff, ds_aff);

      double ap = 1.0, ad = 1.0;
      for (int blk = 0; blk < nb; ++blk) {
        const auto bi = static_cast<std::size_t>(blk);
        ap = std::min(ap, max_step(it.x[bi], dx_aff[bi], 1.0));
        ad = std::min(ad, max_step(it.s[bi], ds_aff[bi], 1.0));
      }
      double mu_aff = 0.0;
      for (int blk = 0; blk < nb; ++blk) {
        const auto bi = static_cast<std::size_t>(blk);
        mu_aff += herm_inner(hermitize(it.x[bi] + ap * dx_aff[bi]),
                             hermitize(it.s[bi] + ad * ds_aff[bi]));
      }
      mu_aff = std::max(mu_aff / trace_dim, 0.0);
      const double ratio = mu > 0.0 ? mu_aff / mu : 0.0;
      const double sigma = std::min(1.0, std::max(ratio * ratio * ratio, 1e-8));

      // Centering + correction step toward X S = sigma*mu*I.
      std::vector<Matrix2cd> rc(static_cast<std::size_t>(nb));
      for (int blk = 0; blk < nb; ++blk) {
        const auto bi = static_cast<std::size_t>(blk);
        rc[bi] = hermitize(sigma * mu * herm_inverse(it.s[bi]) - it.x[bi]);
      }
      VectorXd dy;
      std::vector<Matrix2cd> dx, ds;
      solve_direction(rc, dy, dx, ds);

      ap = 1.0;
      ad = 1.0;
      for (int blk = 0; blk < nb; ++blk) {
        const auto bi = static_cast<std::size_t>(blk);
        ap = std::min(ap, kStepFraction * max_step(it.x[bi], dx[bi], 1.0 / kStepFraction));
        ad = std::min(ad, kStepFraction * max_step(it.s[bi], ds[bi], 1.0 / kStepFraction));
      }

      for (int blk = 0; blk < nb; ++blk) {
        const auto bi = static_cast<std::size_t>(blk);
        it.x[bi] = hermitize(it.x[bi] + ap * dx[bi]);
        it.s[bi] = hermitize(it.s[bi] + ad * ds[bi]);
      }
      it.y += ad * dy;
    }
  } catch (const std::runtime_error&) {
    // Numerical breakdown in a factorization: report the last iterate.
    return finalize(SolveStatus::max_iterations, pobj, dobj, gap, residual, options.max_iter);
  }

  return finalize(SolveStatus::max_iterations, pobj, dobj, gap, residual, options.max_iter);
}

}  // namespace tsteer
