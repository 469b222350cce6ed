// SPDX-License-Identifier: Apache-2.0
#include "conic_form.hpp"

#include <cmath>
#include <stdexcept>

namespace tsteer::detail {

HermEig herm_eig(const Matrix2cd& h) {
  HermEig out;
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const std::complex<double> bb = h(0, 1);
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), std::abs(bb));
  out.hi = mean + radius;
  out.lo = mean - radius;
  const double r1 = std::hypot(std::abs(bb), out.hi - a);
  const double r2 = std::hypot(a - out.lo, std::abs(bb));
  if (r1 < 1e-300 && r2 < 1e-300) {
    out.vhi << 1.0, 0.0;
    out.vlo << 0.0, 1.0;
    return out;
  }
  if (r1 >= r2) {
    out.vhi << bb / r1, std::complex<double>(out.hi - a, 0.0) / r1;
  } else {
    out.vhi << std::complex<double>(a - out.lo, 0.0) / r2, std::conj(bb) / r2;
  }
  out.vlo << -std::conj(out.vhi(1)), std::conj(out.vhi(0));
  return out;
}

Matrix2cd psd_project(const Matrix2cd& h) {
  const HermEig e = herm_eig(h);
  Matrix2cd out = Matrix2cd::Zero();
  if (e.hi > 0.0) out += e.hi * e.vhi * e.vhi.adjoint();
  if (e.lo > 0.0) out += e.lo * e.vlo * e.vlo.adjoint();
  return 0.5 * (out + out.adjoint());
}

Matrix2cd chol2(const Matrix2cd& h, double reg) {
  double a = h(0, 0).real();
  double d = h(1, 1).real();
  std::complex<double> c = h(1, 0);
  if (a <= 0.0 || d - std::norm(c) / std::max(a, reg) <= 0.0) {
    a += reg;
    d += reg;
  }
  if (a <= 0.0) throw std::runtime_error("chol2: matrix is not positive definite");
  const double l00 = std::sqrt(a);
  const std::complex<double> l10 = c / l00;
  const double rem = d - std::norm(l10);
  if (rem <= 0.0) throw std::runtime_error("chol2: matrix is not positive definite");
  Matrix2cd l = Matrix2cd::Zero();
  l(0, 0) = l00;
  l(1, 0) = l10;
  l(1, 1) = std::sqrt(rem);
  return l;
}

VectorXd ConicForm::apply_a(const std::vector<Matrix2cd>& z) const {
  VectorXd out(4 * n_cons);
  for (int j = 0; j < n_cons; ++j) {
    Vector4d row = vec_herm(z[static_cast<std::size_t>(n_user + j)]);
    for (const auto& [k, coeff] : cons_terms[static_cast<std::size_t>(j)]) {
      row += coeff * vec_herm(z[static_cast<std::size_t>(k)]);
    }
    out.segment<4>(4 * j) = row;
  }
  return out;
}

std::vector<Matrix2cd> ConicForm::apply_at(const VectorXd& y) const {
  std::vector<Matrix2cd> out(static_cast<std::size_t>(n_blocks), Matrix2cd::Zero());
  for (int k = 0; k < n_user; ++k) {
    Vector4d acc = Vector4d::Zero();
    for (const auto& [j, coeff] : block_terms[static_cast<std::size_t>(k)]) {
      acc += coeff * y.segment<4>(4 * j);
    }
    out[static_cast<std::size_t>(k)] = mat_herm(acc);
  }
  for (int j = 0; j < n_cons; ++j) {
    out[static_cast<std::size_t>(n_user + j)] = mat_herm(y.segment<4>(4 * j));
  }
  return out;
}

ConicForm build_conic_form(const SdpProblem& problem) {
  problem.validate();
  ConicForm form;
  form.n_user = problem.n_blocks;
  form.n_cons = static_cast<int>(problem.constraints.size());
  form.n_blocks = form.n_user + form.n_cons;
  form.cost.assign(static_cast<std::size_t>(form.n_blocks), Matrix2cd::Zero());
  for (int k = 0; k < form.n_user; ++k) {
    // Internal form minimizes, the public problem maximizes.
    form.cost[static_cast<std::size_t>(k)] = -problem.objective[static_cast<std::size_t>(k)].matrix();
  }
  form.b.resize(4 * form.n_cons);
  form.cons_terms.resize(static_cast<std::size_t>(form.n_cons));
  form.block_terms.resize(static_cast<std::size_t>(form.n_user));
  for (int j = 0; j < form.n_cons; ++j) {
    const LmiConstraint& cons = problem.constraints[static_cast<std::size_t>(j)];
    form.b.segment<4>(4 * j) = vec_herm(cons.constant.matrix());
    for (const BlockTerm& term : cons.terms) {
      form.cons_terms[static_cast<std::size_t>(j)].emplace_back(term.block, term.coeff);
      form.block_terms[static_cast<std::size_t>(term.block)].emplace_back(j, term.coeff);
    }
  }
  return form;
}

}  // namespace tsteer::detail
