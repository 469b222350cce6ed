// SPDX-License-Identifier: Apache-2.0
#include "tsteer/assemblage.hpp"

#include <cmath>
#include <stdexcept>

namespace tsteer {

namespace {

void require_n(int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("n_measurements must be 2 or 3");
}

}  // namespace

int member_slot(PauliAxis axis, Outcome a) {
  return (axis_index(axis) - 1) * 2 + (a == Outcome::plus ? 0 : 1);
}

const Hermitian2& Assemblage::member(PauliAxis axis, Outcome a) const {
  return members.at(static_cast<std::size_t>(member_slot(axis, a)));
}

Hermitian2& Assemblage::member(PauliAxis axis, Outcome a) {
  return members.at(static_cast<std::size_t>(member_slot(axis, a)));
}

DensityMatrix Assemblage::conditional_state(PauliAxis axis, Outcome a) const {
  const Hermitian2& sigma = member(axis, a);
  const double p = sigma.trace();
  if (!(p > 0.0)) throw std::invalid_argument("conditional_state: member has nonpositive trace");
  return DensityMatrix((1.0 / p) * sigma);
}

double Assemblage::probability(PauliAxis axis, Outcome a) const { return member(axis, a).trace(); }

Outcome DeterministicStrategy::outcome_for(PauliAxis axis) const {
  const int bit = (gamma_id >> (axis_index(axis) - 1)) & 1;
  return bit == 0 ? Outcome::plus : Outcome::minus;
}

std::vector<DeterministicStrategy> deterministic_strategies(int n_measurements) {
  require_n(n_measurements);
  std::vector<DeterministicStrategy> out;
  const int count = 1 << n_measurements;
  out.reserve(static_cast<std::size_t>(count));
  for (int id = 0; id < count; ++id) out.push_back(DeterministicStrategy{id, n_measurements});
  return out;
}

Assemblage initial_assemblage(int n_measurements, const PreparationConfig& cfg) {
  require_n(n_measurements);
  Assemblage out;
  out.n_measurements = n_measurements;
  out.members.resize(static_cast<std::size_t>(2 * n_measurements));
  for (int i = 1; i <= n_measurements; ++i) {
    for (Outcome a : kAllOutcomes) {
      const PauliAxis axis = axis_from_index(i);
      out.member(axis, a) = 0.5 * prepare_with_impurity(axis, a, cfg).op();
    }
  }
  return out;
}

Assemblage evolve_assemblage(const Assemblage& asm_in, DimensionlessTime t,
                             const ChannelParams& params, bool imperfections) {
  Assemblage out = asm_in;
  for (auto& sigma : out.members) sigma = evolve_operator(sigma, t, params, imperfections);
  return out;
}

ConsistencyReport check_consistency(const Assemblage& asm_in, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("check_consistency: tol must be >= 0");
  require_n(asm_in.n_measurements);
  if (asm_in.members.size() != static_cast<std::size_t>(2 * asm_in.n_measurements)) {
    throw std::invalid_argument("check_consistency: member count does not match n_measurements");
  }

  ConsistencyReport report;
  report.consistent = true;
  auto record = [&report, tol](double violation, const std::string& where) {
    if (violation > report.max_violation) {
      report.max_violation = violation;
      report.worst_location = where;
    }
    if (violation > tol) report.consistent = false;
  };

  std::vector<Hermitian2> reduced;
  for (int i = 1; i <= asm_in.n_measurements; ++i) {
    const PauliAxis axis = axis_from_index(i);
    Hermitian2 sum = Hermitian2::zero();
    double prob_total = 0.0;
    for (Outcome a : kAllOutcomes) {
      const Hermitian2& sigma = asm_in.member(axis, a);
      const double min_eval = eig2(sigma).second;
      record(std::max(0.0, -min_eval), "psd of member (" + std::to_string(i) + "," +
                                           std::to_string(outcome_sign(a)) + ")");
      sum += sigma;
      prob_total += sigma.trace();
    }
    record(std::abs(prob_total - 1.0), "normalization of setting " + std::to_string(i));
    reduced.push_back(sum);
  }
  for (std::size_t i = 1; i < reduced.size(); ++i) {
    record(frobenius_norm(reduced[i] - reduced[0]),
           "reduced state of setting " + std::to_string(i + 1) + " vs setting 1");
  }
  return report;
}

nlohmann::json assemblage_to_json(const Assemblage& asm_in) {
  nlohmann::json members = nlohmann::json::array();
  for (int i = 1; i <= asm_in.n_measurements; ++i) {
    for (Outcome a : kAllOutcomes) {
      const PauliAxis axis = axis_from_index(i);
      const Hermitian2& sigma = asm_in.member(axis, a);
      const Complex m10 = std::conj(sigma.m01());
      members.push_back({
          {"axis", i},
          {"outcome", outcome_sign(a)},
          // Row-major [m00, m01, m10, m11], each entry as [re, im].
          {"matrix",
           {{sigma.m00(), 0.0},
            {sigma.m01().real(), sigma.m01().imag()},
            {m10.real(), m10.imag()},
            {sigma.m11(), 0.0}}},
      });
    }
  }
  return nlohmann::json{{"n_measurements", asm_in.n_measurements}, {"members", members}};
}

Assemblage assemblage_from_json(const nlohmann::json& j) {
  Assemblage out;
  out.n_measurements = j.at("n_measurements").get<int>();
  require_n(out.n_measurements);
  out.members.resize(static_cast<std::size_t>(2 * out.n_measurements));
  std::vector<bool> seen(out.members.size(), false);
  for (const auto& entry : j.at("members")) {
    const PauliAxis axis = axis_from_index(entry.at("axis").get<int>());
    const Outcome a = outcome_from_sign(entry.at("outcome").get<int>());
    const auto& m = entry.at("matrix");
    if (m.size() != 4) throw std::invalid_argument("assemblage member matrix must have 4 entries");
    const Complex m01(m[1][0].get<double>(), m[1][1].get<double>());
    const Complex m10(m[2][0].get<double>(), m[2][1].get<double>());
    if (std::abs(m01 - std::conj(m10)) > 1e-9) {
      throw std::invalid_argument("assemblage member matrix is not Hermitian");
    }
    if (std::abs(m[0][1].get<double>()) > 1e-12 || std::abs(m[3][1].get<double>()) > 1e-12) {
      throw std::invalid_argument("assemblage member diagonal must be real");
    }
    const int slot = member_slot(axis, a);
    out.members[static_cast<std::size_t>(slot)] =
        Hermitian2(m[0][0].get<double>(), m[3][0].get<double>(), m01);
    seen[static_cast<std::size_t>(slot)] = true;
  }
  for (std::size_t slot = 0; slot < seen.size(); ++slot) {
    if (!seen[slot]) throw std::invalid_argument("assemblage JSON is missing a member");
  }
  return out;
}

}  // namespace tsteer
