// SPDX-License-Identifier: Apache-2.0
#include "tsteer/metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tsteer {

double SteeringReport::fidelity(PauliAxis axis, Outcome a) const {
  return fidelities.at(static_cast<std::size_t>(member_slot(axis, a)));
}

int protocol_settings(Protocol p) { return p == Protocol::bb84 ? 2 : 3; }

const char* protocol_name(Protocol p) { return p == Protocol::bb84 ? "BB84" : "B98"; }

double qber_threshold(Protocol p) {
  if (p == Protocol::bb84) return (1.0 - std::numbers::sqrt2 / 2.0) / 2.0;
  return 1.0 / 6.0;
}

double s_threshold(Protocol p) {
  // Closed forms of N (1 - 2 r_N)^2: 2 * (1/sqrt(2))^2 and 3 * (2/3)^2.
  return p == Protocol::bb84 ? 1.0 : 4.0 / 3.0;
}

SteeringReport ts_parameter(const Assemblage& asm_in) {
  const ConsistencyReport consistency = check_consistency(asm_in);
  if (!consistency.consistent) {
    throw std::invalid_argument("ts_parameter: inconsistent assemblage (worst violation " +
                                std::to_string(consistency.max_violation) + " at " +
                                consistency.worst_location + ")");
  }

  SteeringReport report;
  report.n = asm_in.n_measurements;
  report.fidelities.resize(static_cast<std::size_t>(2 * report.n));
  double fidelity_sum = 0.0;
  for (int i = 1; i <= report.n; ++i) {
    const PauliAxis axis = axis_from_index(i);
    const Hermitian2 sigma_i = pauli_matrix(axis);
    double term = 0.0;
    for (Outcome a : kAllOutcomes) {
      const double p = asm_in.probability(axis, a);
      const DensityMatrix rho = asm_in.conditional_state(axis, a);
      const double expectation = inner(rho.op(), sigma_i);
      term += p * expectation * expectation;
      const double fid = fidelity_pure(pauli_eigenstate(axis, a), rho);
      report.fidelities[static_cast<std::size_t>(member_slot(axis, a))] = fid;
      fidelity_sum += fid;
    }
    report.per_axis_terms.push_back(term);
    report.s_param += term;
  }
  report.qber = 1.0 - fidelity_sum / static_cast<double>(2 * report.n);
  return report;
}

double ts_parameter_with_observables(const Assemblage& asm_in,
                                     const std::array<Hermitian2, 3>& observables) {
  double s = 0.0;
  for (int i = 1; i <= asm_in.n_measurements; ++i) {
    const PauliAxis axis = axis_from_index(i);
    for (Outcome a : kAllOutcomes) {
      const double p = asm_in.probability(axis, a);
      const double expectation =
          inner(asm_in.conditional_state(axis, a).op(), observables[static_cast<std::size_t>(i - 1)]);
      s += p * expectation * expectation;
    }
  }
  return s;
}

double ts_parameter_fidelity_form(const std::vector<double>& fidelities) {
  if (fidelities.size() != 4 && fidelities.size() != 6) {
    throw std::invalid_argument("ts_parameter_fidelity_form: need 4 or 6 fidelities");
  }
  double s = 0.0;
  for (double f : fidelities) {
    const double bias = 2.0 * f - 1.0;
    s += 0.5 * bias * bias;
  }
  return s;
}

SecurityVerdict security_verdict(const SteeringReport& report, Protocol protocol) {
  if (report.n != protocol_settings(protocol)) {
    throw std::invalid_argument("security_verdict: report has N=" + std::to_string(report.n) +
                                " but protocol expects N=" +
                                std::to_string(protocol_settings(protocol)));
  }
  SecurityVerdict verdict;
  verdict.protocol = protocol;
  verdict.qber_threshold = qber_threshold(protocol);
  verdict.s_threshold = s_threshold(protocol);
  verdict.ts_violated = report.s_param > 1.0;
  verdict.secure_individual = report.qber < verdict.qber_threshold;
  return verdict;
}

nlohmann::json steering_report_to_json(const SteeringReport& report) {
  nlohmann::json fidelities = nlohmann::json::array();
  for (int i = 1; i <= report.n; ++i) {
    for (Outcome a : kAllOutcomes) {
      fidelities.push_back({{"axis", i},
                            {"outcome", outcome_sign(a)},
                            {"fidelity", report.fidelity(axis_from_index(i), a)}});
    }
  }
  return nlohmann::json{{"n", report.n},
                        {"s_param", report.s_param},
                        {"per_axis_terms", report.per_axis_terms},
                        {"qber", report.qber},
                        {"fidelities", fidelities}};
}

nlohmann::json security_verdict_to_json(const SecurityVerdict& verdict) {
  return nlohmann::json{{"protocol", protocol_name(verdict.protocol)},
                        {"qber_threshold", verdict.qber_threshold},
                        {"s_threshold", verdict.s_threshold},
                        {"ts_violated", verdict.ts_violated},
                        {"secure_individual", verdict.secure_individual}};
}

}  // namespace tsteer
