// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include <json.hpp>

#include "tsteer/assemblage.hpp"

namespace tsteer {

/// Temporal-steering parameter S_N together with the derived key-rate
/// quantities. Fidelities are stored in canonical member order.
struct SteeringReport {
  int n = 0;
  double s_param = 0.0;
  std::vector<double> per_axis_terms;  // E[<B_i>^2], i = 1..n
  double qber = 0.0;                   // 1 - mean fidelity
  std::vector<double> fidelities;      // F_{i,a}, canonical member order

  double fidelity(PauliAxis axis, Outcome a) const;
};

enum class Protocol { bb84, b98 };

int protocol_settings(Protocol p);          // 2 for BB84, 3 for B98
const char* protocol_name(Protocol p);

/// Critical average QBER for security against individual attacks:
/// r_2 = (1 - 1/sqrt(2))/2,  r_3 = 1/6.
double qber_threshold(Protocol p);

/// N (1 - 2 r_N)^2, i.e. 1 for BB84 and 4/3 for the six-state protocol.
double s_threshold(Protocol p);

struct SecurityVerdict {
  Protocol protocol = Protocol::bb84;
  double qber_threshold = 0.0;
  double s_threshold = 0.0;
  bool ts_violated = false;       // S_N > 1
  bool secure_individual = false; // QBER < r_N
};

/// S_N = sum_i sum_a P(a|A_i) <sigma_i>^2 evaluated on the normalized
/// conditional states, along with fidelities and QBER. Rejects assemblages
/// that fail the consistency check (the report is included in the message).
SteeringReport ts_parameter(const Assemblage& asm_in);

/// S_N for arbitrary (possibly rotated) measurement operators B_i at Bob's
/// side; used for basis-covariance checks.
double ts_parameter_with_observables(const Assemblage& asm_in,
                                     const std::array<Hermitian2, 3>& observables);

/// S_N = (1/2) sum_{i,a} (2 F_{i,a} - 1)^2 from a complete fidelity table
/// in canonical member order (size 4 or 6).
double ts_parameter_fidelity_form(const std::vector<double>& fidelities);

SecurityVerdict security_verdict(const SteeringReport& report, Protocol protocol);

nlohmann::json steering_report_to_json(const SteeringReport& report);
nlohmann::json security_verdict_to_json(const SecurityVerdict& verdict);

}  // namespace tsteer
