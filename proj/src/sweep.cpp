// SPDX-License-Identifier: Apache-2.0
#include "tsteer/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tsteer {

namespace {

void compute_row(const SweepSpec& spec, double t_tilde, SweepRow& row) {
  row.t_tilde = t_tilde;
  const double s = spec.prep.shrink_s;
  row.s2_dotted_ref = 2.0 * s * s * std::exp(-t_tilde);
  row.s3_dotted_ref = s * s * (2.0 * std::exp(-2.0 * t_tilde) + 1.0);

  const DimensionlessTime t(t_tilde);
  const int n_max = spec.include_n3 ? 3 : 2;
  const Assemblage evolved = evolve_assemblage(initial_assemblage(n_max, spec.prep), t,
                                               spec.channel, spec.imperfections);
  for (int i = 1; i <= n_max; ++i) {
    for (Outcome a : kAllOutcomes) {
      const PauliAxis axis = axis_from_index(i);
      const BlochVector v = bloch_vector(evolved.conditional_state(axis, a));
      row.stokes[static_cast<std::size_t>(member_slot(axis, a))] =
          std::array<double, 3>{v.x, v.y, v.z};
    }
  }

  auto fill = [&](int n) {
    Assemblage asm_n = evolved;
    if (n < n_max) {
      asm_n.n_measurements = n;
      asm_n.members.resize(static_cast<std::size_t>(2 * n));
    }
    const SteeringReport report = ts_parameter(asm_n);
    const Protocol protocol = n == 2 ? Protocol::bb84 : Protocol::b98;
    const SecurityVerdict verdict = security_verdict(report, protocol);
    auto& s_out = n == 2 ? row.s2 : row.s3;
    auto& qber_out = n == 2 ? row.qber2 : row.qber3;
    auto& secure_out = n == 2 ? row.bb84_secure : row.b98_secure;
    s_out = report.s_param;
    qber_out = report.qber;
    secure_out = verdict.secure_individual;
    if (spec.compute_weight) {
      const WeightResult weight = steerable_weight(asm_n, spec.weight_tols);
      auto& w_out = n == 2 ? row.w2 : row.w3;
      auto& status_out = n == 2 ? row.w2_status : row.w3_status;
      w_out = weight.w_t;
      if (weight.status != SolveStatus::optimal) status_out = to_string(weight.status);
    }
  };
  if (spec.include_n2) fill(2);
  if (spec.include_n3) fill(3);
}

std::vector<SweepRow> sweep_impl(const SweepSpec& spec, bool parallel) {
  spec.validate();
  const int n_rows = static_cast<int>(spec.t_grid.size());
  std::vector<SweepRow> rows(static_cast<std::size_t>(n_rows));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int i = 0; i < n_rows; ++i) {
    compute_row(spec, spec.t_grid[static_cast<std::size_t>(i)],
                rows[static_cast<std::size_t>(i)]);
  }
#ifndef _OPENMP
  (void)parallel;
#endif
  return rows;
}

void append_number(std::string& line, double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  line += buf;
}

void append_cell(std::string& line, const std::optional<double>& value) {
  line += ',';
  if (value) append_number(line, *value);
}

void append_cell(std::string& line, const std::optional<bool>& value) {
  line += ',';
  if (value) line += *value ? '1' : '0';
}

}  // namespace

void SweepSpec::validate() const {
  if (t_grid.empty()) throw std::invalid_argument("SweepSpec: empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || !std::isfinite(t_grid[i])) {
      throw std::invalid_argument("SweepSpec: grid times must be finite and >= 0");
    }
    if (i > 0 && t_grid[i] < t_grid[i - 1]) {
      throw std::invalid_argument("SweepSpec: grid must be sorted ascending");
    }
  }
  if (!include_n2 && !include_n3) {
    throw std::invalid_argument("SweepSpec: at least one of N=2, N=3 must be enabled");
  }
  channel.validate();
  prep.validate();
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) { return sweep_impl(spec, true); }

std::vector<SweepRow> run_sweep_serial(const SweepSpec& spec) { return sweep_impl(spec, false); }

bool sweep_had_solver_failure(const std::vector<SweepRow>& rows) {
  for (const SweepRow& row : rows) {
    if (!row.w2_status.empty() || !row.w3_status.empty()) return true;
  }
  return false;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  std::string header = "t_tilde,S2,S3,w2,w3,qber2,qber3,bb84_secure,b98_secure";
  for (int i = 1; i <= 3; ++i) {
    for (const char* a : {"p", "m"}) {
      for (const char* comp : {"x", "y", "z"}) {
        header += ",stokes_" + std::to_string(i) + a + "_" + comp;
      }
    }
  }
  header += ",s2_dotted_ref,s3_dotted_ref,w2_status,w3_status";
  out << header << "\n";

  for (const SweepRow& row : rows) {
    std::string line;
    append_number(line, row.t_tilde);
    append_cell(line, row.s2);
    append_cell(line, row.s3);
    // A failed weight solve leaves the value cell empty; the status column
    // carries the reason.
    append_cell(line, row.w2_status.empty() ? row.w2 : std::optional<double>{});
    append_cell(line, row.w3_status.empty() ? row.w3 : std::optional<double>{});
    append_cell(line, row.qber2);
    append_cell(line, row.qber3);
    append_cell(line, row.bb84_secure);
    append_cell(line, row.b98_secure);
    for (const auto& stokes : row.stokes) {
      if (stokes) {
        for (double component : *stokes) {
          line += ',';
          append_number(line, component);
        }
      } else {
        line += ",,,";
      }
    }
    line += ',';
    append_number(line, row.s2_dotted_ref);
    line += ',';
    append_number(line, row.s3_dotted_ref);
    line += ',' + row.w2_status;
    line += ',' + row.w3_status;
    out << line << "\n";
  }
}

std::string sweep_csv_string(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_sweep_csv(out, rows);
  return out.str();
}

}  // namespace tsteer
