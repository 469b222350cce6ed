// SPDX-License-Identifier: Apache-2.0
#include "tsteer/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tsteer/rng.hpp"

namespace tsteer {

namespace {

constexpr char kCsvHeader[] = "prep_axis,prep_outcome,analysis_axis,analysis_outcome,counts,shots";

int setting_index(int prep_axis, Outcome prep_outcome, int analysis_axis) {
  return ((prep_axis - 1) * 2 + (prep_outcome == Outcome::plus ? 0 : 1)) * 3 +
         (analysis_axis - 1);
}

struct SettingTally {
  long long plus = 0;
};

/// Branch probabilities for one (preparation, analysis) setting. The shot
/// loop only consumes these three numbers.
struct SettingModel {
  double erase_prob = 0.0;   // (1 - tau) * P(V) of the dephased input
  double p_plus_erased = 0.0;
  double p_plus_transmitted = 0.0;
};

SettingModel build_setting_model(const RunConfig& cfg, PauliAxis prep_axis, Outcome prep_outcome,
                                 PauliAxis analysis_axis) {
  const DimensionlessTime t(cfg.t_tilde);
  const double tau = transmittance_from_time(t);

  Hermitian2 rho = prepare_with_impurity(prep_axis, prep_outcome, cfg.prep).op();
  if (cfg.imperfections) {
    rho = Hermitian2(rho.m00(), rho.m11(),
                     rho.m01() * std::exp(-cfg.channel.extra_dephasing_rate * cfg.t_tilde));
  }

  SettingModel model;
  model.erase_prob = (1.0 - tau) * rho.m11();

  // Transmitted branch: V amplitude filtered by sqrt(tau), renormalized.
  const double norm = 1.0 - model.erase_prob;
  Hermitian2 transmitted(rho.m00() / norm, tau * rho.m11() / norm,
                         std::sqrt(tau) * rho.m01() / norm);
  Hermitian2 erased(1.0, 0.0, Complex(0.0, 0.0));  // |H><H|

  auto rotate = [&](const Hermitian2& h) {
    Hermitian2 out = h;
    if (cfg.channel.rotation_enabled) {
      const Eigen::Matrix2cd r = rotation_matrix(4.0 * cfg.t_tilde).cast<Complex>();
      out = Hermitian2::hermitian_part(r * out.matrix() * r.transpose());
    }
    if (cfg.imperfections) {
      const double phi = cfg.channel.analyzer_rotation_deg * std::numbers::pi / 180.0;
      out = Hermitian2(out.m00(), out.m11(), out.m01() * std::exp(Complex(0.0, -phi)));
    }
    return out;
  };
  transmitted = rotate(transmitted);
  erased = rotate(erased);

  const Eigen::Vector2cd analyzer = pauli_eigenstate(analysis_axis, Outcome::plus);
  auto born_plus = [&](const Hermitian2& h) {
    const double p = (analyzer.adjoint() * h.matrix() * analyzer)(0, 0).real();
    return std::clamp(p, 0.0, 1.0);
  };
  model.p_plus_transmitted = born_plus(transmitted);
  model.p_plus_erased = born_plus(erased);
  return model;
}

long long run_setting(const RunConfig& cfg, const SettingModel& model, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  long long plus = 0;
  for (long long shot = 0; shot < cfg.shots_per_setting; ++shot) {
    const bool erased = rng.uniform01() < model.erase_prob;
    const double p_plus = erased ? model.p_plus_erased : model.p_plus_transmitted;
    if (rng.uniform01() < p_plus) ++plus;
  }
  return plus;
}

std::vector<CountRecord> simulate_impl(const RunConfig& cfg, bool parallel) {
  cfg.validate();
  const int n_settings = cfg.n_measurements * 2 * 3;
  std::vector<long long> plus_counts(static_cast<std::size_t>(n_settings), 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int idx = 0; idx < n_settings; ++idx) {
    const int prep_axis = idx / 6 + 1;
    const Outcome prep_outcome = (idx / 3) % 2 == 0 ? Outcome::plus : Outcome::minus;
    const int analysis_axis = idx % 3 + 1;
    const SettingModel model = build_setting_model(cfg, axis_from_index(prep_axis), prep_outcome,
                                                   axis_from_index(analysis_axis));
    plus_counts[static_cast<std::size_t>(idx)] = run_setting(
        cfg, model, derive_stream_seed(cfg.rng_seed, static_cast<std::uint64_t>(idx)));
  }
#ifndef _OPENMP
  (void)parallel;
#endif

  std::vector<CountRecord> records;
  records.reserve(static_cast<std::size_t>(2 * n_settings));
  for (int idx = 0; idx < n_settings; ++idx) {
    const int prep_axis = idx / 6 + 1;
    const int prep_outcome = (idx / 3) % 2 == 0 ? 1 : -1;
    const int analysis_axis = idx % 3 + 1;
    const long long plus = plus_counts[static_cast<std::size_t>(idx)];
    records.push_back({prep_axis, prep_outcome, analysis_axis, 1, plus, cfg.shots_per_setting});
    records.push_back({prep_axis, prep_outcome, analysis_axis, -1, cfg.shots_per_setting - plus,
                       cfg.shots_per_setting});
  }
  return records;
}

}  // namespace

void RunConfig::validate() const {
  if (n_measurements != 2 && n_measurements != 3) {
    throw std::invalid_argument("RunConfig: n_measurements must be 2 or 3");
  }
  if (shots_per_setting <= 0) throw std::invalid_argument("RunConfig: shots must be positive");
  if (!(t_tilde >= 0.0) || !std::isfinite(t_tilde)) {
    throw std::invalid_argument("RunConfig: t_tilde must be finite and >= 0");
  }
  channel.validate();
  prep.validate();
}

std::vector<CountRecord> simulate_counts(const RunConfig& cfg) { return simulate_impl(cfg, true); }

std::vector<CountRecord> simulate_counts_serial(const RunConfig& cfg) {
  return simulate_impl(cfg, false);
}

ReconstructionResult reconstruct_assemblage(const std::vector<CountRecord>& records) {
  // cell key: (prep_axis, prep_outcome, analysis_axis, analysis_outcome)
  std::map<std::array<int, 4>, CountRecord> cells;
  int max_prep_axis = 0;
  for (const CountRecord& rec : records) {
    if (rec.prep_axis < 1 || rec.prep_axis > 3 || rec.analysis_axis < 1 || rec.analysis_axis > 3 ||
        std::abs(rec.prep_outcome) != 1 || std::abs(rec.analysis_outcome) != 1) {
      throw std::invalid_argument("reconstruct_assemblage: record with invalid indices");
    }
    if (rec.counts < 0 || rec.shots <= 0) {
      throw std::invalid_argument("reconstruct_assemblage: negative counts or nonpositive shots");
    }
    const std::array<int, 4> key{rec.prep_axis, rec.prep_outcome, rec.analysis_axis,
                                 rec.analysis_outcome};
    if (!cells.emplace(key, rec).second) {
      throw std::invalid_argument("reconstruct_assemblage: duplicate cell (prep " +
                                  std::to_string(rec.prep_axis) + "," +
                                  std::to_string(rec.prep_outcome) + ", analysis " +
                                  std::to_string(rec.analysis_axis) + "," +
                                  std::to_string(rec.analysis_outcome) + ")");
    }
    max_prep_axis = std::max(max_prep_axis, rec.prep_axis);
  }
  if (max_prep_axis != 2 && max_prep_axis != 3) {
    throw std::invalid_argument("reconstruct_assemblage: prepared axes must cover 1..2 or 1..3");
  }

  std::string missing;
  auto cell = [&](int pa, int po, int aa, int ao) -> const CountRecord* {
    const auto it = cells.find({pa, po, aa, ao});
    if (it == cells.end()) {
      missing += " (prep " + std::to_string(pa) + "," + std::to_string(po) + ", analysis " +
                 std::to_string(aa) + "," + std::to_string(ao) + ")";
      return nullptr;
    }
    return &it->second;
  };

  ReconstructionResult result;
  result.assemblage.n_measurements = max_prep_axis;
  result.assemblage.members.resize(static_cast<std::size_t>(2 * max_prep_axis));
  for (int pa = 1; pa <= max_prep_axis; ++pa) {
    for (Outcome po : kAllOutcomes) {
      MemberEstimate est;
      est.prep_axis = pa;
      est.prep_outcome = outcome_sign(po);
      bool complete = true;
      for (int aa = 1; aa <= 3; ++aa) {
        const CountRecord* plus = cell(pa, outcome_sign(po), aa, 1);
        const CountRecord* minus = cell(pa, outcome_sign(po), aa, -1);
        if (plus == nullptr || minus == nullptr) {
          complete = false;
          continue;
        }
        if (plus->shots != minus->shots || plus->counts + minus->counts != plus->shots) {
          throw std::invalid_argument(
              "reconstruct_assemblage: counts do not sum to shots in cell (prep " +
              std::to_string(pa) + "," + std::to_string(outcome_sign(po)) + ", analysis " +
              std::to_string(aa) + ")");
        }
        const double shots = static_cast<double>(plus->shots);
        const double p_hat = static_cast<double>(plus->counts) / shots;
        est.stokes[static_cast<std::size_t>(aa - 1)] = 2.0 * p_hat - 1.0;
        est.stokes_se[static_cast<std::size_t>(aa - 1)] =
            2.0 * std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) / shots);
        est.shots_per_basis = plus->shots;
      }
      if (!complete) continue;

      const Hermitian2 raw(0.5 * (1.0 + est.stokes[2]), 0.5 * (1.0 - est.stokes[2]),
                           0.5 * Complex(est.stokes[0], -est.stokes[1]));
      DensityMatrix rho = [&] {
        if (eig2(raw).second >= 0.0) return DensityMatrix(raw);
        return nearest_density(raw);
      }();
      est.repaired = eig2(raw).second < 0.0;
      result.assemblage.member(axis_from_index(pa), po) = 0.5 * rho.op();
      result.estimates.push_back(est);
    }
  }
  if (!missing.empty()) {
    throw std::invalid_argument("reconstruct_assemblage: missing cells:" + missing);
  }
  return result;
}

SParamEstimate reconstructed_s_param(const ReconstructionResult& recon, int n_measurements) {
  if (n_measurements > recon.assemblage.n_measurements) {
    throw std::invalid_argument("reconstructed_s_param: not enough prepared axes");
  }
  SParamEstimate out;
  double variance = 0.0;
  for (const MemberEstimate& est : recon.estimates) {
    if (est.prep_axis > n_measurements) continue;
    const double v = est.stokes[static_cast<std::size_t>(est.prep_axis - 1)];
    const double se = est.stokes_se[static_cast<std::size_t>(est.prep_axis - 1)];
    out.value += 0.5 * v * v;
    variance += v * v * se * se;
  }
  out.std_error = std::sqrt(variance);
  return out;
}

void write_counts_csv(std::ostream& out, const std::vector<CountRecord>& records) {
  out << kCsvHeader << "\n";
  for (const CountRecord& rec : records) {
    out << rec.prep_axis << ',' << rec.prep_outcome << ',' << rec.analysis_axis << ','
        << rec.analysis_outcome << ',' << rec.counts << ',' << rec.shots << "\n";
  }
}

std::string counts_csv_string(const std::vector<CountRecord>& records) {
  std::ostringstream out;
  write_counts_csv(out, records);
  return out.str();
}

std::vector<CountRecord> parse_counts_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("count CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw std::invalid_argument("count CSV: line 1: expected header '" + std::string(kCsvHeader) +
                                "', got '" + line + "'");
  }
  std::vector<CountRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<long long, 6> fields{};
    std::size_t pos = 0;
    for (int col = 0; col < 6; ++col) {
      const std::size_t next = line.find(',', pos);
      const std::string token = line.substr(pos, next == std::string::npos ? next : next - pos);
      try {
        std::size_t used = 0;
        fields[static_cast<std::size_t>(col)] = std::stoll(token, &used);
        if (used != token.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw std::invalid_argument("count CSV: line " + std::to_string(line_no) + ", column " +
                                    std::to_string(col + 1) + ": cannot parse '" + token + "'");
      }
      if (next == std::string::npos) {
        if (col != 5) {
          throw std::invalid_argument("count CSV: line " + std::to_string(line_no) +
                                      ": expected 6 fields, got " + std::to_string(col + 1));
        }
        pos = line.size();
      } else {
        if (col == 5) {
          throw std::invalid_argument("count CSV: line " + std::to_string(line_no) +
                                      ": more than 6 fields");
        }
        pos = next + 1;
      }
    }
    records.push_back({static_cast<int>(fields[0]), static_cast<int>(fields[1]),
                       static_cast<int>(fields[2]), static_cast<int>(fields[3]), fields[4],
                       fields[5]});
  }
  return records;
}

nlohmann::json run_metadata(const RunConfig& cfg) {
  nlohmann::json meta{
      {"schema", "tsteer-counts-meta/1"},
      {"rng", kRngAlgorithm},
      {"stream_derivation", "seed XOR splitmix64(setting_index + 1)"},
      {"n_measurements", cfg.n_measurements},
      {"shots_per_setting", cfg.shots_per_setting},
      {"rng_seed", cfg.rng_seed},
      {"t_tilde", cfg.t_tilde},
      {"imperfections", cfg.imperfections},
      {"include_loss_model", cfg.include_loss_model},
      {"channel",
       {{"gamma", cfg.channel.gamma},
        {"rotation_enabled", cfg.channel.rotation_enabled},
        {"extra_dephasing_rate", cfg.channel.extra_dephasing_rate},
        {"analyzer_rotation_deg", cfg.channel.analyzer_rotation_deg},
        {"pdl_ratio", cfg.channel.pdl_ratio},
        {"tech_transmissivity", cfg.channel.tech_transmissivity}}},
      {"prep", {{"shrink_s", cfg.prep.shrink_s}}},
  };
  if (cfg.include_loss_model) {
    // Informative detection-rate factors; conditional frequencies and the
    // tallies are unaffected because erased photons are counted at Bob.
    nlohmann::json rates = nlohmann::json::array();
    for (int pa = 1; pa <= cfg.n_measurements; ++pa) {
      for (Outcome po : kAllOutcomes) {
        const DensityMatrix delivered =
            evolve(prepare_with_impurity(axis_from_index(pa), po, cfg.prep),
                   DimensionlessTime(cfg.t_tilde), cfg.channel, cfg.imperfections);
        const double p_h = delivered.op().m00();
        const double rate = cfg.channel.tech_transmissivity *
                            (cfg.channel.pdl_ratio * p_h + (1.0 - p_h));
        rates.push_back({{"prep_axis", pa},
                         {"prep_outcome", outcome_sign(po)},
                         {"rate_factor", rate}});
      }
    }
    meta["loss_model"] = {{"convention", "T(V) = 1, T(H) = pdl_ratio, times tech_transmissivity"},
                          {"rate_factors", rates}};
  }
  return meta;
}

}  // namespace tsteer
