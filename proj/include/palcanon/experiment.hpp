#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string_view>
#include <vector>

#include "palcanon/matrix.hpp"
#include "palcanon/pencil.hpp"

namespace palcanon {

enum class Generator { Uniform, ShiftedInteger };

struct ExperimentConfig {
  std::size_t n = 0;
  std::size_t trials = 0;
  StarKind star = StarKind::ConjugateTranspose;
  Generator generator = Generator::Uniform;
  UnitTolerance unit_tol{};
  std::uint64_t master_seed = 0;
  std::size_t threads = 1;
};

enum class TrialStatus { OK, Skipped };

struct TrialRecord {
  std::size_t trial_index = 0;  // 1-based
  std::size_t unit_count = 0;
  TrialStatus status = TrialStatus::OK;
};

struct FrequencyTable {
  std::map<std::size_t, std::size_t> bins;  // unit count -> frequency
  std::size_t total = 0;
  std::size_t skipped = 0;

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;
};

struct ExperimentResult {
  FrequencyTable table;
  std::vector<TrialRecord> records;  // ascending trial index
  /// Trials whose unit count has the wrong parity for a conjugate-transpose run.
  std::vector<std::size_t> parity_violations;
};

/// Matrix of trial `trial_index` (1-based), drawn from stream (master_seed, trial_index).
/// The shifted generator uses m = cfg.trials as the integer range.
CMatrix trial_matrix(const ExperimentConfig& cfg, std::size_t trial_index);

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial_index);

/// Runs every trial; the result does not depend on cfg.threads.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// "unit_count,frequency" rows in ascending unit count.
void emit_frequency_csv(const FrequencyTable& t, std::ostream& out);
void emit_frequency_csv(const FrequencyTable& t, const std::filesystem::path& path);

/// "trial,unit_count,status" rows in ascending trial index.
void emit_scatter_csv(const std::vector<TrialRecord>& records, std::ostream& out);
void emit_scatter_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path);

/// Inverse of emit_frequency_csv. `total` is the sum of frequencies and
/// `skipped` is 0, since the file does not record skips.
FrequencyTable parse_frequency_csv(std::string_view text);

}  // namespace palcanon
