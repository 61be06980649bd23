#include "palcanon/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <ostream>
#include <string>
#include <thread>

#include "palcanon/error.hpp"
#include "palcanon/random.hpp"
#include "palcanon/rng.hpp"

namespace palcanon {

namespace {

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n == 0) throw ValidationError("experiment: n must be >= 1");
  if (cfg.trials == 0) throw ValidationError("experiment: trials must be >= 1");
  if (!(cfg.unit_tol.tol > 0.0)) throw ValidationError("experiment: unit_tol must be > 0");
  if (cfg.threads == 0) throw ValidationError("experiment: threads must be >= 1");
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::size_t parse_count(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError("frequency csv: bad integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

CMatrix trial_matrix(const ExperimentConfig& cfg, std::size_t trial_index) {
  RngStream rng(cfg.master_seed, trial_index);
  if (cfg.generator == Generator::Uniform) return random_uniform_complex(cfg.n, rng);
  return random_shifted_integer(cfg.n, trial_index, cfg.trials, rng);
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial_index) {
  TrialRecord rec{trial_index, 0, TrialStatus::OK};
  try {
    Spectrum s = pencil_eigenvalues(trial_matrix(cfg, trial_index), cfg.star);
    rec.unit_count = count_unit(s, cfg.unit_tol);
  } catch (const SingularMatrix&) {
    rec.status = TrialStatus::Skipped;
  } catch (const NearSingular&) {
    rec.status = TrialStatus::Skipped;
  } catch (const NumericalFailure&) {
    rec.status = TrialStatus::Skipped;
  }
  return rec;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  ExperimentResult result;
  result.records.resize(cfg.trials);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.trials; i = next++) result.records[i] = run_trial(cfg, i + 1);
  };
  const std::size_t nthreads = std::min(cfg.threads, cfg.trials);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  result.table.total = cfg.trials;
  for (const auto& rec : result.records) {
    if (rec.status == TrialStatus::Skipped) {
      ++result.table.skipped;
      continue;
    }
    ++result.table.bins[rec.unit_count];
    if (cfg.star == StarKind::ConjugateTranspose && rec.unit_count % 2 != cfg.n % 2) {
      result.parity_violations.push_back(rec.trial_index);
    }
  }
  return result;
}

void emit_frequency_csv(const FrequencyTable& t, std::ostream& out) {
  out << "unit_count,frequency\n";
  for (const auto& [count, freq] : t.bins) out << count << ',' << freq << '\n';
}

void emit_frequency_csv(const FrequencyTable& t, const std::filesystem::path& path) {
  auto out = open_out(path);
  emit_frequency_csv(t, out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void emit_scatter_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
  out << "trial,unit_count,status\n";
  for (const auto& r : records) {
    out << r.trial_index << ',' << r.unit_count << ',' << (r.status == TrialStatus::OK ? "OK" : "Skipped") << '\n';
  }
}

void emit_scatter_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path) {
  auto out = open_out(path);
  emit_scatter_csv(records, out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

FrequencyTable parse_frequency_csv(std::string_view text) {
  FrequencyTable t;
  bool header = true;
  while (!text.empty()) {
    const std::size_t eol = std::min(text.find('\n'), text.size());
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(std::min(eol + 1, text.size()));
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      if (line != "unit_count,frequency") throw ValidationError("frequency csv: bad header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) throw ValidationError("frequency csv: missing comma");
    const std::size_t count = parse_count(line.substr(0, comma));
    const std::size_t freq = parse_count(line.substr(comma + 1));
    if (!t.bins.emplace(count, freq).second) throw ValidationError("frequency csv: duplicate unit_count");
    t.total += freq;
  }
  if (header) throw ValidationError("frequency csv: empty input");
  return t;
}

}  // namespace palcanon
