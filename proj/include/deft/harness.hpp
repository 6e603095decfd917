#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "deft/config.hpp"
#include "deft/problems.hpp"

namespace deft::bench {

struct MetricsRecord {
  long step = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  double update_norm = 0.0;
  bool projector_rebuilt = false;
  double projector_build_seconds = 0.0;
  long state_elements = 0;
  double cumulative_seconds = 0.0;
};

struct RunResult {
  std::vector<MetricsRecord> metrics;
  bool diverged = false;
  double final_loss = 0.0;
  long state_elements = 0;
  /// mean of projection_error(G, P) over all rebuild events (0 when none)
  double avg_projection_error = 0.0;
};

RunResult run_training(const RunConfig& cfg);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& records);
void write_metrics_jsonl(std::ostream& out, const std::vector<MetricsRecord>& records);

struct BenchRow {
  std::string method;
  int rows = 0;
  int cols = 0;
  int rank = 0;
  int reps = 0;
  double median_seconds = 0.0;
  double min_seconds = 0.0;
  double projection_error = 0.0;
  bool skipped = false;
  std::string note;
};

/// Projector-construction microbenchmark: per (method, shape, rank) the
/// median and min build time over `reps` runs after one discarded warm-up,
/// plus the projection error on a shared seeded gradient.
std::vector<BenchRow> run_bench(const std::vector<std::pair<int, int>>& shapes,
                                const std::vector<int>& ranks, int reps,
                                std::uint64_t seed);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

struct SweepEntry {
  std::string rank_label;
  RunResult result;
};

/// One training run per rank with a shared seed. Rank labels are integers
/// or "min"; integer ranks are clamped per parameter to min(m,n).
std::vector<SweepEntry> run_rank_sweep(const RunConfig& base,
                                       const std::vector<std::string>& ranks);

void write_sweep_csv(std::ostream& out, const std::vector<SweepEntry>& entries);

/// Applies the output-directory override from DEFT_OUTPUT_DIR, if set.
std::string resolve_output_path(const std::string& path);

}  // namespace deft::bench
