#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "deft/optimizer.hpp"
#include "deft/projector.hpp"

namespace deft::bench {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProblemSpec {
  std::string kind = "quadratic";  // quadratic | linreg | mlp_blobs
  std::uint64_t seed = 7;
  int rows = 32;        // quadratic
  int cols = 32;        // quadratic
  int n_samples = 512;  // linreg, mlp_blobs
  int input_dim = 16;   // linreg, mlp_blobs
  int outputs = 1;      // linreg
  int hidden_dim = 32;  // mlp_blobs
  int classes = 4;      // mlp_blobs
  double separation = 6.0;
  double noise = 0.8;
};

/// Per-parameter rank resolution: a fixed value (clamped to min(m,n)),
/// a quarter of min(m,n), or min(m,n) itself.
enum class RankMode { Fixed, Quarter, Min };

struct RunConfig {
  ProblemSpec problem;
  std::string method = "deft";  // deft | svd | rsvd | dct | identity | dense
  RankMode rank_mode = RankMode::Fixed;
  projectors::ProjectionConfig projection;
  optim::AdamWConfig adamw;
  long steps = 100;
  std::uint64_t run_seed = 42;
  std::string output = "metrics.csv";
  std::string format = "csv";  // csv | jsonl
  bool record_timing = true;

  void validate() const;  // throws ConfigError
};

RunConfig parse_run_config_text(const std::string& text, const std::string& origin);
RunConfig parse_run_config(const std::string& path);
std::string serialize_run_config(const RunConfig& cfg);

/// Locale-independent shortest-exact double formatting used across all
/// emitted files.
std::string format_double(double v);

}  // namespace deft::bench
