// deft: train/benchmark/verify entry point for the low-rank projected
// optimizer library.
//
// Exit codes: 0 success, 1 config error, 2 divergence, 3 verification failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "deft/config.hpp"
#include "deft/harness.hpp"
#include "deft/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitVerifyFailed = 3;

std::vector<std::string> split_list(const std::string& arg) {
  std::vector<std::string> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return kExitConfig;
  }
  out << content;
  return kExitOk;
}

int cmd_train(const std::string& config_path, bool no_timing) {
  deft::bench::RunConfig cfg;
  try {
    cfg = deft::bench::parse_run_config(config_path);
  } catch (const deft::bench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (no_timing) cfg.record_timing = false;

  const deft::bench::RunResult result = deft::bench::run_training(cfg);
  std::ostringstream body;
  if (cfg.format == "csv")
    deft::bench::write_metrics_csv(body, result.metrics);
  else
    deft::bench::write_metrics_jsonl(body, result.metrics);
  const std::string out_path = deft::bench::resolve_output_path(cfg.output);
  const int rc = write_file(out_path, body.str());
  if (rc != kExitOk) return rc;

  std::cout << "wrote " << result.metrics.size() << " records to " << out_path << "\n";
  if (result.diverged) {
    std::cerr << "run diverged (non-finite loss or weights); partial metrics retained\n";
    return kExitDiverged;
  }
  std::cout << "final loss " << deft::bench::format_double(result.final_loss)
            << ", optimizer state elements " << result.state_elements << "\n";
  return kExitOk;
}

int cmd_bench(const std::string& shapes_arg, const std::string& ranks_arg, int reps,
              std::uint64_t seed, const std::string& out) {
  std::vector<std::pair<int, int>> shapes;
  for (const std::string& s : split_list(shapes_arg)) {
    const auto x = s.find('x');
    try {
      if (x == std::string::npos) {
        const int n = std::stoi(s);
        shapes.emplace_back(n, n);
      } else {
        shapes.emplace_back(std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1)));
      }
    } catch (const std::exception&) {
      std::cerr << "config error: bad shape '" << s << "' (use ROWSxCOLS)\n";
      return kExitConfig;
    }
  }
  std::vector<int> ranks;
  for (const std::string& s : split_list(ranks_arg)) {
    try {
      ranks.push_back(std::stoi(s));
    } catch (const std::exception&) {
      std::cerr << "config error: bad rank '" << s << "'\n";
      return kExitConfig;
    }
  }
  if (shapes.empty() || ranks.empty() || reps < 1) {
    std::cerr << "config error: need at least one shape, one rank, reps >= 1\n";
    return kExitConfig;
  }

  const auto rows = deft::bench::run_bench(shapes, ranks, reps, seed);
  for (const auto& row : rows) {
    if (row.skipped)
      std::cerr << "note: skipped " << row.method << " " << row.rows << "x" << row.cols
                << " k=" << row.rank << " (" << row.note << ")\n";
  }
  std::ostringstream body;
  deft::bench::write_bench_csv(body, rows);
  const std::string out_path = deft::bench::resolve_output_path(out);
  const int rc = write_file(out_path, body.str());
  if (rc != kExitOk) return rc;
  std::cout << body.str();
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& report_path, bool negative_control, int fft_max_n) {
  deft::verify::VerifyOptions opts;
  opts.perturb_qr_sign = negative_control;
  opts.fft_max_n = fft_max_n;
  const auto results = deft::verify::run_all_properties(opts);
  deft::verify::print_report(std::cout, results);
  if (!report_path.empty()) {
    std::ostringstream body;
    deft::verify::write_report_json(body, results);
    const std::string out_path = deft::bench::resolve_output_path(report_path);
    if (write_file(out_path, body.str()) != kExitOk) return kExitConfig;
    std::cout << "wrote " << out_path << "\n";
  }
  return deft::verify::all_pass(results) ? kExitOk : kExitVerifyFailed;
}

int cmd_rank_sweep(const std::string& config_path, const std::string& ranks_arg,
                   const std::string& out) {
  deft::bench::RunConfig cfg;
  std::vector<deft::bench::SweepEntry> entries;
  try {
    cfg = deft::bench::parse_run_config(config_path);
    entries = deft::bench::run_rank_sweep(cfg, split_list(ranks_arg));
  } catch (const deft::bench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (entries.empty()) {
    std::cerr << "config error: no ranks given\n";
    return kExitConfig;
  }

  std::ostringstream body;
  deft::bench::write_sweep_csv(body, entries);
  std::cout << body.str();
  const std::string out_path = deft::bench::resolve_output_path(out);
  const int rc = write_file(out_path, body.str());
  if (rc != kExitOk) return rc;
  std::cout << "wrote " << out_path << "\n";
  for (const auto& e : entries)
    if (e.result.diverged) {
      std::cerr << "rank " << e.rank_label << " diverged\n";
      return kExitDiverged;
    }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-rank projected AdamW training, benchmark and verification tool"};
  app.require_subcommand(1);

  std::string config_path, shapes_arg, ranks_arg;
  std::string bench_out = "bench.csv", sweep_out = "sweep.csv", report_path = "verify.json";
  int reps = 10;
  std::uint64_t seed = 2025;
  bool no_timing = false, negative_control = false;
  int fft_max_n = 1024;

  CLI::App* train = app.add_subcommand("train", "run one training configuration");
  train->add_option("config", config_path, "config file")->required();
  train->add_flag("--no-timing", no_timing,
                  "write zeros for timing columns (byte-stable output)");

  CLI::App* bench =
      app.add_subcommand("bench", "time projector construction across methods");
  bench->add_option("--shapes", shapes_arg, "comma list, e.g. 2048x2048,512x256")
      ->required();
  bench->add_option("--ranks", ranks_arg, "comma list of ranks")->required();
  bench->add_option("--reps", reps, "timed repetitions per cell (default 10)");
  bench->add_option("--seed", seed, "seed for the shared gradient matrices");
  bench->add_option("--out", bench_out, "output CSV path");

  CLI::App* verify = app.add_subcommand("verify", "run the full property suite");
  verify->add_option("--report", report_path, "machine-readable JSON report path");
  verify->add_option("--fft-max-n", fft_max_n, "upper DFT length for the oracle scan");
  verify->add_flag("--negative-control", negative_control,
                   "perturb a QR result so the determinism property must fail");

  CLI::App* sweep =
      app.add_subcommand("rank-sweep", "train the same problem across ranks");
  sweep->add_option("config", config_path, "config file")->required();
  sweep->add_option("--ranks", ranks_arg, "comma list of ranks (integers or 'min')")
      ->required();
  sweep->add_option("--out", sweep_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(config_path, no_timing);
    if (bench->parsed()) return cmd_bench(shapes_arg, ranks_arg, reps, seed, bench_out);
    if (verify->parsed()) return cmd_verify(report_path, negative_control, fft_max_n);
    if (sweep->parsed()) return cmd_rank_sweep(config_path, ranks_arg, sweep_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
