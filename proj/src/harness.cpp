#include "deft/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include "deft/optimizer.hpp"
#include "deft/rng.hpp"

namespace deft::bench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::unique_ptr<models::Problem> make_problem(const ProblemSpec& spec) {
  if (spec.kind == "quadratic")
    return models::make_quadratic_problem(spec.rows, spec.cols, spec.seed);
  if (spec.kind == "linreg")
    return models::make_linreg_problem(spec.n_samples, spec.input_dim, spec.outputs,
                                       spec.seed);
  const models::SynthDataset data =
      models::make_blobs(spec.seed, spec.n_samples, spec.input_dim, spec.classes,
                         spec.separation, spec.noise);
  return models::make_mlp_blobs_problem(data, spec.hidden_dim, spec.seed);
}

int resolve_rank(const RunConfig& cfg, int m, int n) {
  const int minmn = std::min(m, n);
  switch (cfg.rank_mode) {
    case RankMode::Quarter: return std::max(1, minmn / 4);
    case RankMode::Min: return minmn;
    case RankMode::Fixed: break;
  }
  return std::clamp(cfg.projection.rank, 1, minmn);
}

// One trained parameter: either a projected AdamW state or the dense path.
// Matrices with min(m,n) < 2 (bias rows) always take the dense path, as do
// all parameters under method = dense.
struct ParamSlot {
  bool dense = false;
  optim::ParamState state;                       // projected path
  RealMatrix w, m, v;                            // dense path
  long t = 0;
};

}  // namespace

RunResult run_training(const RunConfig& cfg) {
  cfg.validate();
  const auto problem = make_problem(cfg.problem);
  std::vector<RealMatrix> params = problem->initial_params(cfg.run_seed);

  const bool all_dense = cfg.method == "dense";
  std::vector<ParamSlot> slots(params.size());
  for (std::size_t p = 0; p < params.size(); ++p) {
    ParamSlot& slot = slots[p];
    const int m = params[p].rows(), n = params[p].cols();
    slot.dense = all_dense || std::min(m, n) < 2;
    if (slot.dense) {
      slot.w = params[p];
      slot.m = RealMatrix(m, n);
      slot.v = RealMatrix(m, n);
    } else {
      projectors::ProjectionConfig pc = cfg.projection;
      pc.rank = resolve_rank(cfg, m, n);
      slot.state = optim::init_state(params[p], pc, cfg.adamw);
    }
  }

  RunResult out;
  double err_sum = 0.0;
  long err_count = 0;
  const auto t0 = Clock::now();

  for (long step = 1; step <= cfg.steps; ++step) {
    for (std::size_t p = 0; p < params.size(); ++p)
      params[p] = slots[p].dense ? slots[p].w : slots[p].state.weights;

    models::Evaluation ev;
    try {
      ev = problem->eval(params);
    } catch (const std::runtime_error&) {
      out.diverged = true;
      break;
    }
    if (!std::isfinite(ev.loss)) {
      out.diverged = true;
      break;
    }

    MetricsRecord rec;
    rec.step = step;
    rec.loss = ev.loss;
    out.final_loss = ev.loss;

    double grad_norm2 = 0.0, update_norm2 = 0.0, build_seconds = 0.0;
    long state_elements = 0;
    bool rebuilt = false;
    bool diverged = false;
    for (std::size_t p = 0; p < params.size(); ++p) {
      const double gn = ev.grads[p].frobenius_norm();
      grad_norm2 += gn * gn;
      ParamSlot& slot = slots[p];
      try {
        if (slot.dense) {
          const RealMatrix before = slot.w;
          optim::dense_adamw_step(slot.w, slot.m, slot.v, slot.t, ev.grads[p], cfg.adamw);
          const double un = (slot.w - before).frobenius_norm() / cfg.adamw.learning_rate;
          update_norm2 += un * un;
          state_elements += 2L * slot.w.rows() * slot.w.cols();
        } else {
          const optim::StepReport rep = optim::step(slot.state, ev.grads[p]);
          update_norm2 += rep.update_norm * rep.update_norm;
          build_seconds += rep.projector_build_seconds;
          state_elements += rep.state_elements;
          rebuilt = rebuilt || rep.projector_rebuilt;
          if (rep.projector_rebuilt) {
            err_sum += projectors::projection_error(ev.grads[p], *slot.state.projector);
            err_count += 1;
          }
        }
      } catch (const std::runtime_error&) {
        diverged = true;
        break;
      }
    }
    if (diverged) {
      out.diverged = true;
      break;
    }

    rec.grad_norm = std::sqrt(grad_norm2);
    rec.update_norm = std::sqrt(update_norm2);
    rec.projector_rebuilt = rebuilt;
    rec.projector_build_seconds = cfg.record_timing ? build_seconds : 0.0;
    rec.state_elements = state_elements;
    rec.cumulative_seconds = cfg.record_timing ? seconds_since(t0) : 0.0;
    out.state_elements = state_elements;
    out.metrics.push_back(rec);
  }

  if (err_count > 0) out.avg_projection_error = err_sum / static_cast<double>(err_count);
  return out;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& records) {
  out << "step,loss,grad_norm,update_norm,projector_rebuilt,projector_build_seconds,"
         "state_elements,cumulative_seconds\n";
  for (const auto& r : records) {
    out << r.step << ',' << format_double(r.loss) << ',' << format_double(r.grad_norm)
        << ',' << format_double(r.update_norm) << ',' << (r.projector_rebuilt ? 1 : 0)
        << ',' << format_double(r.projector_build_seconds) << ',' << r.state_elements
        << ',' << format_double(r.cumulative_seconds) << '\n';
  }
}

void write_metrics_jsonl(std::ostream& out, const std::vector<MetricsRecord>& records) {
  for (const auto& r : records) {
    out << "{\"step\":" << r.step << ",\"loss\":" << format_double(r.loss)
        << ",\"grad_norm\":" << format_double(r.grad_norm)
        << ",\"update_norm\":" << format_double(r.update_norm)
        << ",\"projector_rebuilt\":" << (r.projector_rebuilt ? "true" : "false")
        << ",\"projector_build_seconds\":" << format_double(r.projector_build_seconds)
        << ",\"state_elements\":" << r.state_elements
        << ",\"cumulative_seconds\":" << format_double(r.cumulative_seconds) << "}\n";
  }
}

std::vector<BenchRow> run_bench(const std::vector<std::pair<int, int>>& shapes,
                                const std::vector<int>& ranks, int reps,
                                std::uint64_t seed) {
  if (reps < 1) throw ConfigError("bench: reps must be >= 1");
  std::vector<BenchRow> rows;
  const std::vector<projectors::Method> methods = {
      projectors::Method::Deft, projectors::Method::Svd, projectors::Method::Rsvd,
      projectors::Method::Dct};

  for (const auto& [m, n] : shapes) {
    const RealMatrix g =
        gaussian_matrix(m, n, seed ^ (static_cast<std::uint64_t>(m) * 2654435761ULL +
                                      static_cast<std::uint64_t>(n)));
    for (const projectors::Method method : methods) {
      for (const int k : ranks) {
        BenchRow row;
        row.method = projectors::to_string(method);
        row.rows = m;
        row.cols = n;
        row.rank = k;
        row.reps = reps;
        const int minmn = std::min(m, n);
        if (k < 1 || k > minmn) {
          row.skipped = true;
          row.note = "rank exceeds min(m,n)";
          rows.push_back(row);
          continue;
        }
        projectors::ProjectionConfig pc;
        pc.method = method;
        pc.rank = k;
        pc.rsvd_oversampling = std::min(8, minmn - k);
        pc.rsvd_seed = seed;

        projectors::ProjectorBasis basis = projectors::build_projector(g, k, pc);
        std::vector<double> times(reps);
        for (int r = 0; r < reps; ++r) {
          const auto t0 = Clock::now();
          basis = projectors::build_projector(g, k, pc);
          times[r] = seconds_since(t0);
        }
        std::sort(times.begin(), times.end());
        row.min_seconds = times.front();
        row.median_seconds = reps % 2 == 1
                                 ? times[reps / 2]
                                 : 0.5 * (times[reps / 2 - 1] + times[reps / 2]);
        row.projection_error = projectors::projection_error(g, basis);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "method,rows,cols,rank,reps,median_seconds,min_seconds,projection_error,note\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.rows << ',' << r.cols << ',' << r.rank << ',' << r.reps
        << ',';
    if (r.skipped)
      out << ",,," << r.note << '\n';
    else
      out << format_double(r.median_seconds) << ',' << format_double(r.min_seconds)
          << ',' << format_double(r.projection_error) << ',' << r.note << '\n';
  }
}

std::vector<SweepEntry> run_rank_sweep(const RunConfig& base,
                                       const std::vector<std::string>& ranks) {
  std::vector<SweepEntry> entries;
  for (const std::string& label : ranks) {
    RunConfig cfg = base;
    if (label == "min") {
      cfg.rank_mode = RankMode::Min;
    } else if (label == "quarter") {
      cfg.rank_mode = RankMode::Quarter;
    } else {
      cfg.rank_mode = RankMode::Fixed;
      try {
        cfg.projection.rank = std::stoi(label);
      } catch (const std::exception&) {
        throw ConfigError("rank-sweep: bad rank '" + label + "'");
      }
      if (cfg.projection.rank < 1) throw ConfigError("rank-sweep: rank must be >= 1");
    }
    SweepEntry e;
    e.rank_label = label;
    e.result = run_training(cfg);
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepEntry>& entries) {
  out << "rank,final_loss,avg_projection_error,state_elements,diverged\n";
  for (const auto& e : entries) {
    out << e.rank_label << ',' << format_double(e.result.final_loss) << ','
        << format_double(e.result.avg_projection_error) << ',' << e.result.state_elements
        << ',' << (e.result.diverged ? 1 : 0) << '\n';
  }
}

std::string resolve_output_path(const std::string& path) {
  const char* dir = std::getenv("DEFT_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0' || path.empty()) return path;
  if (path.front() == '/') return path;  // absolute paths win
  std::string d(dir);
  if (d.back() != '/') d += '/';
  return d + path;
}

}  // namespace deft::bench
