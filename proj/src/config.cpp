#include "deft/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace deft::bench {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

struct Entry {
  std::string value;
  int line;
};

using Section = std::map<std::string, Entry>;

long parse_long(const std::string& origin, const Entry& e, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(origin, e.line, "key '" + key + "': expected integer, got '" + e.value + "'");
  }
}

std::uint64_t parse_u64(const std::string& origin, const Entry& e, const std::string& key) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(origin, e.line, "key '" + key + "': expected unsigned integer, got '" + e.value + "'");
  }
}

double parse_double(const std::string& origin, const Entry& e, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(origin, e.line, "key '" + key + "': expected number, got '" + e.value + "'");
  }
}

bool parse_bool(const std::string& origin, const Entry& e, const std::string& key) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  fail(origin, e.line, "key '" + key + "': expected true or false, got '" + e.value + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // %.17g is exact but verbose; prefer the shortest representation that
  // round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[64];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

void RunConfig::validate() const {
  static const std::set<std::string> kinds = {"quadratic", "linreg", "mlp_blobs"};
  static const std::set<std::string> methods = {"deft", "svd",      "rsvd",
                                                "dct",  "identity", "dense"};
  if (!kinds.count(problem.kind))
    throw ConfigError("problem.kind must be one of quadratic|linreg|mlp_blobs");
  if (!methods.count(method))
    throw ConfigError("projection.method must be one of deft|svd|rsvd|dct|identity|dense");
  if (format != "csv" && format != "jsonl")
    throw ConfigError("run.format must be csv or jsonl");
  if (steps < 1) throw ConfigError("run.steps must be >= 1");
  if (problem.rows < 1 || problem.cols < 1 || problem.n_samples < 1 ||
      problem.input_dim < 1 || problem.outputs < 1 || problem.hidden_dim < 1 ||
      problem.classes < 2)
    throw ConfigError("problem dimensions out of range");
  try {
    projection.validate();
    adamw.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig parse_run_config_text(const std::string& text, const std::string& origin) {
  std::map<std::string, Section> sections;
  std::map<std::string, int> section_lines;

  std::istringstream in(text);
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail(origin, lineno, "malformed section header");
      current = trim(t.substr(1, t.size() - 2));
      if (current.empty()) fail(origin, lineno, "empty section name");
      sections[current];
      section_lines[current] = lineno;
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    if (current.empty()) fail(origin, lineno, "key outside of any [section]");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail(origin, lineno, "empty key");
    if (sections[current].count(key))
      fail(origin, lineno, "duplicate key '" + key + "' in [" + current + "]");
    sections[current][key] = {value, lineno};
  }

  static const std::map<std::string, std::set<std::string>> known = {
      {"problem",
       {"kind", "seed", "rows", "cols", "n_samples", "input_dim", "outputs",
        "hidden_dim", "classes", "separation", "noise"}},
      {"projection",
       {"method", "rank", "update_interval", "side_mode", "sketch_layout", "scale",
        "two_sided", "rsvd_oversampling", "rsvd_seed"}},
      {"adamw", {"learning_rate", "beta1", "beta2", "epsilon", "weight_decay"}},
      {"run", {"steps", "seed", "output", "format", "record_timing"}},
  };
  for (const auto& [name, sec] : sections) {
    const auto it = known.find(name);
    if (it == known.end()) fail(origin, section_lines[name], "unknown section [" + name + "]");
    for (const auto& [key, entry] : sec)
      if (!it->second.count(key))
        fail(origin, entry.line, "unknown key '" + key + "' in [" + name + "]");
  }

  RunConfig cfg;
  auto get = [&](const std::string& sec, const std::string& key) -> const Entry* {
    const auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    const auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
  };

  if (const Entry* e = get("problem", "kind")) cfg.problem.kind = e->value;
  if (const Entry* e = get("problem", "seed")) cfg.problem.seed = parse_u64(origin, *e, "seed");
  if (const Entry* e = get("problem", "rows"))
    cfg.problem.rows = static_cast<int>(parse_long(origin, *e, "rows"));
  if (const Entry* e = get("problem", "cols"))
    cfg.problem.cols = static_cast<int>(parse_long(origin, *e, "cols"));
  if (const Entry* e = get("problem", "n_samples"))
    cfg.problem.n_samples = static_cast<int>(parse_long(origin, *e, "n_samples"));
  if (const Entry* e = get("problem", "input_dim"))
    cfg.problem.input_dim = static_cast<int>(parse_long(origin, *e, "input_dim"));
  if (const Entry* e = get("problem", "outputs"))
    cfg.problem.outputs = static_cast<int>(parse_long(origin, *e, "outputs"));
  if (const Entry* e = get("problem", "hidden_dim"))
    cfg.problem.hidden_dim = static_cast<int>(parse_long(origin, *e, "hidden_dim"));
  if (const Entry* e = get("problem", "classes"))
    cfg.problem.classes = static_cast<int>(parse_long(origin, *e, "classes"));
  if (const Entry* e = get("problem", "separation"))
    cfg.problem.separation = parse_double(origin, *e, "separation");
  if (const Entry* e = get("problem", "noise"))
    cfg.problem.noise = parse_double(origin, *e, "noise");

  if (const Entry* e = get("projection", "method")) {
    cfg.method = e->value;
    if (e->value == "deft") cfg.projection.method = projectors::Method::Deft;
    else if (e->value == "svd") cfg.projection.method = projectors::Method::Svd;
    else if (e->value == "rsvd") cfg.projection.method = projectors::Method::Rsvd;
    else if (e->value == "dct") cfg.projection.method = projectors::Method::Dct;
    else if (e->value == "identity" || e->value == "dense")
      cfg.projection.method = projectors::Method::Identity;
    else
      fail(origin, e->line, "unknown projection method '" + e->value + "'");
  }
  if (const Entry* e = get("projection", "rank")) {
    if (e->value == "quarter") {
      cfg.rank_mode = RankMode::Quarter;
    } else if (e->value == "min") {
      cfg.rank_mode = RankMode::Min;
    } else {
      cfg.rank_mode = RankMode::Fixed;
      cfg.projection.rank = static_cast<int>(parse_long(origin, *e, "rank"));
    }
  }
  if (const Entry* e = get("projection", "update_interval"))
    cfg.projection.update_interval =
        static_cast<int>(parse_long(origin, *e, "update_interval"));
  if (const Entry* e = get("projection", "side_mode")) {
    if (e->value == "std") cfg.projection.side_mode = projectors::SideMode::Std;
    else if (e->value == "reverse_std")
      cfg.projection.side_mode = projectors::SideMode::ReverseStd;
    else
      fail(origin, e->line, "side_mode must be std or reverse_std");
  }
  if (const Entry* e = get("projection", "sketch_layout")) {
    if (e->value == "interleaved")
      cfg.projection.sketch_layout = projectors::SketchLayout::Interleaved;
    else if (e->value == "block")
      cfg.projection.sketch_layout = projectors::SketchLayout::Block;
    else
      fail(origin, e->line, "sketch_layout must be interleaved or block");
  }
  if (const Entry* e = get("projection", "scale"))
    cfg.projection.scale = parse_double(origin, *e, "scale");
  if (const Entry* e = get("projection", "two_sided"))
    cfg.projection.two_sided = parse_bool(origin, *e, "two_sided");
  if (const Entry* e = get("projection", "rsvd_oversampling"))
    cfg.projection.rsvd_oversampling =
        static_cast<int>(parse_long(origin, *e, "rsvd_oversampling"));
  if (const Entry* e = get("projection", "rsvd_seed"))
    cfg.projection.rsvd_seed = parse_u64(origin, *e, "rsvd_seed");

  if (const Entry* e = get("adamw", "learning_rate"))
    cfg.adamw.learning_rate = parse_double(origin, *e, "learning_rate");
  if (const Entry* e = get("adamw", "beta1")) cfg.adamw.beta1 = parse_double(origin, *e, "beta1");
  if (const Entry* e = get("adamw", "beta2")) cfg.adamw.beta2 = parse_double(origin, *e, "beta2");
  if (const Entry* e = get("adamw", "epsilon"))
    cfg.adamw.epsilon = parse_double(origin, *e, "epsilon");
  if (const Entry* e = get("adamw", "weight_decay"))
    cfg.adamw.weight_decay = parse_double(origin, *e, "weight_decay");

  if (const Entry* e = get("run", "steps")) cfg.steps = parse_long(origin, *e, "steps");
  if (const Entry* e = get("run", "seed")) cfg.run_seed = parse_u64(origin, *e, "seed");
  if (const Entry* e = get("run", "output")) cfg.output = e->value;
  if (const Entry* e = get("run", "format")) cfg.format = e->value;
  if (const Entry* e = get("run", "record_timing"))
    cfg.record_timing = parse_bool(origin, *e, "record_timing");

  cfg.validate();
  return cfg;
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config_text(buf.str(), path);
}

std::string serialize_run_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[problem]\n";
  out << "kind = " << cfg.problem.kind << "\n";
  out << "seed = " << cfg.problem.seed << "\n";
  out << "rows = " << cfg.problem.rows << "\n";
  out << "cols = " << cfg.problem.cols << "\n";
  out << "n_samples = " << cfg.problem.n_samples << "\n";
  out << "input_dim = " << cfg.problem.input_dim << "\n";
  out << "outputs = " << cfg.problem.outputs << "\n";
  out << "hidden_dim = " << cfg.problem.hidden_dim << "\n";
  out << "classes = " << cfg.problem.classes << "\n";
  out << "separation = " << format_double(cfg.problem.separation) << "\n";
  out << "noise = " << format_double(cfg.problem.noise) << "\n";
  out << "\n[projection]\n";
  out << "method = " << cfg.method << "\n";
  if (cfg.rank_mode == RankMode::Quarter)
    out << "rank = quarter\n";
  else if (cfg.rank_mode == RankMode::Min)
    out << "rank = min\n";
  else
    out << "rank = " << cfg.projection.rank << "\n";
  out << "update_interval = " << cfg.projection.update_interval << "\n";
  out << "side_mode = " << projectors::to_string(cfg.projection.side_mode) << "\n";
  out << "sketch_layout = " << projectors::to_string(cfg.projection.sketch_layout) << "\n";
  out << "scale = " << format_double(cfg.projection.scale) << "\n";
  out << "two_sided = " << (cfg.projection.two_sided ? "true" : "false") << "\n";
  out << "rsvd_oversampling = " << cfg.projection.rsvd_oversampling << "\n";
  out << "rsvd_seed = " << cfg.projection.rsvd_seed << "\n";
  out << "\n[adamw]\n";
  out << "learning_rate = " << format_double(cfg.adamw.learning_rate) << "\n";
  out << "beta1 = " << format_double(cfg.adamw.beta1) << "\n";
  out << "beta2 = " << format_double(cfg.adamw.beta2) << "\n";
  out << "epsilon = " << format_double(cfg.adamw.epsilon) << "\n";
  out << "weight_decay = " << format_double(cfg.adamw.weight_decay) << "\n";
  out << "\n[run]\n";
  out << "steps = " << cfg.steps << "\n";
  out << "seed = " << cfg.run_seed << "\n";
  out << "output = " << cfg.output << "\n";
  out << "format = " << cfg.format << "\n";
  out << "record_timing = " << (cfg.record_timing ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace deft::bench
