#include "idt/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "idt/baselines.hpp"
#include "idt/errors.hpp"
#include "idt/mixture.hpp"

namespace idt::bench {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  }
}

std::uint64_t to_count(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v.front() == '-') throw std::invalid_argument(v);
    const auto d = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + v + "'");
}

bool is_tree(const RegressorSpec& s) {
  return s.kind == RegressorSpec::Kind::idt || s.kind == RegressorSpec::Kind::ctw;
}

const std::vector<std::string>& known_sources() {
  static const std::vector<std::string> sources{"synthetic", "duffing", "tinkerbell", "mackey_glass", "chua",
                                                "sine",      "uniform", "forced",     "csv"};
  return sources;
}

std::vector<std::uint64_t> audit_checkpoints(const ExperimentConfig& config) {
  if (!config.checkpoints.empty()) return config.checkpoints;
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = 100; c <= config.n; c *= 10) out.push_back(c);
  if (out.empty() || out.back() != config.n) out.push_back(config.n);
  return out;
}

}  // namespace

std::string RegressorSpec::name() const {
  switch (kind) {
    case Kind::idt:
      return "idt";
    case Kind::ctw:
      return "ctw" + std::to_string(depth);
    case Kind::lr:
      return "lr";
    case Kind::vsr:
      return "vsr";
    case Kind::fnr:
      return "fnr";
  }
  return {};
}

RegressorSpec RegressorSpec::parse(const std::string& token) {
  const std::string t = trim(token);
  if (t == "idt") return {Kind::idt, 0};
  if (t == "lr") return {Kind::lr, 0};
  if (t == "vsr") return {Kind::vsr, 0};
  if (t == "fnr") return {Kind::fnr, 0};
  if (t.rfind("ctw", 0) == 0) {
    std::string rest = t.substr(3);
    if (!rest.empty() && (rest.front() == ':' || rest.front() == '-')) rest.erase(0, 1);
    if (rest.empty()) return {Kind::ctw, 2};
    return {Kind::ctw, static_cast<std::size_t>(to_count("regressors", rest))};
  }
  throw ConfigError("unknown regressor '" + t + "' (expected idt, ctw<d>, lr, vsr or fnr)");
}

std::vector<RegressorSpec> ExperimentConfig::default_regressors() {
  using K = RegressorSpec::Kind;
  return {{K::idt, 0}, {K::ctw, 2}, {K::lr, 0}, {K::vsr, 0}, {K::fnr, 0}};
}

TreeConfig ExperimentConfig::tree_config(std::size_t p) const {
  TreeConfig c = TreeConfig::defaults(p, bound);
  c.a = weighting_scale();
  c.delta = delta;
  c.depth_cap = depth_cap;
  return c;
}

void ExperimentConfig::validate() const {
  if (std::find(known_sources().begin(), known_sources().end(), source) == known_sources().end()) {
    throw ConfigError("unknown source '" + source + "'");
  }
  if (source == "csv" && csv_path.empty()) throw ConfigError("source = csv requires 'csv'");
  if (source == "csv" && target.empty()) throw ConfigError("source = csv requires 'target'");
  if (n == 0 && source != "csv") throw ConfigError("n must be positive");
  if (trials == 0) throw ConfigError("trials must be positive");
  if (regressors.empty()) throw ConfigError("at least one regressor is required");
  if (embed_order == 0) throw ConfigError("embed_order must be positive");
  if (dim == 0) throw ConfigError("dim must be positive");
  if (fnr_order == 0) throw ConfigError("fnr_order must be positive");
  if (!(noise_variance >= 0.0)) throw ConfigError("noise_variance must be non-negative");
  if (h && !(*h > 0.0)) throw ConfigError("h must be positive");
  tree_config(1).validate();
  for (const auto& r : regressors) {
    if (r.kind == RegressorSpec::Kind::ctw && r.depth >= 63) throw ConfigError("ctw depth too large");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = unquote(trim(line.substr(eq + 1)));
    try {
      if (key == "source") {
        c.source = value;
      } else if (key == "csv") {
        c.csv_path = value;
      } else if (key == "target") {
        c.target = value;
      } else if (key == "n") {
        c.n = to_count(key, value);
      } else if (key == "seed") {
        c.seed = to_count(key, value);
      } else if (key == "trials") {
        c.trials = to_count(key, value);
      } else if (key == "regressors") {
        c.regressors.clear();
        for (const auto& tok : split_list(value)) c.regressors.push_back(RegressorSpec::parse(tok));
      } else if (key == "A") {
        c.bound = to_real(key, value);
      } else if (key == "a") {
        if (value == "auto") {
          c.a.reset();
        } else {
          c.a = to_real(key, value);
        }
      } else if (key == "delta") {
        c.delta = to_real(key, value);
      } else if (key == "depth_cap") {
        if (value == "unlimited") {
          c.depth_cap = DepthCap::unlimited;
        } else if (value == "ceil_log2") {
          c.depth_cap = DepthCap::ceil_log2;
        } else {
          throw ConfigError("depth_cap must be unlimited or ceil_log2, got '" + value + "'");
        }
      } else if (key == "fnr_order") {
        c.fnr_order = to_count(key, value);
      } else if (key == "node_budget") {
        c.node_budget = to_count(key, value);
      } else if (key == "embed_order") {
        c.embed_order = to_count(key, value);
      } else if (key == "component") {
        if (value == "x") {
          c.component = 0;
        } else if (value == "y") {
          c.component = 1;
        } else if (value == "z") {
          c.component = 2;
        } else {
          c.component = to_count(key, value);
        }
      } else if (key == "dim") {
        c.dim = to_count(key, value);
      } else if (key == "noise_variance") {
        c.noise_variance = to_real(key, value);
      } else if (key == "h") {
        if (value == "auto") {
          c.h.reset();
        } else {
          c.h = to_real(key, value);
        }
      } else if (key == "out") {
        c.out = value;
      } else if (key == "trace") {
        c.trace = to_bool(key, value);
      } else if (key == "checkpoints") {
        c.checkpoints.clear();
        for (const auto& tok : split_list(value)) c.checkpoints.push_back(to_count(key, tok));
      } else if (key == "enumeration_limit") {
        c.enumeration_limit = to_count(key, value);
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "source = " << c.source << '\n';
  if (!c.csv_path.empty()) os << "csv = \"" << c.csv_path << "\"\n";
  if (!c.target.empty()) os << "target = " << c.target << '\n';
  os << "n = " << c.n << '\n';
  os << "seed = " << c.seed << '\n';
  os << "trials = " << c.trials << '\n';
  os << "regressors = ";
  for (std::size_t i = 0; i < c.regressors.size(); ++i) os << (i ? ", " : "") << c.regressors[i].name();
  os << '\n';
  os << "A = " << format_double(c.bound) << '\n';
  os << "a = " << format_double(c.weighting_scale()) << '\n';
  os << "delta = " << format_double(c.delta) << '\n';
  os << "depth_cap = " << (c.depth_cap == DepthCap::ceil_log2 ? "ceil_log2" : "unlimited") << '\n';
  os << "fnr_order = " << c.fnr_order << '\n';
  os << "node_budget = " << c.node_budget << '\n';
  os << "embed_order = " << c.embed_order << '\n';
  os << "component = " << c.component << '\n';
  os << "dim = " << c.dim << '\n';
  os << "noise_variance = " << format_double(c.noise_variance) << '\n';
  os << "h = " << (c.h ? format_double(*c.h) : std::string("auto")) << '\n';
  os << "out = \"" << c.out.string() << "\"\n";
  os << "trace = " << (c.trace ? "true" : "false") << '\n';
  if (!c.checkpoints.empty()) {
    os << "checkpoints = ";
    for (std::size_t i = 0; i < c.checkpoints.size(); ++i) os << (i ? ", " : "") << c.checkpoints[i];
    os << '\n';
  }
  os << "enumeration_limit = " << c.enumeration_limit << '\n';
  return os.str();
}

std::optional<Series> make_series(const ExperimentConfig& c) {
  const std::size_t len = c.n + c.embed_order;
  if (c.source == "duffing") return gen_duffing(len);
  if (c.source == "tinkerbell") return gen_tinkerbell(len);
  if (c.source == "mackey_glass") {
    MackeyGlassParams p;
    if (c.h) p.h = *c.h;
    return gen_mackey_glass(len, p);
  }
  if (c.source == "chua") {
    ChuaParams p;
    if (c.h) p.h = *c.h;
    return gen_chua(len, p);
  }
  return std::nullopt;
}

RegressionStream make_stream(const ExperimentConfig& c, std::uint64_t seed) {
  c.validate();
  RegressionStream s;
  if (c.source == "synthetic") {
    s = gen_synthetic(c.n, seed);
  } else if (c.source == "sine") {
    s = gen_sine(c.n, seed, c.noise_variance);
  } else if (c.source == "uniform") {
    s = gen_uniform(c.n, c.dim, seed);
  } else if (c.source == "forced") {
    s = gen_forced(c.n, c.dim, seed);
  } else if (c.source == "csv") {
    s = load_csv(c.csv_path, c.target);
    if (c.n > 0 && c.n < s.size()) {
      s.d.resize(c.n);
      s.x.resize(c.n * s.p);
    }
  } else {
    s = embed_series(*make_series(c), c.embed_order, c.component);
  }
  if (s.bound != c.bound) {
    for (auto& v : s.x) v = std::clamp(v, -c.bound, c.bound);
    s.bound = c.bound;
  }
  return s;
}

std::vector<std::unique_ptr<Regressor>> make_regressors(const ExperimentConfig& c, std::size_t p) {
  std::vector<std::unique_ptr<Regressor>> out;
  for (const auto& spec : c.regressors) {
    switch (spec.kind) {
      case RegressorSpec::Kind::idt:
        out.push_back(std::make_unique<IdtRegressor>(c.tree_config(p), "idt"));
        break;
      case RegressorSpec::Kind::ctw:
        out.push_back(std::make_unique<IdtRegressor>(fixed_tree_regressor(spec.depth, c.tree_config(p), c.node_budget)));
        break;
      case RegressorSpec::Kind::lr:
        out.push_back(std::make_unique<FeatureRegressor>(FeatureMap::identity(p), c.delta, "lr"));
        break;
      case RegressorSpec::Kind::vsr:
        out.push_back(std::make_unique<FeatureRegressor>(FeatureMap::volterra2(p), c.delta, "vsr"));
        break;
      case RegressorSpec::Kind::fnr:
        out.push_back(std::make_unique<FeatureRegressor>(FeatureMap::fourier(p, c.fnr_order), c.delta, "fnr"));
        break;
    }
  }
  return out;
}

std::size_t RunReport::index_of(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("no regressor named " + name);
  return static_cast<std::size_t>(it - names.begin());
}

namespace {

struct TrialOutput {
  std::vector<std::vector<double>> cumulative;
  std::vector<double> touched;
  std::vector<double> seconds;
  std::vector<std::vector<StepTrace>> traces;
};

TrialOutput run_trial(const ExperimentConfig& c, const RegressionStream& stream, bool keep_traces) {
  auto regs = make_regressors(c, stream.p);
  TrialOutput out;
  out.cumulative.resize(regs.size());
  out.traces.resize(regs.size());
  const std::uint64_t expected = stream.fingerprint();
  for (std::size_t r = 0; r < regs.size(); ++r) {
    Regressor& reg = *regs[r];
    auto* tree_reg = dynamic_cast<IdtRegressor*>(&reg);
    auto& cum = out.cumulative[r];
    cum.resize(stream.size());
    double total = 0.0;
    double touched = 0.0;
    // Each regressor hashes what it consumed; all must match the stream.
    RegressionStream seen;
    seen.p = stream.p;
    seen.x.reserve(stream.x.size());
    seen.d.reserve(stream.size());
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < stream.size(); ++i) {
      const auto x = stream.row(i);
      const double d = stream.d[i];
      seen.x.insert(seen.x.end(), x.begin(), x.end());
      seen.d.push_back(d);
      double err = 0.0;
      if (keep_traces && tree_reg) {
        out.traces[r].push_back(tree_reg->step(x, d));
        err = out.traces[r].back().sqerr;
      } else {
        const double dhat = reg.predict(x);
        reg.update(d);
        err = (d - dhat) * (d - dhat);
      }
      touched += static_cast<double>(reg.last_touched());
      total += err;
      cum[i] = total;
    }
    const auto t1 = std::chrono::steady_clock::now();
    if (seen.fingerprint() != expected) {
      throw std::logic_error("regressor " + reg.name() + " consumed a different stream");
    }
    out.touched.push_back(touched / static_cast<double>(std::max<std::size_t>(stream.size(), 1)));
    out.seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  return out;
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<StepTrace>& traces) {
  std::size_t depth = 0;
  for (const auto& t : traces) depth = std::max(depth, t.depth());
  std::ofstream os(path);
  os << "t,depth,d,dhat,sqerr,logPlambda";
  for (std::size_t i = 0; i <= depth; ++i) os << ",mu_" << i;
  os << '\n';
  for (const auto& t : traces) {
    os << t.t << ',' << t.depth() << ',' << format_double(t.d) << ',' << format_double(t.dhat) << ','
       << format_double(t.sqerr) << ',' << format_double(t.log_root_after);
    for (std::size_t i = 0; i <= depth; ++i) {
      os << ',';
      if (i < t.mu.size()) os << format_double(t.mu[i]);
    }
    os << '\n';
  }
}

void write_plot_script(const std::filesystem::path& path) {
  std::ofstream os(path);
  os << R"(#!/usr/bin/env python3
# Plots the normalized accumulated squared error curves in errors.csv.
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "errors.csv"
with open(path) as f:
    rows = list(csv.reader(f))
header, data = rows[0], rows[1:]
t = [int(r[0]) for r in data]
for j, name in enumerate(header[1:], start=1):
    plt.plot(t, [float(r[j]) for r in data], label=name)
plt.xscale("log")
plt.xlabel("data length n")
plt.ylabel("normalized accumulated squared error")
plt.legend()
plt.grid(True, which="both", alpha=0.3)
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
)";
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& c) {
  c.validate();
  RunReport report;
  for (const auto& r : c.regressors) report.names.push_back(r.name());
  const std::size_t R = report.names.size();
  report.normalized.resize(R);
  report.mean_touched.assign(R, 0.0);
  report.seconds.assign(R, 0.0);

  for (std::size_t trial = 0; trial < c.trials; ++trial) {
    const RegressionStream stream = make_stream(c, c.seed + trial);
    if (trial == 0) {
      report.n = stream.size();
      for (auto& v : report.normalized) v.assign(report.n, 0.0);
    } else if (stream.size() != report.n) {
      throw DataError("trials produced streams of different lengths");
    }
    const TrialOutput out = run_trial(c, stream, false);
    if (trial == 0) report.fingerprints.assign(R, stream.fingerprint());
    for (std::size_t r = 0; r < R; ++r) {
      for (std::size_t i = 0; i < report.n; ++i) {
        report.normalized[r][i] += out.cumulative[r][i] / static_cast<double>(i + 1);
      }
      report.mean_touched[r] += out.touched[r] / static_cast<double>(c.trials);
      report.seconds[r] += out.seconds[r];
    }
  }
  const auto k = static_cast<double>(c.trials);
  for (auto& v : report.normalized) {
    for (auto& e : v) e /= k;
  }
  return report;
}

RunReport run(const ExperimentConfig& c) {
  const RunReport report = run_experiment(c);
  std::filesystem::create_directories(c.out);

  {
    std::ofstream os(c.out / "errors.csv");
    os << 't';
    for (const auto& name : report.names) os << ',' << name;
    os << '\n';
    for (std::size_t i = 0; i < report.n; ++i) {
      os << (i + 1);
      for (const auto& v : report.normalized) os << ',' << format_double(v[i]);
      os << '\n';
    }
  }
  {
    std::ofstream os(c.out / "summary.txt");
    os << "regressor,final_normalized_error,mean_touched_nodes,seconds\n";
    for (std::size_t r = 0; r < report.names.size(); ++r) {
      os << report.names[r] << ',' << format_double(report.final_error(r)) << ','
         << format_double(report.mean_touched[r]) << ',' << format_double(report.seconds[r]) << '\n';
    }
    os << "\ncheckpoint";
    for (const auto& name : report.names) os << ',' << name;
    os << '\n';
    for (std::size_t t = 1; t <= report.n; t *= 2) {
      os << t;
      for (const auto& v : report.normalized) os << ',' << format_double(v[t - 1]);
      os << '\n';
    }
  }
  {
    std::ofstream os(c.out / "config.txt");
    os << serialize_config(c);
  }
  write_plot_script(c.out / "plot_errors.py");

  if (c.trace) {
    const RegressionStream stream = make_stream(c, c.seed);
    const TrialOutput out = run_trial(c, stream, true);
    for (std::size_t r = 0; r < report.names.size(); ++r) {
      if (!out.traces[r].empty()) write_trace_csv(c.out / ("trace_" + report.names[r] + ".csv"), out.traces[r]);
    }
  }
  return report;
}

bool AuditReport::passed() const {
  return jensen_violations == 0 && worst_simplex_error <= 1e-9 && (!exact || exact->holds()) && growth_bounded;
}

AuditReport audit(const ExperimentConfig& c) {
  c.validate();
  const RegressionStream stream = make_stream(c, c.seed);
  IdtRegressor reg(c.tree_config(stream.p), "idt");
  GrowthAudit growth(audit_checkpoints(c));

  AuditReport report;
  report.steps = stream.size();
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const StepTrace tr = reg.step(stream.row(i), stream.d[i]);
    const double mu_sum = std::accumulate(tr.mu.begin(), tr.mu.end(), 0.0);
    report.worst_simplex_error = std::max(report.worst_simplex_error, std::abs(mu_sum - 1.0));
    const double slack = reg.tree().log_loss_term(tr.d - tr.dhat) - (tr.log_root_after - tr.log_root_before);
    report.worst_jensen_slack = i == 0 ? slack : std::min(report.worst_jensen_slack, slack);
    if (slack < -1e-12) ++report.jensen_violations;
    growth.record(tr.t, tr.sqerr, reg.tree());
  }
  report.growth = growth.results();
  report.growth_bounded = growth.bounded();
  if (reg.tree().size() <= c.enumeration_limit) {
    report.exact = exact_regret_audit(reg.tree(), stream.size(), {c.enumeration_limit, std::size_t{1} << 22});
  }

  std::filesystem::create_directories(c.out);
  std::ofstream os(c.out / "audit.txt");
  os << "steps " << report.steps << '\n';
  os << "jensen_step " << (report.jensen_violations == 0 ? "PASS" : "FAIL")
     << " violations=" << report.jensen_violations << " worst_slack=" << format_double(report.worst_jensen_slack)
     << '\n';
  os << "mixture_simplex " << (report.worst_simplex_error <= 1e-9 ? "PASS" : "FAIL")
     << " worst_error=" << format_double(report.worst_simplex_error) << '\n';
  if (report.exact) {
    const auto& e = *report.exact;
    os << "exact_bound " << (e.holds() ? "PASS" : "FAIL") << " lhs=" << format_double(e.lhs)
       << " rhs_log2=" << format_double(e.base2.rhs) << " best_model_log2_leaves="
       << e.models[e.base2.best_model].size() << " rhs_ln=" << format_double(e.natural.rhs)
       << " holds_ln=" << (e.natural.holds ? "yes" : "no") << " models=" << e.models.size() << '\n';
  } else {
    os << "exact_bound SKIPPED tree_nodes=" << reg.tree().size() << " limit=" << c.enumeration_limit << '\n';
  }
  os << "growth_bound " << (report.growth_bounded ? "PASS" : "FAIL") << '\n';
  os << "n,algorithm_loss,comparator_loss,comparator_leaves,regret,regret_over_p_log2sq,envelope\n";
  for (const auto& g : report.growth) {
    os << g.n << ',' << format_double(g.algorithm_loss) << ',' << format_double(g.comparator_loss) << ','
       << g.comparator_leaves << ',' << format_double(g.regret) << ',' << format_double(g.normalised) << ','
       << format_double(g.envelope) << '\n';
  }
  return report;
}

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  if (xs.size() < 2) return {};
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r_squared = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

CostReport profile_steps(const ExperimentConfig& c) {
  c.validate();
  const auto spec = std::find_if(c.regressors.begin(), c.regressors.end(), is_tree);
  if (spec == c.regressors.end()) throw ConfigError("cost profiling needs an idt or ctw regressor");
  const RegressionStream stream = make_stream(c, c.seed);
  IdtRegressor reg = spec->kind == RegressorSpec::Kind::idt
                         ? IdtRegressor(c.tree_config(stream.p), "idt")
                         : fixed_tree_regressor(spec->depth, c.tree_config(stream.p), c.node_budget);

  CostReport report;
  report.regressor = reg.name();
  report.touched.reserve(stream.size());
  report.replayed.reserve(stream.size());
  report.nanos.reserve(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    reg.predict(stream.row(i));
    reg.update(stream.d[i]);
    const auto t1 = std::chrono::steady_clock::now();
    report.touched.push_back(reg.last_touched());
    report.replayed.push_back(reg.last_replayed());
    report.nanos.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
  }

  std::vector<double> ks, means;
  for (unsigned k = 0; (std::uint64_t{1} << (k + 1)) - 1 <= stream.size(); ++k) {
    const std::size_t lo = std::size_t{1} << k;
    const std::size_t hi = std::size_t{1} << (k + 1);
    double sum = 0.0;
    for (std::size_t t = lo; t < hi; ++t) sum += static_cast<double>(report.touched[t - 1]);
    CostWindow w{k, sum / static_cast<double>(hi - lo), hi - lo};
    report.windows.push_back(w);
    ks.push_back(k);
    means.push_back(w.mean_touched);
  }
  report.fit = fit_line(ks, means);
  return report;
}

CostReport cost_profile(const ExperimentConfig& c) {
  CostReport report = profile_steps(c);
  std::filesystem::create_directories(c.out);
  {
    std::ofstream os(c.out / "cost.csv");
    os << "t,touched,replayed,nanos\n";
    for (std::size_t i = 0; i < report.touched.size(); ++i) {
      os << (i + 1) << ',' << report.touched[i] << ',' << report.replayed[i] << ','
         << format_double(report.nanos[i]) << '\n';
    }
  }
  {
    std::ofstream os(c.out / "cost_summary.txt");
    os << "regressor " << report.regressor << '\n';
    os << "k,window_start,mean_touched\n";
    for (const auto& w : report.windows) {
      os << w.k << ',' << (std::uint64_t{1} << w.k) << ',' << format_double(w.mean_touched) << '\n';
    }
    os << "fit slope=" << format_double(report.fit.slope) << " intercept=" << format_double(report.fit.intercept)
       << " r_squared=" << format_double(report.fit.r_squared) << '\n';
  }
  return report;
}

void gen(const ExperimentConfig& c) {
  c.validate();
  std::filesystem::create_directories(c.out);
  if (auto series = make_series(c)) {
    std::ofstream os(c.out / "series.csv");
    write_series_csv(os, *series);
  }
  const RegressionStream stream = make_stream(c, c.seed);
  std::ofstream os(c.out / "stream.csv");
  write_stream_csv(os, stream);
}

}  // namespace idt::bench
