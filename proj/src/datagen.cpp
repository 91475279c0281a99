#include "idt/datagen.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "idt/errors.hpp"

namespace idt {

namespace {

constexpr double kDivergenceLimit = 1e3;

void guard(double v, const char* generator, std::size_t t) {
  if (!std::isfinite(v) || std::abs(v) > kDivergenceLimit) {
    throw DataError(std::string(generator) + " diverged at step " + std::to_string(t) +
                    " (value " + format_double(v) + ")");
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the argument of the log in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::vector<double> Series::component(std::size_t c) const {
  std::vector<double> out(length());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = at(t, c);
  return out;
}

std::uint64_t RegressionStream::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  };
  for (std::size_t i = 0; i < size(); ++i) {
    for (double v : row(i)) mix(v);
    mix(d[i]);
  }
  return h;
}

bool normalize_minmax(std::span<double> column) {
  if (column.empty()) return false;
  const auto [lo_it, hi_it] = std::minmax_element(column.begin(), column.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) {
    std::fill(column.begin(), column.end(), 0.0);
    return false;
  }
  const double span = hi - lo;
  for (double& v : column) {
    if (v == lo) {
      v = -1.0;
    } else if (v == hi) {
      v = 1.0;
    } else {
      v = std::clamp(2.0 * (v - lo) / span - 1.0, -1.0, 1.0);
    }
  }
  return true;
}

void normalize_stream(RegressionStream& stream) {
  const std::size_t n = stream.size();
  std::vector<double> col(n);
  for (std::size_t j = 0; j < stream.p; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = stream.x[i * stream.p + j];
    normalize_minmax(col);
    for (std::size_t i = 0; i < n; ++i) stream.x[i * stream.p + j] = col[i];
  }
  if (!normalize_minmax(stream.d)) throw DataError("target column is constant; normalisation is degenerate");
  stream.bound = 1.0;
}

double synthetic_target(double x1, double x2, double noise) {
  const double r2 = x1 * x1 + x2 * x2;
  const bool inner = (r2 >= 0.0 && r2 <= 0.1) || (r2 >= 0.5 && r2 <= 1.0);
  return inner ? x1 + x2 + noise : -x1 - x2 + noise;
}

RegressionStream gen_synthetic(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("synthetic stream needs n >= 1");
  Rng rng(seed);
  RegressionStream s;
  s.p = 2;
  s.x.resize(2 * n);
  s.d.resize(n);
  const double noise_sd = std::sqrt(0.1);
  for (std::size_t t = 0; t < n; ++t) {
    const double x1 = rng.gaussian();
    const double x2 = rng.gaussian();
    const double noise = noise_sd * rng.gaussian();
    s.x[2 * t] = x1;
    s.x[2 * t + 1] = x2;
    s.d[t] = synthetic_target(x1, x2, noise);
  }
  normalize_stream(s);
  s.meta = "synthetic n=" + std::to_string(n) + " seed=" + std::to_string(seed);
  return s;
}

Series gen_duffing(std::size_t n, const DuffingParams& params) {
  Series s;
  s.names = {"x"};
  s.values.reserve(n);
  if (n > 0) s.values.push_back(params.x0);
  if (n > 1) s.values.push_back(params.x1);
  for (std::size_t t = 2; t < n; ++t) {
    const double x = s.values[t - 1];
    const double next = params.a * x - x * x * x - params.b * s.values[t - 2];
    guard(next, "duffing", t);
    s.values.push_back(next);
  }
  s.meta = "duffing a=" + format_double(params.a) + " b=" + format_double(params.b) +
           " x0=" + format_double(params.x0) + " x1=" + format_double(params.x1);
  return s;
}

std::pair<double, double> tinkerbell_step(double x, double y, const TinkerbellParams& p) {
  return {x * x - y * y + p.a * x + p.b * y, 2.0 * x * y + p.c * x + p.d * y};
}

Series gen_tinkerbell(std::size_t n, const TinkerbellParams& params) {
  Series s;
  s.names = {"x", "y"};
  s.values.reserve(2 * n);
  double x = params.x0;
  double y = params.y0;
  for (std::size_t t = 0; t < n; ++t) {
    s.values.push_back(x);
    s.values.push_back(y);
    std::tie(x, y) = tinkerbell_step(x, y, params);
    guard(x, "tinkerbell", t + 1);
    guard(y, "tinkerbell", t + 1);
  }
  s.meta = "tinkerbell a=" + format_double(params.a) + " b=" + format_double(params.b) +
           " c=" + format_double(params.c) + " d=" + format_double(params.d) +
           " init=(" + format_double(params.x0) + "," + format_double(params.y0) + ")";
  return s;
}

double mackey_glass_rhs(double x, double x_delayed, const MackeyGlassParams& p) {
  return p.beta * x_delayed / (1.0 + std::pow(x_delayed, p.order)) - p.gamma * x;
}

Series gen_mackey_glass(std::size_t n, const MackeyGlassParams& p) {
  if (!(p.h > 0.0)) throw ConfigError("Mackey-Glass step h must be positive");
  const double ratio = p.tau / p.h;
  const auto lag = static_cast<std::ptrdiff_t>(std::llround(ratio));
  if (lag <= 0 || std::abs(ratio - static_cast<double>(lag)) > 1e-9 * ratio) {
    throw ConfigError("Mackey-Glass step h must divide tau");
  }

  std::vector<double> x;
  std::vector<double> dx;  // derivative at each grid point
  x.reserve(n);
  dx.reserve(n);
  if (n > 0) x.push_back(p.x0);

  // Delayed value at grid index j, or at the midpoint of [j, j+1] when
  // `half`. Negative times read the constant history.
  auto delayed = [&](std::ptrdiff_t j, bool half) {
    if (j < 0) return p.x0;
    const auto u = static_cast<std::size_t>(j);
    if (!half) return x[u];
    if (p.interpolation == DelayInterpolation::linear) return 0.5 * (x[u] + x[u + 1]);
    return 0.5 * (x[u] + x[u + 1]) + p.h * (dx[u] - dx[u + 1]) / 8.0;
  };

  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(k) - lag;
    const double xk = x[k];
    const double k1 = mackey_glass_rhs(xk, delayed(j, false), p);
    dx.push_back(k1);
    const double mid = delayed(j, true);
    const double k2 = mackey_glass_rhs(xk + 0.5 * p.h * k1, mid, p);
    const double k3 = mackey_glass_rhs(xk + 0.5 * p.h * k2, mid, p);
    const double k4 = mackey_glass_rhs(xk + p.h * k3, delayed(j + 1, false), p);
    const double next = xk + p.h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    guard(next, "mackey-glass", k + 1);
    x.push_back(next);
  }

  Series s;
  s.names = {"x"};
  s.values = std::move(x);
  s.dt = p.h;
  s.meta = "mackey-glass beta=" + format_double(p.beta) + " gamma=" + format_double(p.gamma) +
           " tau=" + format_double(p.tau) + " order=" + format_double(p.order) + " h=" + format_double(p.h) +
           " interpolation=" + (p.interpolation == DelayInterpolation::linear ? "linear" : "hermite");
  return s;
}

double chua_nonlinearity(double x, double m0, double m1) {
  return m1 * x + 0.5 * (m0 - m1) * (std::abs(x + 1.0) - std::abs(x - 1.0));
}

Series gen_chua(std::size_t n, const ChuaParams& p) {
  if (!(p.h > 0.0)) throw ConfigError("Chua step h must be positive");
  using State = std::array<double, 3>;
  auto rhs = [&p](const State& s) -> State {
    return {p.alpha * (s[1] - s[0] - chua_nonlinearity(s[0], p.m0, p.m1)), s[0] - s[1] + s[2], -p.beta * s[1]};
  };
  auto axpy = [](const State& s, double h, const State& k) -> State {
    return {s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]};
  };

  Series out;
  out.names = {"x", "y", "z"};
  out.dt = p.h;
  out.values.reserve(3 * n);
  State s{p.x0, p.y0, p.z0};
  for (std::size_t t = 0; t < n; ++t) {
    out.values.insert(out.values.end(), s.begin(), s.end());
    const State k1 = rhs(s);
    const State k2 = rhs(axpy(s, 0.5 * p.h, k1));
    const State k3 = rhs(axpy(s, 0.5 * p.h, k2));
    const State k4 = rhs(axpy(s, p.h, k3));
    for (std::size_t i = 0; i < 3; ++i) {
      s[i] += p.h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      guard(s[i], "chua", t + 1);
    }
  }
  out.meta = "chua alpha=" + format_double(p.alpha) + " beta=" + format_double(p.beta) +
             " m0=" + format_double(p.m0) + " m1=" + format_double(p.m1) + " h=" + format_double(p.h);
  return out;
}

RegressionStream embed_series(const Series& series, std::size_t p, std::size_t component, bool normalize) {
  if (p == 0) throw ConfigError("embedding order must be positive");
  if (component >= series.width()) throw ConfigError("series has no component " + std::to_string(component));
  const std::size_t len = series.length();
  if (len < p + 1) {
    throw DataError("series of length " + std::to_string(len) + " is too short for embedding order " +
                    std::to_string(p));
  }
  RegressionStream s;
  s.p = p;
  const std::size_t n = len - p;
  s.x.resize(n * p);
  s.d.resize(n);
  for (std::size_t t = p; t < len; ++t) {
    const std::size_t i = t - p;
    for (std::size_t lag = 1; lag <= p; ++lag) s.x[i * p + lag - 1] = series.at(t - lag, component);
    s.d[i] = series.at(t, component);
  }
  if (normalize) normalize_stream(s);
  s.meta = series.meta + " | embed p=" + std::to_string(p) + " component=" + series.names[component];
  return s;
}

RegressionStream gen_uniform(std::size_t n, std::size_t p, std::uint64_t seed) {
  Rng rng(seed);
  RegressionStream s;
  s.p = p;
  s.x.resize(n * p);
  s.d.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t j = 0; j < p; ++j) s.x[t * p + j] = rng.uniform(-1.0, 1.0);
    s.d[t] = rng.uniform(-1.0, 1.0);
  }
  s.meta = "uniform n=" + std::to_string(n) + " p=" + std::to_string(p) + " seed=" + std::to_string(seed);
  return s;
}

RegressionStream gen_forced(std::size_t n, std::size_t p, std::uint64_t seed) {
  Rng rng(seed);
  RegressionStream s;
  s.p = p;
  s.x.assign(n * p, 1.0);
  s.d.resize(n);
  for (auto& v : s.d) v = rng.uniform(-1.0, 1.0);
  s.meta = "forced n=" + std::to_string(n) + " p=" + std::to_string(p) + " seed=" + std::to_string(seed);
  return s;
}

RegressionStream gen_sine(std::size_t n, std::uint64_t seed, double noise_variance) {
  Rng rng(seed);
  RegressionStream s;
  s.p = 1;
  s.x.resize(n);
  s.d.resize(n);
  const double sd = std::sqrt(noise_variance);
  for (std::size_t t = 0; t < n; ++t) {
    const double x = rng.uniform(-1.0, 1.0);
    s.x[t] = x;
    s.d[t] = std::clamp(std::sin(std::numbers::pi * x) + sd * rng.gaussian(), -1.0, 1.0);
  }
  s.meta = "sine n=" + std::to_string(n) + " seed=" + std::to_string(seed) +
           " noise_variance=" + format_double(noise_variance);
  return s;
}

RegressionStream load_csv(const std::filesystem::path& path, const std::string& target) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open CSV file '" + path.string() + "'");

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) throw DataError("CSV file '" + path.string() + "' is empty");

  std::size_t target_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == target) target_col = c;
  }
  if (target_col == header.size()) {
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(target.data(), target.data() + target.size(), idx);
    if (ec != std::errc() || ptr != target.data() + target.size() || idx >= header.size()) {
      throw DataError("CSV file '" + path.string() + "' has no column '" + target + "'");
    }
    target_col = idx;
  }

  const std::size_t width = header.size();
  std::vector<std::vector<double>> cols(width);
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != width) {
      throw DataError("row " + std::to_string(line_no) + ": expected " + std::to_string(width) + " fields, got " +
                      std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        throw DataError("row " + std::to_string(line_no) + ": non-numeric field '" + fields[c] + "' in column '" +
                        header[c] + "'");
      }
      cols[c].push_back(v);
    }
  }
  if (cols[0].empty()) throw DataError("CSV file '" + path.string() + "' has no data rows");

  RegressionStream s;
  s.p = width - 1;
  const std::size_t n = cols[0].size();
  s.d = std::move(cols[target_col]);
  s.x.resize(n * s.p);
  std::size_t j = 0;
  for (std::size_t c = 0; c < width; ++c) {
    if (c == target_col) continue;
    for (std::size_t i = 0; i < n; ++i) s.x[i * s.p + j] = cols[c][i];
    ++j;
  }
  normalize_stream(s);
  s.meta = "csv " + path.string() + " target=" + header[target_col];
  return s;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_series_csv(std::ostream& os, const Series& series) {
  os << "t";
  for (const auto& name : series.names) os << ',' << name;
  os << '\n';
  for (std::size_t t = 0; t < series.length(); ++t) {
    os << t;
    for (std::size_t c = 0; c < series.width(); ++c) os << ',' << format_double(series.at(t, c));
    os << '\n';
  }
}

void write_stream_csv(std::ostream& os, const RegressionStream& stream) {
  for (std::size_t j = 0; j < stream.p; ++j) os << "x_" << (j + 1) << ',';
  os << "d\n";
  for (std::size_t i = 0; i < stream.size(); ++i) {
    for (double v : stream.row(i)) os << format_double(v) << ',';
    os << format_double(stream.d[i]) << '\n';
  }
}

}  // namespace idt
