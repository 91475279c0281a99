#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace idt {

// All randomness goes through one mt19937_64. Uniforms use the top 53 bits;
// Gaussians use the Box-Muller transform with the pair cached.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double gaussian();                     // N(0, 1)

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Row-major multi-component time series.
struct Series {
  std::vector<std::string> names;
  std::vector<double> values;
  double dt = 1.0;
  std::string meta;

  std::size_t width() const { return names.size(); }
  std::size_t length() const { return names.empty() ? 0 : values.size() / names.size(); }
  double at(std::size_t t, std::size_t c) const { return values[t * width() + c]; }
  std::vector<double> component(std::size_t c) const;
};

// Ordered (x, d) pairs with x row-major, all inside [-bound, bound].
struct RegressionStream {
  std::size_t p = 0;
  double bound = 1.0;
  std::vector<double> x;
  std::vector<double> d;
  std::string meta;

  std::size_t size() const { return d.size(); }
  std::span<const double> row(std::size_t i) const { return {x.data() + i * p, p}; }
  // FNV-1a over the raw bytes of every pair.
  std::uint64_t fingerprint() const;
};

// Maps min -> -1 and max -> +1 in place; a constant column maps to 0.
// Returns false for a constant column.
bool normalize_minmax(std::span<double> column);
// Min-max normalises every x column and d; throws DataError when d is constant.
void normalize_stream(RegressionStream& stream);

// Piecewise-linear target with circular regions:
// x1 + x2 + noise when |x|^2 in [0, 0.1] or [0.5, 1], else -x1 - x2 + noise.
double synthetic_target(double x1, double x2, double noise);
// Gaussian regressors (identity covariance) and noise of variance 0.1,
// min-max normalised to [-1, 1].
RegressionStream gen_synthetic(std::size_t n, std::uint64_t seed);

struct DuffingParams {
  double a = 2.75;
  double b = 0.2;
  double x0 = 0.1;
  double x1 = 0.1;
};
// x[t+1] = a x[t] - x[t]^3 - b x[t-1]; the series starts with x0, x1.
Series gen_duffing(std::size_t n, const DuffingParams& params = {});

struct TinkerbellParams {
  double a = 0.9;
  double b = -0.6013;
  double c = 2.0;
  double d = 0.5;
  double x0 = -0.72;
  double y0 = -0.64;
};
std::pair<double, double> tinkerbell_step(double x, double y, const TinkerbellParams& params);
Series gen_tinkerbell(std::size_t n, const TinkerbellParams& params = {});

enum class DelayInterpolation {
  linear,
  // Cubic Hermite through the stored values and derivatives.
  hermite,
};

struct MackeyGlassParams {
  double beta = 2.0;
  double gamma = 1.0;
  double tau = 2.0;
  double order = 10.0;  // exponent of the delayed term
  double h = 0.1;
  double x0 = 0.5;  // also the constant history for t < 0
  DelayInterpolation interpolation = DelayInterpolation::hermite;
};
double mackey_glass_rhs(double x, double x_delayed, const MackeyGlassParams& params);
// One sample per RK4 step, starting with x(0).
Series gen_mackey_glass(std::size_t n, const MackeyGlassParams& params = {});

struct ChuaParams {
  double alpha = 15.6;
  double beta = 28.0;
  double m0 = -1.143;
  double m1 = -0.714;
  double h = 0.1;
  double x0 = 0.7;
  double y0 = 0.0;
  double z0 = 0.0;
};
double chua_nonlinearity(double x, double m0, double m1);
Series gen_chua(std::size_t n, const ChuaParams& params = {});

// x[t] = (s[t-1], ..., s[t-p]), d[t] = s[t] for the chosen component, then
// min-max normalised per column.
RegressionStream embed_series(const Series& series, std::size_t p, std::size_t component,
                              bool normalize = true);

// Uniform regressors on [-1, 1]^p with uniform targets (cost profiling).
RegressionStream gen_uniform(std::size_t n, std::size_t p, std::uint64_t seed);
// x = (A, ..., A) every step: forces a split at every step after the first.
RegressionStream gen_forced(std::size_t n, std::size_t p, std::uint64_t seed);
// d = sin(pi x) + noise on x ~ U[-1, 1], d clamped to [-1, 1].
RegressionStream gen_sine(std::size_t n, std::uint64_t seed, double noise_variance = 0.01);

// Header row then numeric rows. `target` names a column or gives its
// zero-based index; every other column becomes a regressor. All columns are
// min-max normalised to [-1, 1].
RegressionStream load_csv(const std::filesystem::path& path, const std::string& target);

std::string format_double(double v);  // 17 significant digits
void write_series_csv(std::ostream& os, const Series& series);
void write_stream_csv(std::ostream& os, const RegressionStream& stream);

}  // namespace idt
