#include "idt/baselines.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "idt/errors.hpp"

namespace idt {

FeatureMap FeatureMap::identity(std::size_t p) { return {Kind::identity, p, 1}; }

FeatureMap FeatureMap::volterra2(std::size_t p) { return {Kind::volterra2, p, 2}; }

FeatureMap FeatureMap::fourier(std::size_t p, std::size_t order) {
  if (order == 0) throw ConfigError("fourier feature order must be positive");
  return {Kind::fourier, p, order};
}

std::size_t FeatureMap::output_dim() const {
  switch (kind_) {
    case Kind::identity:
      return p_ + 1;
    case Kind::volterra2:
      return 1 + p_ + p_ * (p_ + 1) / 2;
    case Kind::fourier:
      return 1 + 2 * order_ * p_;
  }
  return 0;
}

void FeatureMap::apply(std::span<const double> x, std::span<double> out) const {
  std::size_t k = 0;
  out[k++] = 1.0;
  switch (kind_) {
    case Kind::identity:
      for (double v : x) out[k++] = v;
      break;
    case Kind::volterra2:
      for (double v : x) out[k++] = v;
      for (std::size_t i = 0; i < p_; ++i) {
        for (std::size_t j = i; j < p_; ++j) out[k++] = x[i] * x[j];
      }
      break;
    case Kind::fourier:
      for (std::size_t i = 0; i < p_; ++i) {
        for (std::size_t f = 1; f <= order_; ++f) {
          const double arg = static_cast<double>(f) * std::numbers::pi * x[i];
          out[k++] = std::sin(arg);
          out[k++] = std::cos(arg);
        }
      }
      break;
  }
}

std::vector<double> FeatureMap::apply(std::span<const double> x) const {
  std::vector<double> out(output_dim());
  apply(x, out);
  return out;
}

FeatureRegressor::FeatureRegressor(FeatureMap map, double delta, std::string name)
    : map_(map), state_(RlsState::fresh(map.output_dim(), delta)), name_(std::move(name)),
      phi_(map.output_dim()) {}

double FeatureRegressor::predict(std::span<const double> x) {
  if (awaiting_target_) throw std::logic_error("predict called twice without update");
  if (x.size() != map_.input_dim()) throw InputError("regressor dimension mismatch");
  for (double v : x) {
    if (!std::isfinite(v)) throw InputError("non-finite regressor component");
  }
  map_.apply(x, phi_);
  awaiting_target_ = true;
  return rls_predict(state_, phi_);
}

void FeatureRegressor::update(double d) {
  if (!awaiting_target_) throw std::logic_error("update called without a preceding predict");
  if (!std::isfinite(d)) throw InputError("non-finite target value");
  rls_update(state_, phi_, d);
  awaiting_target_ = false;
}

IdtRegressor fixed_tree_regressor(std::size_t depth, TreeConfig config, std::size_t node_budget) {
  return IdtRegressor::fixed_depth(std::move(config), depth, node_budget);
}

}  // namespace idt
