#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "idt/mixture.hpp"
#include "idt/regressor.hpp"
#include "idt/rls.hpp"

namespace idt {

// Deterministic feature expansion; every kind starts with a constant 1.
class FeatureMap {
 public:
  enum class Kind { identity, volterra2, fourier };

  static FeatureMap identity(std::size_t p);
  // 1, x_i, and x_i x_j for i <= j.
  static FeatureMap volterra2(std::size_t p);
  // 1, then sin(k pi x_i), cos(k pi x_i) for k = 1..order per dimension.
  static FeatureMap fourier(std::size_t p, std::size_t order);

  Kind kind() const { return kind_; }
  std::size_t input_dim() const { return p_; }
  std::size_t output_dim() const;
  std::size_t order() const { return order_; }

  void apply(std::span<const double> x, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> x) const;

 private:
  FeatureMap(Kind kind, std::size_t p, std::size_t order) : kind_(kind), p_(p), order_(order) {}
  Kind kind_;
  std::size_t p_;
  std::size_t order_;
};

// RLS on a fixed feature expansion (LR, VSR, FNR).
class FeatureRegressor final : public Regressor {
 public:
  FeatureRegressor(FeatureMap map, double delta, std::string name);

  std::string name() const override { return name_; }
  std::size_t input_dim() const override { return map_.input_dim(); }
  double predict(std::span<const double> x) override;
  void update(double d) override;

  const RlsState& state() const { return state_; }
  const FeatureMap& map() const { return map_; }

 private:
  FeatureMap map_;
  RlsState state_;
  std::string name_;
  std::vector<double> phi_;
  bool awaiting_target_ = false;
};

// Context-tree regressor over the complete depth-d midpoint partition; runs
// the same mixture engine as the incremental tree with growth disabled.
IdtRegressor fixed_tree_regressor(std::size_t depth, TreeConfig config, std::size_t node_budget = 1u << 22);

}  // namespace idt
