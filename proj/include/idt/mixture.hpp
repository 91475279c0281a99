#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "idt/regressor.hpp"
#include "idt/tree.hpp"

namespace idt {

// Mixture weights over the active root-to-leaf path.
struct PathWeights {
  std::vector<NodeId> path;
  std::vector<double> log_pi;  // ln pi_i
  std::vector<double> mu;      // normalised weights, sum to one
  std::vector<double> preds;   // node outputs for the current x
};

// pi_0 = 1/2 (1 when the root is itself the leaf),
// pi_i = 1/2 * P(sibling of node i) * pi_{i-1} for inner path nodes,
// pi_l = P(sibling of the leaf) * pi_{l-1};
// mu_i = pi_i * L_i / P_root, evaluated in the log domain.
PathWeights prefix_weights(const Tree& tree, std::span<const NodeId> path);

// Fills the node outputs and returns sum_i mu_i * pred_i.
double predict(const Tree& tree, PathWeights& weights, std::span<const double> x);

// Leaf-to-root: ln L_i -= (d - pred_i)^2 / 2a, ln P recomputed, then the
// node model learns (x, d). Nodes off the path are untouched.
void update_path(Tree& tree, const PathWeights& weights, std::span<const double> x, double d);

struct StepTrace {
  std::uint64_t t = 0;
  NodeLabel leaf;  // path labels are the prefixes of this label
  std::vector<double> mu;
  std::vector<double> preds;
  double dhat = 0.0;
  double d = 0.0;
  double sqerr = 0.0;
  // ln P_root after the structural update of step t and after its weight
  // update. The previous step's log_root_after may differ from this step's
  // log_root_before when the tree grew.
  double log_root_before = 0.0;
  double log_root_after = 0.0;
  std::size_t touched = 0;
  std::size_t replayed = 0;
  bool split = false;

  std::size_t depth() const { return leaf.length(); }
};

// The incremental decision tree regressor. The same engine with growth
// disabled on a prebuilt complete tree is the fixed-depth context-tree
// baseline.
class IdtRegressor final : public Regressor {
 public:
  explicit IdtRegressor(TreeConfig config, std::string name = "idt");
  IdtRegressor(Tree tree, std::string name, std::uint64_t steps = 0);

  // Complete depth-d tree, no growth.
  static IdtRegressor fixed_depth(TreeConfig config, std::size_t depth,
                                  std::size_t node_budget = 1u << 22);

  std::string name() const override { return name_; }
  std::size_t input_dim() const override { return tree_.config().p; }

  // Throws InputError on NaN/inf or a wrong dimension.
  double predict(std::span<const double> x) override;
  void update(double d) override;
  std::size_t last_touched() const override { return weights_.path.size(); }

  // predict + update, returning the full per-step record.
  StepTrace step(std::span<const double> x, double d);

  const Tree& tree() const { return tree_; }
  std::uint64_t steps() const { return t_; }
  const PathWeights& last_weights() const { return weights_; }
  std::size_t last_replayed() const { return last_grow_.replayed; }

 private:
  Tree tree_;
  std::string name_;
  std::uint64_t t_ = 0;
  bool awaiting_target_ = false;
  std::vector<double> x_;
  PathWeights weights_;
  GrowOutcome last_grow_;
  double last_dhat_ = 0.0;
  double log_root_before_ = 0.0;
};

}  // namespace idt
