#include "idt/mixture.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "idt/errors.hpp"
#include "idt/log_math.hpp"

namespace idt {

PathWeights prefix_weights(const Tree& tree, std::span<const NodeId> path) {
  PathWeights w;
  w.path.assign(path.begin(), path.end());
  const std::size_t l = path.size() - 1;
  w.log_pi.resize(path.size());
  w.mu.resize(path.size());

  w.log_pi[0] = l == 0 ? 0.0 : -kLn2;
  for (std::size_t i = 1; i <= l; ++i) {
    const TreeNode& node = tree.node(path[i]);
    const TreeNode& parent = tree.node(path[i - 1]);
    const NodeId sibling = parent.children[1 - node.letter];
    w.log_pi[i] = w.log_pi[i - 1] + tree.node(sibling).log_weight + (i < l ? -kLn2 : 0.0);
  }

  const double log_root = tree.log_root_weight();
  for (std::size_t i = 0; i <= l; ++i) {
    w.mu[i] = std::exp(w.log_pi[i] + tree.node(path[i]).log_loss - log_root);
  }
  return w;
}

double predict(const Tree& tree, PathWeights& weights, std::span<const double> x) {
  weights.preds.resize(weights.path.size());
  double dhat = 0.0;
  for (std::size_t i = 0; i < weights.path.size(); ++i) {
    weights.preds[i] = tree.node_prediction(weights.path[i], x);
    dhat += weights.mu[i] * weights.preds[i];
  }
  return dhat;
}

void update_path(Tree& tree, const PathWeights& weights, std::span<const double> x, double d) {
  for (std::size_t i = weights.path.size(); i-- > 0;) {
    const NodeId id = weights.path[i];
    TreeNode& n = tree.node(id);
    n.log_loss += tree.log_loss_term(d - weights.preds[i]);
    n.log_weight = n.is_leaf() ? n.log_loss
                               : log_inner_weight(tree.node(n.children[0]).log_weight,
                                                  tree.node(n.children[1]).log_weight, n.log_loss);
    rls_update(n.rls, x, d);
  }
}

IdtRegressor::IdtRegressor(TreeConfig config, std::string name)
    : tree_(std::move(config)), name_(std::move(name)) {}

IdtRegressor::IdtRegressor(Tree tree, std::string name, std::uint64_t steps)
    : tree_(std::move(tree)), name_(std::move(name)), t_(steps) {}

IdtRegressor IdtRegressor::fixed_depth(TreeConfig config, std::size_t depth, std::size_t node_budget) {
  return IdtRegressor(Tree::complete(std::move(config), depth, node_budget), "ctw" + std::to_string(depth));
}

double IdtRegressor::predict(std::span<const double> x) {
  if (awaiting_target_) throw std::logic_error("predict called twice without update");
  if (x.size() != tree_.config().p) {
    throw InputError("regressor has dimension " + std::to_string(x.size()) + ", expected " +
                     std::to_string(tree_.config().p));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw InputError("non-finite regressor component");
  }
  x_.assign(x.begin(), x.end());
  clip_to_cube(x_, tree_.config().bound);
  ++t_;

  const std::vector<NodeId> path = tree_.locate_path(x_);
  last_grow_ = tree_.grow(path.back(), x_, t_);
  if (last_grow_.split) {
    weights_ = prefix_weights(tree_, tree_.locate_path(x_));
  } else {
    weights_ = prefix_weights(tree_, path);
  }
  log_root_before_ = tree_.log_root_weight();
  last_dhat_ = idt::predict(tree_, weights_, x_);
  awaiting_target_ = true;
  return last_dhat_;
}

void IdtRegressor::update(double d) {
  if (!awaiting_target_) throw std::logic_error("update called without a preceding predict");
  if (!std::isfinite(d)) throw InputError("non-finite target value");
  update_path(tree_, weights_, x_, d);
  tree_.attach_pending_target(d);
  awaiting_target_ = false;
}

StepTrace IdtRegressor::step(std::span<const double> x, double d) {
  if (!std::isfinite(d)) throw InputError("non-finite target value");
  StepTrace tr;
  tr.dhat = predict(x);
  update(d);
  tr.t = t_;
  tr.leaf = tree_.label(weights_.path.back());
  tr.mu = weights_.mu;
  tr.preds = weights_.preds;
  tr.d = d;
  tr.sqerr = (d - tr.dhat) * (d - tr.dhat);
  tr.log_root_before = log_root_before_;
  tr.log_root_after = tree_.log_root_weight();
  tr.touched = weights_.path.size();
  tr.replayed = last_grow_.replayed;
  tr.split = last_grow_.split;
  return tr;
}

}  // namespace idt
