#include "idt/tree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "idt/errors.hpp"
#include "idt/log_math.hpp"

namespace idt {

TreeConfig TreeConfig::defaults(std::size_t p, double bound) {
  TreeConfig c;
  c.p = p;
  c.bound = bound;
  c.a = 4.0 * bound * bound;
  return c;
}

void TreeConfig::validate() const {
  if (p == 0) throw ConfigError("dimension p must be positive");
  if (!(bound > 0.0) || !std::isfinite(bound)) throw ConfigError("bound A must be a positive finite number");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be a positive finite number");
  if (!std::isfinite(a) || a < 4.0 * bound * bound) {
    throw ConfigError("weighting scale a = " + std::to_string(a) + " violates a >= 4A^2 = " +
                      std::to_string(4.0 * bound * bound));
  }
}

std::size_t depth_limit(DepthCap cap, std::uint64_t t) {
  switch (cap) {
    case DepthCap::unlimited:
      return std::numeric_limits<std::size_t>::max();
    case DepthCap::ceil_log2:
      // ceil(log2(t + 1)) == bit_width(t) for t >= 0
      return static_cast<std::size_t>(std::bit_width(t));
  }
  return 0;
}

Tree::Tree(TreeConfig config) : config_(std::move(config)) {
  config_.validate();
  TreeNode root;
  root.region = Region::cube(config_.p, config_.bound);
  root.rls = RlsState::fresh(config_.p, config_.delta);
  nodes_.push_back(std::move(root));
}

Tree Tree::complete(TreeConfig config, std::size_t depth, std::size_t node_budget) {
  if (depth >= 63 || ((std::size_t{1} << (depth + 1)) - 1) > node_budget) {
    throw ConfigError("complete tree of depth " + std::to_string(depth) + " exceeds the node budget of " +
                      std::to_string(node_budget));
  }
  Tree tree(std::move(config));
  tree.growth_enabled_ = false;
  for (NodeId id = 0; id < tree.nodes_.size(); ++id) {
    if (tree.nodes_[id].depth < depth) tree.split(id);
  }
  return tree;
}

Tree Tree::with_shape_of(const Tree& shape) {
  Tree tree(shape.config_);
  tree.growth_enabled_ = false;
  tree.nodes_.clear();
  tree.nodes_.reserve(shape.nodes_.size());
  for (const auto& src : shape.nodes_) {
    TreeNode n;
    n.parent = src.parent;
    n.children = src.children;
    n.letter = src.letter;
    n.depth = src.depth;
    n.region = src.region;
    n.rls = RlsState::fresh(shape.config_.p, shape.config_.delta);
    tree.nodes_.push_back(std::move(n));
  }
  for (NodeId id = static_cast<NodeId>(tree.nodes_.size()); id-- > 0;) {
    auto& n = tree.nodes_[id];
    n.log_weight = n.is_leaf() ? n.log_loss
                               : log_inner_weight(tree.nodes_[n.children[0]].log_weight,
                                                  tree.nodes_[n.children[1]].log_weight, n.log_loss);
  }
  return tree;
}

Tree Tree::from_nodes(TreeConfig config, std::vector<TreeNode> nodes, bool growth_enabled,
                      std::optional<NodeId> pending) {
  Tree tree(std::move(config));
  if (nodes.empty()) throw DataError("tree checkpoint has no nodes");
  tree.nodes_ = std::move(nodes);
  tree.growth_enabled_ = growth_enabled;
  tree.pending_ = pending;
  return tree;
}

NodeLabel Tree::label(NodeId id) const {
  std::string bits(nodes_[id].depth, '0');
  for (NodeId cur = id; nodes_[cur].parent != kNoNode; cur = nodes_[cur].parent) {
    bits[nodes_[cur].depth - 1] = nodes_[cur].letter ? '1' : '0';
  }
  return NodeLabel::parse(bits);
}

std::optional<NodeId> Tree::find(const NodeLabel& label) const {
  NodeId cur = 0;
  for (std::size_t i = 0; i < label.length(); ++i) {
    const NodeId next = nodes_[cur].children[label.letter(i)];
    if (next == kNoNode) return std::nullopt;
    cur = next;
  }
  return cur;
}

std::vector<NodeId> Tree::locate_path(std::span<const double> x) const {
  std::vector<NodeId> path{0};
  NodeId cur = 0;
  while (!nodes_[cur].is_leaf()) {
    const NodeId lo = nodes_[cur].children[0];
    cur = nodes_[lo].region.contains(x, config_.bound) ? lo : nodes_[cur].children[1];
    path.push_back(cur);
  }
  return path;
}

NodeId Tree::add_child(NodeId parent, int letter, Region region) {
  TreeNode n;
  n.parent = parent;
  n.letter = letter;
  n.depth = nodes_[parent].depth + 1;
  n.region = std::move(region);
  n.rls = RlsState::fresh(config_.p, config_.delta);
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(n));
  nodes_[parent].children[letter] = id;
  return id;
}

void Tree::split(NodeId leaf) {
  auto [lo, hi] = split_region(nodes_[leaf].region, nodes_[leaf].depth, config_.split_rule);
  add_child(leaf, 0, std::move(lo));
  add_child(leaf, 1, std::move(hi));
}

GrowOutcome Tree::grow(NodeId leaf, std::span<const double> x, std::uint64_t t) {
  pending_.reset();
  GrowOutcome out{leaf, false, 0};
  if (!growth_enabled_) return out;

  if (nodes_[leaf].alpha == 0) {
    nodes_[leaf].alpha = 1;
    nodes_[leaf].buffer.push_back({t, {x.begin(), x.end()}, std::nullopt});
    pending_ = leaf;
    return out;
  }
  // Capped leaves keep learning as plain leaves and buffer nothing further.
  if (nodes_[leaf].depth + 1 > depth_limit(config_.depth_cap, t)) return out;

  split(leaf);
  const std::vector<BufferedSample> buffer = std::move(nodes_[leaf].buffer);
  nodes_[leaf].buffer.clear();
  for (NodeId c : nodes_[leaf].children) out.replayed += replay_train(c, buffer);
  refresh_weights_upward(leaf);

  const NodeId lo = nodes_[leaf].children[0];
  const NodeId hi = nodes_[leaf].children[1];
  const bool in_lo = nodes_[lo].region.contains(x, config_.bound);
  const NodeId active = in_lo ? lo : hi;
  nodes_[active].alpha = 1;
  nodes_[active].buffer.push_back({t, {x.begin(), x.end()}, std::nullopt});
  nodes_[in_lo ? hi : lo].alpha = 0;
  pending_ = active;

  out.leaf = active;
  out.split = true;
  return out;
}

std::size_t Tree::replay_train(NodeId child, std::span<const BufferedSample> buffer) {
  std::size_t used = 0;
  for (const auto& s : buffer) {
    auto& n = nodes_[child];
    if (!n.region.contains(s.x, config_.bound)) continue;
    if (!s.d) throw std::logic_error("replaying a buffered sample whose target was never revealed");
    const double pred = node_prediction(child, s.x);
    n.log_loss += log_loss_term(*s.d - pred);
    rls_update(n.rls, s.x, *s.d);
    n.log_weight = n.log_loss;
    ++used;
  }
  return used;
}

void Tree::refresh_weights_upward(NodeId from) {
  for (NodeId id = from; id != kNoNode; id = nodes_[id].parent) {
    auto& n = nodes_[id];
    n.log_weight = n.is_leaf() ? n.log_loss
                               : log_inner_weight(nodes_[n.children[0]].log_weight,
                                                  nodes_[n.children[1]].log_weight, n.log_loss);
  }
}

void Tree::attach_pending_target(double d) {
  if (!pending_) return;
  auto& buf = nodes_[*pending_].buffer;
  if (!buf.empty() && !buf.back().d) buf.back().d = d;
  pending_.reset();
}

double Tree::node_prediction(NodeId id, std::span<const double> x) const {
  const double y = rls_predict(nodes_[id].rls, x);
  if (!config_.clip_node_predictions) return y;
  return std::clamp(y, -config_.bound, config_.bound);
}

std::size_t Tree::max_depth() const {
  std::size_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

std::size_t Tree::light_node_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.alpha == 1; }));
}

std::vector<NodeId> Tree::leaves() const {
  std::vector<NodeId> out;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].is_leaf()) out.push_back(id);
  }
  return out;
}

}  // namespace idt
