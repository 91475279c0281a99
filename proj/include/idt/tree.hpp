#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "idt/label.hpp"
#include "idt/region.hpp"
#include "idt/rls.hpp"

namespace idt {

enum class DepthCap {
  unlimited,
  // At step t no node deeper than ceil(log2(t + 1)) is created.
  ceil_log2,
};

struct TreeConfig {
  std::size_t p = 1;
  double bound = 1.0;  // A: regressors and targets live in [-A, A]
  double a = 4.0;      // loss scale of the exponential weights, a >= 4A^2
  double delta = 1.0;  // ridge regulariser of every node model
  DepthCap depth_cap = DepthCap::unlimited;
  SplitRule split_rule = SplitRule::midpoint;
  // Node outputs entering the mixture are clamped to [-A, A]; this keeps
  // exp(-(d - y)^2 / 2a) concave over every node prediction.
  bool clip_node_predictions = true;

  // Defaults for dimension p and bound A, with a = 4A^2.
  static TreeConfig defaults(std::size_t p, double bound = 1.0);
  // Throws ConfigError.
  void validate() const;
};

// Largest depth a node may have at step t under the cap policy.
std::size_t depth_limit(DepthCap cap, std::uint64_t t);

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct BufferedSample {
  std::uint64_t t = 0;
  std::vector<double> x;
  // Filled in once the target of step t is revealed.
  std::optional<double> d;
};

struct TreeNode {
  NodeId parent = kNoNode;
  std::array<NodeId, 2> children{kNoNode, kNoNode};
  int letter = 0;  // last letter of the label; unused for the root
  std::size_t depth = 0;
  Region region;
  int alpha = 0;
  std::vector<BufferedSample> buffer;
  double log_loss = 0.0;    // ln L: -(1/2a) * accumulated squared loss
  double log_weight = 0.0;  // ln P
  RlsState rls;

  bool is_leaf() const { return children[0] == kNoNode; }
};

struct GrowOutcome {
  NodeId leaf = kNoNode;  // the leaf holding x after growth
  bool split = false;
  std::size_t replayed = 0;  // buffered samples replayed into the children
};

// Incrementally grown binary partition of [-A, A]^p. Nodes live in an
// append-only arena; node 0 is the root and nodes are never removed.
class Tree {
 public:
  explicit Tree(TreeConfig config);

  // Complete tree of the given depth, built upfront with growth disabled.
  // Throws ConfigError when 2^(depth+1) - 1 exceeds node_budget.
  static Tree complete(TreeConfig config, std::size_t depth, std::size_t node_budget = 1u << 22);

  // Fresh tree with the same node layout (labels, regions) as `shape` and
  // growth disabled.
  static Tree with_shape_of(const Tree& shape);

  const TreeConfig& config() const { return config_; }
  std::size_t size() const { return nodes_.size(); }
  NodeId root() const { return 0; }
  const TreeNode& node(NodeId id) const { return nodes_[id]; }
  TreeNode& node(NodeId id) { return nodes_[id]; }
  std::span<const TreeNode> nodes() const { return nodes_; }

  bool growth_enabled() const { return growth_enabled_; }
  void set_growth_enabled(bool on) { growth_enabled_ = on; }

  NodeLabel label(NodeId id) const;
  std::optional<NodeId> find(const NodeLabel& label) const;

  // Root-to-leaf path of the leaf whose region holds x. x must already lie
  // in [-A, A]^p.
  std::vector<NodeId> locate_path(std::span<const double> x) const;

  // Structural update for step t; `leaf` is the end of locate_path(x). May
  // split the leaf (replaying its buffer into the children) and refreshes
  // the weights of every ancestor when it does.
  GrowOutcome grow(NodeId leaf, std::span<const double> x, std::uint64_t t);

  // Trains a freshly created child on the parent's buffered samples that
  // fall into its region, in time order. Returns how many were used.
  std::size_t replay_train(NodeId child, std::span<const BufferedSample> buffer);

  // Recomputes ln P of `from` and all of its ancestors from their children.
  void refresh_weights_upward(NodeId from);

  // Stores the revealed target on the sample buffered during this step.
  void attach_pending_target(double d);

  // Node output used by the mixture (clamped per config).
  double node_prediction(NodeId id, std::span<const double> x) const;
  // exp(-e^2/2a) contribution in log form.
  double log_loss_term(double error) const { return -(error * error) / (2.0 * config_.a); }

  double log_root_weight() const { return nodes_[0].log_weight; }
  std::size_t max_depth() const;
  std::size_t light_node_count() const;
  std::vector<NodeId> leaves() const;

  // Rebuilds a tree from already-populated nodes (checkpoint loading).
  static Tree from_nodes(TreeConfig config, std::vector<TreeNode> nodes, bool growth_enabled,
                         std::optional<NodeId> pending);
  std::optional<NodeId> pending_node() const { return pending_; }

 private:
  NodeId add_child(NodeId parent, int letter, Region region);
  void split(NodeId leaf);

  TreeConfig config_;
  std::vector<TreeNode> nodes_;
  bool growth_enabled_ = true;
  std::optional<NodeId> pending_;
};

}  // namespace idt
