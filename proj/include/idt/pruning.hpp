#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "idt/label.hpp"
#include "idt/tree.hpp"

namespace idt {

// One complete subtree (pruning) of a tree: its leaves partition [-A, A]^p.
struct Pruning {
  std::vector<NodeLabel> leaves;
  double log_prior = 0.0;       // ln 2^{-B_m}
  double log_model_loss = 0.0;  // sum of ln L over the model's leaves

  std::size_t size() const { return leaves.size(); }
  // Number of 1/2 factors in the prior.
  double code_bits() const;
};

struct EnumerationLimits {
  std::size_t max_nodes = 64;
  std::size_t max_models = std::size_t{1} << 22;
};

// Expands the inner-node recursion P = (P0 P1 + L)/2 (P = L at tree leaves)
// into sum_m 2^{-B_m} prod_{k in m} L_k. Read-only; throws
// EnumerationLimitError when the tree or the model count is too large.
std::vector<Pruning> enumerate_prunings(const Tree& tree, EnumerationLimits limits = {});

enum class LogBase { two, natural };

struct ExactAuditReport {
  std::uint64_t n = 0;
  double lhs = 0.0;  // -2a ln P_root(n)
  struct Side {
    LogBase base = LogBase::two;
    double rhs = 0.0;  // min_m [loss_m + 2a ln2 log n + 4A^2 K_m log n]
    std::size_t best_model = 0;
    bool holds = false;
  };
  Side base2;
  Side natural;
  std::vector<Pruning> models;
  std::vector<double> model_losses;  // -2a * log_model_loss

  // Passes when the inequality holds with base-2 logarithms; the natural-log
  // variant is the tighter of the two and is reported alongside.
  bool holds() const { return base2.holds; }
};

// Exact constructional-regret check by enumeration, after n steps.
ExactAuditReport exact_regret_audit(const Tree& tree, std::uint64_t n, EnumerationLimits limits = {});

// Minimum over prunings with at most max_leaves leaves of the summed batch
// ridge loss of their leaves (the best batch piecewise-linear comparator).
struct BestPruning {
  double loss = 0.0;
  std::size_t leaves = 0;
};
BestPruning best_batch_pruning(const Tree& tree, std::size_t max_leaves);

struct GrowthCheckpoint {
  std::uint64_t n = 0;
  double algorithm_loss = 0.0;
  double comparator_loss = 0.0;
  std::size_t comparator_leaves = 0;
  double regret = 0.0;
  double normalised = 0.0;  // regret / (p log2^2 n)
  double envelope = 0.0;    // upper-bound terms / (p log2^2 n), K = ceil(log2 n)
};

// Tracks cumulative squared loss of a tree regressor and, at each
// checkpoint, compares it with the best batch pruning having at most
// ceil(log2 n) leaves.
class GrowthAudit {
 public:
  explicit GrowthAudit(std::vector<std::uint64_t> checkpoints);

  // Call once per step after the update, with that step's squared error.
  void record(std::uint64_t t, double sqerr, const Tree& tree);

  const std::vector<GrowthCheckpoint>& results() const { return results_; }
  // Normalised regret stays below max(envelope, 1) at every checkpoint.
  bool bounded() const;

 private:
  std::vector<std::uint64_t> checkpoints_;
  std::vector<GrowthCheckpoint> results_;
  double cumulative_ = 0.0;
};

}  // namespace idt
