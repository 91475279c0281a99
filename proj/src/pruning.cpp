#include "idt/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "idt/errors.hpp"
#include "idt/log_math.hpp"

namespace idt {

double Pruning::code_bits() const { return -log_prior / kLn2; }

namespace {

struct PartialModel {
  std::vector<NodeId> leaves;
  double log_prior = 0.0;
  double log_loss = 0.0;
};

std::vector<PartialModel> expand(const Tree& tree, NodeId id, const EnumerationLimits& limits) {
  const TreeNode& n = tree.node(id);
  if (n.is_leaf()) return {PartialModel{{id}, 0.0, n.log_loss}};

  // P = 1/2 * L  +  1/2 * P0 * P1
  std::vector<PartialModel> out{PartialModel{{id}, -kLn2, n.log_loss}};
  const auto lo = expand(tree, n.children[0], limits);
  const auto hi = expand(tree, n.children[1], limits);
  if (lo.size() * hi.size() + 1 > limits.max_models) {
    throw EnumerationLimitError("pruning enumeration exceeds " + std::to_string(limits.max_models) + " models");
  }
  out.reserve(1 + lo.size() * hi.size());
  for (const auto& a : lo) {
    for (const auto& b : hi) {
      PartialModel m;
      m.leaves = a.leaves;
      m.leaves.insert(m.leaves.end(), b.leaves.begin(), b.leaves.end());
      m.log_prior = -kLn2 + a.log_prior + b.log_prior;
      m.log_loss = a.log_loss + b.log_loss;
      out.push_back(std::move(m));
    }
  }
  return out;
}

double log_of(std::uint64_t n, LogBase base) {
  const double v = std::log(static_cast<double>(n));
  return base == LogBase::two ? v / kLn2 : v;
}

}  // namespace

std::vector<Pruning> enumerate_prunings(const Tree& tree, EnumerationLimits limits) {
  if (tree.size() > limits.max_nodes) {
    throw EnumerationLimitError("tree has " + std::to_string(tree.size()) + " nodes; enumeration limit is " +
                                std::to_string(limits.max_nodes));
  }
  std::vector<Pruning> out;
  for (auto& m : expand(tree, tree.root(), limits)) {
    Pruning p;
    p.leaves.reserve(m.leaves.size());
    for (NodeId id : m.leaves) p.leaves.push_back(tree.label(id));
    p.log_prior = m.log_prior;
    p.log_model_loss = m.log_loss;
    out.push_back(std::move(p));
  }
  return out;
}

ExactAuditReport exact_regret_audit(const Tree& tree, std::uint64_t n, EnumerationLimits limits) {
  const auto& cfg = tree.config();
  ExactAuditReport r;
  r.n = n;
  r.models = enumerate_prunings(tree, limits);
  r.lhs = -2.0 * cfg.a * tree.log_root_weight();
  r.model_losses.reserve(r.models.size());
  for (const auto& m : r.models) r.model_losses.push_back(-2.0 * cfg.a * m.log_model_loss);

  auto side = [&](LogBase base) {
    ExactAuditReport::Side s;
    s.base = base;
    s.rhs = std::numeric_limits<double>::infinity();
    const double logn = n > 0 ? log_of(n, base) : 0.0;
    for (std::size_t i = 0; i < r.models.size(); ++i) {
      const double k = static_cast<double>(r.models[i].size());
      const double rhs =
          r.model_losses[i] + 2.0 * cfg.a * kLn2 * logn + 4.0 * cfg.bound * cfg.bound * k * logn;
      if (rhs < s.rhs) {
        s.rhs = rhs;
        s.best_model = i;
      }
    }
    s.holds = r.lhs <= s.rhs + 1e-9 * std::max(1.0, std::abs(s.rhs));
    return s;
  };
  r.base2 = side(LogBase::two);
  r.natural = side(LogBase::natural);
  return r;
}

BestPruning best_batch_pruning(const Tree& tree, std::size_t max_leaves) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  max_leaves = std::max<std::size_t>(max_leaves, 1);
  // best[id][k]: least loss of a pruning of id's subtree with exactly k leaves.
  std::vector<std::vector<double>> best(tree.size());
  for (NodeId id = static_cast<NodeId>(tree.size()); id-- > 0;) {
    const TreeNode& n = tree.node(id);
    auto& b = best[id];
    b.assign(max_leaves + 1, inf);
    b[1] = batch_solution_from_moments(n.rls).loss;
    if (n.is_leaf()) continue;
    const auto& lo = best[n.children[0]];
    const auto& hi = best[n.children[1]];
    for (std::size_t k0 = 1; k0 < max_leaves; ++k0) {
      if (lo[k0] == inf) continue;
      for (std::size_t k1 = 1; k0 + k1 <= max_leaves; ++k1) {
        if (hi[k1] == inf) continue;
        b[k0 + k1] = std::min(b[k0 + k1], lo[k0] + hi[k1]);
      }
    }
    best[n.children[0]].clear();
    best[n.children[0]].shrink_to_fit();
    best[n.children[1]].clear();
    best[n.children[1]].shrink_to_fit();
  }
  BestPruning out{inf, 0};
  for (std::size_t k = 1; k <= max_leaves; ++k) {
    if (best[0][k] < out.loss) out = {best[0][k], k};
  }
  return out;
}

GrowthAudit::GrowthAudit(std::vector<std::uint64_t> checkpoints) : checkpoints_(std::move(checkpoints)) {
  std::sort(checkpoints_.begin(), checkpoints_.end());
}

void GrowthAudit::record(std::uint64_t t, double sqerr, const Tree& tree) {
  cumulative_ += sqerr;
  if (!std::binary_search(checkpoints_.begin(), checkpoints_.end(), t) || t < 2) return;
  const auto& cfg = tree.config();
  const double log2n = std::log2(static_cast<double>(t));
  const auto k = static_cast<std::size_t>(std::ceil(log2n));
  const BestPruning bp = best_batch_pruning(tree, k);

  GrowthCheckpoint c;
  c.n = t;
  c.algorithm_loss = cumulative_;
  c.comparator_loss = bp.loss;
  c.comparator_leaves = bp.leaves;
  c.regret = cumulative_ - bp.loss;
  const double scale = static_cast<double>(cfg.p) * log2n * log2n;
  c.normalised = c.regret / scale;
  const double kd = static_cast<double>(k);
  const double a2 = cfg.bound * cfg.bound;
  const double terms = a2 * kd * (static_cast<double>(cfg.p) * std::log(static_cast<double>(t) / kd) + 4.0 * log2n) +
                       2.0 * cfg.a * kLn2 * log2n;
  c.envelope = terms / scale;
  results_.push_back(c);
}

bool GrowthAudit::bounded() const {
  return std::all_of(results_.begin(), results_.end(),
                     [](const GrowthCheckpoint& c) { return c.normalised <= std::max(c.envelope, 1.0); });
}

}  // namespace idt
