#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace idt {

// Sequential ridge least-squares model of one node.
//
// r_reg holds delta*I + sum x x^T and r_inv its inverse, maintained by
// rank-one updates. w is the running solution r_reg^{-1} * sum d x. The
// moments xd = sum d x and dd = sum d^2 are kept alongside so the batch
// comparator loss of a node can be evaluated without storing its samples.
struct RlsState {
  Eigen::MatrixXd r_reg;
  Eigen::MatrixXd r_inv;
  Eigen::VectorXd w;
  Eigen::VectorXd xd;
  double dd = 0.0;
  double delta = 1.0;
  std::uint64_t updates = 0;

  static RlsState fresh(std::size_t p, double delta);
  std::size_t dim() const { return static_cast<std::size_t>(w.size()); }
};

// The inverse is recomputed directly every this many updates.
inline constexpr std::uint64_t kInverseRefreshInterval = 1024;
inline constexpr double kInverseDriftTolerance = 1e-6;

double rls_predict(const RlsState& state, std::span<const double> x);

// r_reg += x x^T, r_inv by Sherman-Morrison, then
// w += r_inv x (d - w.x) with the residual taken from the pre-update w.
void rls_update(RlsState& state, std::span<const double> x, double d);

// || r_inv * r_reg - I ||_F
double inverse_drift(const RlsState& state);
void refresh_inverse(RlsState& state);
// Re-inverts only when the drift exceeds kInverseDriftTolerance. Returns
// whether a refresh happened.
bool refresh_inverse_if_drifted(RlsState& state);

struct Sample {
  std::vector<double> x;
  double d = 0.0;
};

struct BatchSolution {
  Eigen::VectorXd v;
  // sum (d - v.x)^2 + delta * |v|^2
  double loss = 0.0;
};

// Closed-form ridge minimiser over a sample list by a dense solve.
BatchSolution rls_batch_oracle(std::span<const Sample> samples, double delta);

// Same minimiser evaluated from the moments a state has accumulated.
BatchSolution batch_solution_from_moments(const RlsState& state);

}  // namespace idt
