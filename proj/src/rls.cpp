#include "idt/rls.hpp"

#include <algorithm>
#include <stdexcept>

namespace idt {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

}  // namespace

RlsState RlsState::fresh(std::size_t p, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("RLS regulariser delta must be positive");
  const auto n = static_cast<Eigen::Index>(p);
  RlsState s;
  s.r_reg = Eigen::MatrixXd::Identity(n, n) * delta;
  s.r_inv = Eigen::MatrixXd::Identity(n, n) / delta;
  s.w = Eigen::VectorXd::Zero(n);
  s.xd = Eigen::VectorXd::Zero(n);
  s.delta = delta;
  return s;
}

double rls_predict(const RlsState& state, std::span<const double> x) {
  return state.w.dot(as_vector(x));
}

void rls_update(RlsState& state, std::span<const double> x, double d) {
  const auto xv = as_vector(x);
  const double residual = d - state.w.dot(xv);

  state.r_reg.noalias() += xv * xv.transpose();
  const Eigen::VectorXd rx = state.r_inv * xv;
  const double denom = 1.0 + xv.dot(rx);
  state.r_inv.noalias() -= (rx * rx.transpose()) / denom;

  state.w.noalias() += state.r_inv * xv * residual;
  state.xd.noalias() += d * xv;
  state.dd += d * d;
  ++state.updates;

  if (state.updates % kInverseRefreshInterval == 0) refresh_inverse(state);
}

double inverse_drift(const RlsState& state) {
  const auto n = state.r_reg.rows();
  return (state.r_inv * state.r_reg - Eigen::MatrixXd::Identity(n, n)).norm();
}

void refresh_inverse(RlsState& state) {
  const auto n = state.r_reg.rows();
  state.r_inv = state.r_reg.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
}

bool refresh_inverse_if_drifted(RlsState& state) {
  if (inverse_drift(state) <= kInverseDriftTolerance) return false;
  refresh_inverse(state);
  return true;
}

BatchSolution rls_batch_oracle(std::span<const Sample> samples, double delta) {
  if (samples.empty()) throw std::invalid_argument("batch oracle needs at least one sample");
  if (!(delta > 0.0)) throw std::invalid_argument("RLS regulariser delta must be positive");
  const auto p = static_cast<Eigen::Index>(samples.front().x.size());
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(p, p) * delta;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  for (const auto& s : samples) {
    const auto xv = as_vector(s.x);
    r.noalias() += xv * xv.transpose();
    b.noalias() += s.d * xv;
  }
  BatchSolution out;
  out.v = r.ldlt().solve(b);
  double loss = delta * out.v.squaredNorm();
  for (const auto& s : samples) {
    const double e = s.d - out.v.dot(as_vector(s.x));
    loss += e * e;
  }
  out.loss = loss;
  return out;
}

BatchSolution batch_solution_from_moments(const RlsState& state) {
  BatchSolution out;
  out.v = state.r_reg.ldlt().solve(state.xd);
  // At the minimiser: sum d^2 - 2 v.b + v^T (S + delta I) v = sum d^2 - v.b
  out.loss = std::max(0.0, state.dd - out.v.dot(state.xd));
  return out;
}

}  // namespace idt
