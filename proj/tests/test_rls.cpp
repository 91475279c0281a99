#include <random>
#include <vector>

#include "doctest.h"
#include "idt/rls.hpp"

using namespace idt;

namespace {

// Plain Gauss-Jordan with partial pivoting; independent of Eigen's solvers.
std::vector<double> solve_dense(std::vector<std::vector<double>> m, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    }
    std::swap(m[c], m[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= m[i][i];
  return b;
}

std::vector<double> ridge_reference(const std::vector<Sample>& s, double delta) {
  const std::size_t p = s.front().x.size();
  std::vector<std::vector<double>> m(p, std::vector<double>(p, 0.0));
  std::vector<double> b(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) m[i][i] = delta;
  for (const auto& smp : s) {
    for (std::size_t i = 0; i < p; ++i) {
      b[i] += smp.d * smp.x[i];
      for (std::size_t j = 0; j < p; ++j) m[i][j] += smp.x[i] * smp.x[j];
    }
  }
  return solve_dense(m, b);
}

}  // namespace

TEST_CASE("fresh state predicts zero") {
  const RlsState s = RlsState::fresh(3, 1.0);
  const double x[] = {0.3, -0.7, 1.0};
  CHECK(rls_predict(s, x) == 0.0);
}

TEST_CASE("one update (1,1) with delta 1 predicts 1/2") {
  RlsState s = RlsState::fresh(1, 1.0);
  const double x[] = {1.0};
  rls_update(s, x, 1.0);
  CHECK(rls_predict(s, x) == doctest::Approx(0.5).epsilon(1e-15));
  rls_update(s, x, 1.0);
  CHECK(s.w[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("orthogonal regressor predicts zero") {
  RlsState s = RlsState::fresh(2, 1.0);
  s.w << 1.0, -1.0;
  const double x[] = {0.5, 0.5};
  CHECK(rls_predict(s, x) == 0.0);
}

TEST_CASE("update with x = 0 leaves the model unchanged") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RlsState s = RlsState::fresh(3, 0.5);
  for (int i = 0; i < 10; ++i) {
    const double x[] = {u(rng), u(rng), u(rng)};
    rls_update(s, x, u(rng));
  }
  const RlsState before = s;
  const double zero[] = {0.0, 0.0, 0.0};
  rls_update(s, zero, 0.9);
  CHECK(s.r_reg == before.r_reg);
  CHECK(s.r_inv == before.r_inv);
  CHECK(s.w == before.w);
}

TEST_CASE("batch oracle: single sample and zero targets") {
  const std::vector<Sample> one{{{1.0}, 1.0}};
  const BatchSolution b = rls_batch_oracle(one, 1.0);
  CHECK(b.v[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b.loss == doctest::Approx(0.5).epsilon(1e-15));

  const std::vector<Sample> zeros{{{0.3, 0.2}, 0.0}, {{-0.5, 0.9}, 0.0}};
  const BatchSolution z = rls_batch_oracle(zeros, 1.0);
  CHECK(z.v.norm() == 0.0);
  CHECK(z.loss == 0.0);
  CHECK_THROWS(rls_batch_oracle(std::vector<Sample>{}, 1.0));
}

TEST_CASE("large delta shrinks the batch solution") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Sample> s;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < 50; ++i) {
    Sample smp{{u(rng), u(rng), u(rng)}, u(rng)};
    for (int j = 0; j < 3; ++j) b[j] += smp.d * smp.x[j];
    s.push_back(smp);
  }
  const BatchSolution sol = rls_batch_oracle(s, 1e6);
  CHECK(sol.v.norm() <= b.norm() / 1e6);
}

TEST_CASE("sequential weights equal the closed form after every prefix") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t p = 1 + trial % 4;
    const double delta = 0.1 + 2.0 * (u(rng) + 1.0);
    RlsState s = RlsState::fresh(p, delta);
    std::vector<Sample> seen;
    for (int t = 0; t < 100; ++t) {
      Sample smp;
      for (std::size_t j = 0; j < p; ++j) smp.x.push_back(u(rng));
      smp.d = u(rng);
      rls_update(s, smp.x, smp.d);
      seen.push_back(smp);
      const auto ref = ridge_reference(seen, delta);
      for (std::size_t j = 0; j < p; ++j) REQUIRE(std::abs(s.w[static_cast<Eigen::Index>(j)] - ref[j]) <= 1e-8);
    }
    // Rreg - delta I is PSD
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.r_reg);
    CHECK(eig.eigenvalues().minCoeff() >= delta - 1e-9);
    CHECK(inverse_drift(s) <= 1e-8);
  }
}

TEST_CASE("moment-based batch loss agrees with the oracle") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t p = 1 + trial % 3;
    RlsState s = RlsState::fresh(p, 1.0);
    std::vector<Sample> seen;
    for (int t = 0; t < 30; ++t) {
      Sample smp;
      for (std::size_t j = 0; j < p; ++j) smp.x.push_back(u(rng));
      smp.d = u(rng);
      rls_update(s, smp.x, smp.d);
      seen.push_back(smp);
    }
    const BatchSolution a = rls_batch_oracle(seen, 1.0);
    const BatchSolution b = batch_solution_from_moments(s);
    CHECK((a.v - b.v).norm() <= 1e-12);
    CHECK(b.loss == doctest::Approx(a.loss).epsilon(1e-10));
  }
}

TEST_CASE("refresh restores the inverse identity after drift") {
  RlsState s = RlsState::fresh(3, 1.0);
  const double x[] = {0.2, 0.4, -0.1};
  rls_update(s, x, 0.3);
  s.r_inv(0, 1) += 1e-3;  // inject drift
  CHECK(inverse_drift(s) > kInverseDriftTolerance);
  CHECK(refresh_inverse_if_drifted(s));
  CHECK(inverse_drift(s) <= 1e-12);
  CHECK_FALSE(refresh_inverse_if_drifted(s));
}

TEST_CASE("periodic re-inversion keeps long streams accurate") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RlsState s = RlsState::fresh(4, 1.0);
  std::vector<Sample> seen;
  for (int t = 0; t < 5000; ++t) {
    Sample smp{{u(rng), u(rng), u(rng), u(rng)}, u(rng)};
    rls_update(s, smp.x, smp.d);
    seen.push_back(smp);
  }
  CHECK(inverse_drift(s) <= 1e-8);
  const BatchSolution b = rls_batch_oracle(seen, 1.0);
  CHECK((s.w - b.v).norm() <= 1e-8);
}

TEST_CASE("parameter regret is non-negative and sublinear") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.1);
  const std::size_t p = 3;
  RlsState s = RlsState::fresh(p, 1.0);
  std::vector<Sample> seen;
  const Eigen::Vector3d truth(0.4, -0.3, 0.2);
  double loss = 0.0;
  std::vector<double> regret_at;
  for (int t = 1; t <= 10000; ++t) {
    Sample smp{{u(rng), u(rng), u(rng)}, 0.0};
    smp.d = truth.dot(Eigen::Map<const Eigen::Vector3d>(smp.x.data())) + noise(rng);
    const double e = smp.d - rls_predict(s, smp.x);
    loss += e * e;
    rls_update(s, smp.x, smp.d);
    seen.push_back(smp);
    if (t == 1000 || t == 5000 || t == 10000) {
      const double best = batch_solution_from_moments(s).loss;
      regret_at.push_back(loss - best);
    }
  }
  for (double r : regret_at) CHECK(r >= 0.0);
  // Sublinear: the last 5000 steps add far less regret than linear growth.
  const double late_slope = (regret_at[2] - regret_at[1]) / 5000.0;
  const double early_slope = regret_at[0] / 1000.0;
  CHECK(late_slope < early_slope);
  // A^2 p ln(n) scale with a generous constant.
  CHECK(regret_at[2] < 10.0 * p * std::log(10000.0));
}
