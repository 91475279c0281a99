#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "idt/datagen.hpp"
#include "idt/errors.hpp"

using namespace idt;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("idt_test_" + name);
  std::ofstream(path) << body;
  return path;
}

double mg_at(double h, double t_end, DelayInterpolation interp) {
  MackeyGlassParams p;
  p.h = h;
  p.interpolation = interp;
  const auto steps = static_cast<std::size_t>(std::llround(t_end / h));
  const Series s = gen_mackey_glass(steps + 1, p);
  return s.at(steps, 0);
}

}  // namespace

TEST_CASE("synthetic target branches") {
  CHECK(synthetic_target(0.1, 0.1, 0.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(synthetic_target(0.4, 0.4, 0.0) == doctest::Approx(-0.8).epsilon(1e-15));
  CHECK(synthetic_target(0.8, 0.8, 0.0) == doctest::Approx(-1.6).epsilon(1e-15));  // outside the unit disc
  CHECK(synthetic_target(0.6, 0.5, 0.0) == doctest::Approx(1.1).epsilon(1e-15));   // 0.61 in [0.5, 1]
  CHECK(synthetic_target(0.0, 0.0, 0.25) == 0.25);
}

TEST_CASE("gaussian noise of variance 0.1") {
  Rng rng(5);
  const std::size_t n = 100000;
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::sqrt(0.1) * rng.gaussian();
    s += e;
    s2 += e * e;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(var - 0.1) <= 0.005);
  CHECK(std::abs(mean) <= 0.01);
}

TEST_CASE("uniform draws stay in range") {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("synthetic stream is normalised and deterministic") {
  const RegressionStream a = gen_synthetic(5000, 3);
  const RegressionStream b = gen_synthetic(5000, 3);
  const RegressionStream c = gen_synthetic(5000, 4);
  CHECK(a.p == 2);
  CHECK(a.size() == 5000);
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.x == b.x);
  CHECK(a.fingerprint() != c.fingerprint());
  for (double v : a.x) REQUIRE(std::abs(v) <= 1.0);
  for (double v : a.d) REQUIRE(std::abs(v) <= 1.0);
  CHECK(*std::min_element(a.d.begin(), a.d.end()) == -1.0);
  CHECK(*std::max_element(a.d.begin(), a.d.end()) == 1.0);
}

TEST_CASE("Duffing map") {
  DuffingParams zero;
  zero.x0 = zero.x1 = 0.0;
  for (double v : gen_duffing(50, zero).values) CHECK(v == 0.0);

  const Series s = gen_duffing(10000);
  CHECK(s.at(0, 0) == 0.1);
  CHECK(s.at(1, 0) == 0.1);
  CHECK(std::abs(s.at(2, 0) - 0.254) <= 1e-15);
  double peak = 0.0;
  for (double v : s.values) peak = std::max(peak, std::abs(v));
  CHECK(peak < 2.0);
  // no period up to 1000 over the final stretch
  for (std::size_t period = 1; period <= 1000; ++period) {
    double diff = 0.0;
    for (std::size_t t = 8000; t < 10000; ++t) diff = std::max(diff, std::abs(s.at(t, 0) - s.at(t - period, 0)));
    REQUIRE(diff > 1e-6);
  }
}

TEST_CASE("Tinkerbell map") {
  const TinkerbellParams p;
  CHECK(p.b == -0.6013);
  const auto [x0, y0] = tinkerbell_step(0.0, 0.0, p);
  CHECK(x0 == 0.0);
  CHECK(y0 == 0.0);
  const auto [x1, y1] = tinkerbell_step(0.1, 0.1, p);
  CHECK(std::abs(x1 - 0.02987) <= 1e-15);
  CHECK(std::abs(y1 - 0.27) <= 1e-15);

  const Series s = gen_tinkerbell(5000);
  CHECK(s.width() == 2);
  CHECK(s.at(0, 0) == -0.72);
  CHECK(s.at(0, 1) == -0.64);
  const auto [x2, y2] = tinkerbell_step(-0.72, -0.64, p);
  CHECK(s.at(1, 0) == x2);
  CHECK(s.at(1, 1) == y2);
}

TEST_CASE("Mackey-Glass right-hand side and decay limit") {
  const MackeyGlassParams p;
  CHECK(std::abs(mackey_glass_rhs(0.5, 0.5, p) - (1.0 / (1.0 + std::pow(0.5, 10)) - 0.5)) <= 1e-15);
  CHECK(mackey_glass_rhs(0.5, 0.5, p) == doctest::Approx(0.49902).epsilon(1e-5));

  MackeyGlassParams decay;
  decay.beta = 0.0;
  const Series s = gen_mackey_glass(101, decay);
  for (std::size_t t = 0; t <= 100; ++t) {
    const double exact = 0.5 * std::exp(-0.1 * static_cast<double>(t));
    REQUIRE(std::abs(s.at(t, 0) - exact) <= 1e-6);
  }
}

TEST_CASE("Mackey-Glass converges at fourth order") {
  const double t_end = 20.0;
  const double a = mg_at(0.1, t_end, DelayInterpolation::hermite);
  const double b = mg_at(0.05, t_end, DelayInterpolation::hermite);
  const double c = mg_at(0.025, t_end, DelayInterpolation::hermite);
  const double ratio = std::abs(a - b) / std::abs(b - c);
  MESSAGE("step-halving ratio " << ratio);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("Mackey-Glass step must divide the delay") {
  MackeyGlassParams p;
  p.h = 0.3;
  CHECK_THROWS_AS(gen_mackey_glass(10, p), ConfigError);
}

TEST_CASE("Chua nonlinearity and trajectory") {
  const ChuaParams p;
  CHECK(std::abs(chua_nonlinearity(0.7, p.m0, p.m1) - (-0.8001)) <= 1e-12);
  CHECK(chua_nonlinearity(0.0, p.m0, p.m1) == 0.0);
  CHECK(std::abs(chua_nonlinearity(2.0, p.m0, p.m1) - (-1.857)) <= 1e-12);
  const Series s = gen_chua(5000);
  CHECK(s.width() == 3);
  CHECK(s.at(0, 0) == 0.7);
  for (double v : s.values) REQUIRE(std::abs(v) < 10.0);
}

TEST_CASE("embedding of a short series") {
  Series s;
  s.names = {"s"};
  s.values = {1, 2, 3, 4};
  const RegressionStream r = embed_series(s, 2, 0, false);
  REQUIRE(r.size() == 2);
  CHECK(r.x == std::vector<double>{2, 1, 3, 2});
  CHECK(r.d == std::vector<double>{3, 4});
  const RegressionStream n = embed_series(s, 2, 0, true);
  CHECK(n.d == std::vector<double>{-1, 1});
  CHECK_THROWS_AS(embed_series(s, 4, 0, false), DataError);
}

TEST_CASE("embedding a constant series") {
  Series s;
  s.names = {"s"};
  s.values.assign(10, 0.3);
  const RegressionStream r = embed_series(s, 3, 0, false);
  for (double v : r.x) CHECK(v == 0.3);
  for (double v : r.d) CHECK(v == 0.3);
}

TEST_CASE("min-max normalisation endpoints") {
  std::vector<double> col{3.0, -2.0, 7.5, 0.0};
  CHECK(normalize_minmax(col));
  CHECK(col[1] == -1.0);
  CHECK(col[2] == 1.0);
  std::vector<double> flat{4.0, 4.0};
  CHECK_FALSE(normalize_minmax(flat));
  CHECK(flat == std::vector<double>{0.0, 0.0});
}

TEST_CASE("CSV loading") {
  SUBCASE("two rows map to the endpoints") {
    const auto path = write_temp("two.csv", "a,y\n0,0\n10,5\n");
    const RegressionStream r = load_csv(path, "y");
    CHECK(r.p == 1);
    CHECK(r.x == std::vector<double>{-1, 1});
    CHECK(r.d == std::vector<double>{-1, 1});
  }
  SUBCASE("nine attributes give eight regressors") {
    std::ostringstream body;
    body << "a1,a2,a3,a4,a5,a6,a7,a8,y\n";
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 9; ++j) body << rng.uniform() << (j < 8 ? "," : "\n");
    }
    const auto path = write_temp("kin.csv", body.str());
    CHECK(load_csv(path, "y").p == 8);
    CHECK(load_csv(path, "8").p == 8);
  }
  SUBCASE("non-numeric row names its row") {
    const auto path = write_temp("bad.csv", "a,b,c\n1,2,3\na,b,c\n");
    try {
      load_csv(path, "c");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
  }
  SUBCASE("missing, empty and degenerate files") {
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", "y"), DataError);
    CHECK_THROWS_AS(load_csv(write_temp("empty.csv", ""), "y"), DataError);
    CHECK_THROWS_AS(load_csv(write_temp("const.csv", "a,y\n1,2\n3,2\n"), "y"), DataError);
    CHECK_THROWS_AS(load_csv(write_temp("notarget.csv", "a,y\n1,2\n3,4\n"), "z"), DataError);
  }
}

TEST_CASE("cost and smoothness streams") {
  const RegressionStream f = gen_forced(10, 3, 1);
  for (double v : f.x) CHECK(v == 1.0);
  const RegressionStream u = gen_uniform(1000, 2, 1);
  for (double v : u.x) REQUIRE(std::abs(v) <= 1.0);
  const RegressionStream s = gen_sine(1000, 1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    REQUIRE(std::abs(s.d[i]) <= 1.0);
    REQUIRE(std::abs(s.d[i] - std::sin(M_PI * s.x[i])) < 0.6);
  }
}

TEST_CASE("CSV writers use seventeen digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  Series s;
  s.names = {"x"};
  s.values = {0.5, 0.25};
  std::ostringstream os;
  write_series_csv(os, s);
  CHECK(os.str().rfind("t,x\n", 0) == 0);
  RegressionStream r;
  r.p = 2;
  r.x = {0.1, 0.2};
  r.d = {0.3};
  std::ostringstream os2;
  write_stream_csv(os2, r);
  CHECK(os2.str().rfind("x_1,x_2,d\n", 0) == 0);
}
