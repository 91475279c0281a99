#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "idt/bench.hpp"
#include "idt/errors.hpp"

using namespace idt;
using namespace idt::bench;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("idt_bench_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n' ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("regressor tokens") {
  CHECK(RegressorSpec::parse("idt").kind == RegressorSpec::Kind::idt);
  CHECK(RegressorSpec::parse("ctw2").depth == 2);
  CHECK(RegressorSpec::parse("ctw:3").depth == 3);
  CHECK(RegressorSpec::parse("ctw:3").name() == "ctw3");
  CHECK(RegressorSpec::parse("fnr").kind == RegressorSpec::Kind::fnr);
  CHECK_THROWS_AS(RegressorSpec::parse("mars"), ConfigError);
}

TEST_CASE("config text parses and round-trips") {
  const ExperimentConfig c = parse_config(
      "# comment\n"
      "source = duffing\n"
      "n = 500   # trailing comment\n"
      "seed = 9\n"
      "regressors = idt, ctw3, lr\n"
      "delta = 0.5\n"
      "depth_cap = ceil_log2\n"
      "out = \"some dir\"\n");
  CHECK(c.source == "duffing");
  CHECK(c.n == 500);
  CHECK(c.seed == 9);
  REQUIRE(c.regressors.size() == 3);
  CHECK(c.regressors[1].depth == 3);
  CHECK(c.delta == 0.5);
  CHECK(c.depth_cap == DepthCap::ceil_log2);
  CHECK(c.out == "some dir");
  CHECK(c.weighting_scale() == 4.0);

  const std::string text = serialize_config(c);
  const ExperimentConfig back = parse_config(text);
  CHECK(serialize_config(back) == text);
  CHECK(back.n == c.n);
  CHECK(back.regressors.size() == 3);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("n = many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just words\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("source = weather\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("a = 1\n").validate(), ConfigError);  // below 4A^2
  CHECK_THROWS_AS(parse_config("source = csv\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("depth_cap = sometimes\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), ConfigError);
  try {
    parse_config("n = 5\nseed = x\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("run writes one row per step and one column per regressor") {
  ExperimentConfig c;
  c.n = 20000;
  c.seed = 7;
  c.out = scratch("shape");
  const RunReport r = run(c);
  CHECK(r.names == std::vector<std::string>{"idt", "ctw2", "lr", "vsr", "fnr"});
  const std::string csv = slurp(c.out / "errors.csv");
  CHECK(count_lines(csv) == 20001);
  CHECK(csv.rfind("t,idt,ctw2,lr,vsr,fnr\n", 0) == 0);
  CHECK(std::filesystem::exists(c.out / "summary.txt"));
  CHECK(std::filesystem::exists(c.out / "plot_errors.py"));
  CHECK(parse_config(slurp(c.out / "config.txt")).n == 20000);
  CHECK(r.final_error(r.index_of("idt")) < r.final_error(r.index_of("ctw2")));
  for (std::size_t i = 1; i < r.fingerprints.size(); ++i) CHECK(r.fingerprints[i] == r.fingerprints[0]);
}

TEST_CASE("repeated runs are byte-identical") {
  ExperimentConfig c;
  c.n = 3000;
  c.seed = 3;
  c.trace = true;
  c.out = scratch("repeat_a");
  run(c);
  const std::string first = slurp(c.out / "errors.csv");
  const std::string first_trace = slurp(c.out / "trace_idt.csv");
  c.out = scratch("repeat_b");
  run(c);
  CHECK(first == slurp(c.out / "errors.csv"));
  CHECK(first_trace == slurp(c.out / "trace_idt.csv"));
}

TEST_CASE("every source produces a bounded stream") {
  for (const char* src : {"synthetic", "duffing", "tinkerbell", "mackey_glass", "chua", "uniform", "forced", "sine"}) {
    ExperimentConfig c;
    c.source = src;
    c.n = 2000;
    const RegressionStream s = make_stream(c, 1);
    CHECK(s.size() > 0);
    for (double v : s.x) REQUIRE(std::abs(v) <= 1.0);
    for (double v : s.d) REQUIRE(std::abs(v) <= 1.0);
  }
}

TEST_CASE("audit on small and single-step runs") {
  ExperimentConfig c;
  c.source = "forced";
  c.dim = 1;
  c.n = 8;
  c.regressors = {RegressorSpec::parse("idt")};
  c.out = scratch("audit8");
  const AuditReport r = audit(c);
  REQUIRE(r.exact.has_value());
  CHECK(r.exact->holds());
  CHECK(r.passed());
  CHECK(std::filesystem::exists(c.out / "audit.txt"));

  c.n = 1;
  c.out = scratch("audit1");
  CHECK(audit(c).passed());
}

TEST_CASE("line fit helper") {
  const LinearFit f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const LinearFit g = fit_line({1, 2, 3, 4}, {1, -1, 1, -1});
  CHECK(g.r_squared < 0.5);
}

TEST_CASE("cost profile of a single node and of the forced stream") {
  ExperimentConfig c;
  c.source = "uniform";
  c.dim = 1;
  c.n = 200;
  c.regressors = {RegressorSpec::parse("ctw0")};
  for (std::size_t v : profile_steps(c).touched) CHECK(v == 1);

  c.source = "forced";
  c.regressors = {RegressorSpec::parse("idt")};
  const CostReport r = profile_steps(c);
  for (std::size_t t = 0; t < r.touched.size(); ++t) REQUIRE(r.touched[t] == t + 1);
}

TEST_CASE("gen writes the raw series and the stream") {
  ExperimentConfig c;
  c.source = "tinkerbell";
  c.n = 100;
  c.out = scratch("gen");
  gen(c);
  CHECK(slurp(c.out / "series.csv").rfind("t,x,y\n", 0) == 0);
  CHECK(slurp(c.out / "stream.csv").rfind("x_1,x_2,d\n", 0) == 0);
}
