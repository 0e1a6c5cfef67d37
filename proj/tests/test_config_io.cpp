#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cdflow/config.hpp"
#include "cdflow/io.hpp"
#include "cdflow/run.hpp"

using namespace cdflow;

namespace {

const char* kSample = R"(# sample run
[gas]
gamma = 1.4
entropy_scale = 1.0

[background]
rho_minus = 1.0
p = 5.0
rho_plus = 2.0

[domain]
length = 2.0

[grid]
n1 = 48
n2 = 32

[perturbation]
j = cosine:2:1.0, poly_even:1:-0.5
nu = poly_even:1:0.25
sigma = 1e-3
holder_alpha = 0.8

[tolerances]
inner_tol = 1e-9
outer_tol = 1e-7
inner_max_iter = 150
outer_max_iter = 30
damping = 0.9

[run]
mode = sweep
output = results

[sweep]
sigmas = 1e-3, 2e-3, 4e-3

[convergence]
grids = 32, 64, 128
)";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

std::filesystem::path fresh_dir(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing") {
  const SolveConfig c = parse_config_text(kSample, "sample");
  CHECK(c.gas.gamma == doctest::Approx(1.4));
  CHECK(c.rho_plus == doctest::Approx(2.0));
  CHECK(c.length == doctest::Approx(2.0));
  CHECK(c.n1 == 48);
  CHECK(c.n2 == 32);
  REQUIRE(c.family.j.size() == 2);
  CHECK(c.family.j[0].basis == Basis::cosine);
  CHECK(c.family.j[0].mode == 2);
  CHECK(c.family.j[1].coeff == doctest::Approx(-0.5));
  REQUIRE(c.family.nu.size() == 1);
  CHECK(c.amplitude == doctest::Approx(1e-3));
  CHECK(c.holder_alpha == doctest::Approx(0.8));
  CHECK(c.inner_tol == doctest::Approx(1e-9));
  CHECK(c.outer_tol == doctest::Approx(1e-7));
  CHECK(c.inner_max_iter == 150);
  CHECK(c.damping == doctest::Approx(0.9));
  CHECK(c.mode == "sweep");
  CHECK(c.output == "results");
  REQUIRE(c.sweep_sigmas.size() == 3);
  CHECK(c.sweep_sigmas[1] == doctest::Approx(2e-3));
  REQUIRE(c.convergence_grids.size() == 3);
  CHECK(c.convergence_grids[2] == 128);
  CHECK(c.source_text == kSample);
}

TEST_CASE("config rejections carry the line") {
  auto expect_fail = [](const std::string& text, const char* needle) {
    try {
      parse_config_text(text, "t");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("t:") != std::string::npos);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_fail("[gas]\nunknown_key = 1\n", "unknown_key");
  expect_fail("[nosuchsection]\n", "nosuchsection");
  expect_fail("[grid]\nn1 = forty\n", "not an integer");
  expect_fail("[gas]\ngamma = 1.4 oops\n", "trailing");
  expect_fail("[perturbation]\nj = fourier:1:1\n", "unknown basis");
  expect_fail("gamma = 1.4\n", "section");
}

TEST_CASE("config hash tracks the text") {
  const SolveConfig a = parse_config_text(kSample, "a");
  const SolveConfig b = parse_config_text(kSample, "b");
  CHECK(config_hash(a) == config_hash(b));
  std::string changed(kSample);
  changed += "\n# trailing comment\n";
  const SolveConfig c = parse_config_text(changed, "c");
  CHECK(config_hash(c) != config_hash(a));
}

TEST_CASE("tables round trip bit-exactly") {
  const auto dir = fresh_dir("cdflow_io_test");
  const std::string path = (dir / "t.tsv").string();
  std::vector<std::vector<double>> rows = {
      {1.0 / 3.0, -0.0, 5.0},
      {1e-308, 3.141592653589793, -2.5000000000000004},
      {6.02214076e23, -1.0 / 7.0, 0.1}};
  write_table(path, 0xabcdef0012345678ull, {"x", "y", "z"}, rows);
  const Table t = read_table(path);
  CHECK(t.config_hash == 0xabcdef0012345678ull);
  REQUIRE(t.columns == std::vector<std::string>{"x", "y", "z"});
  REQUIRE(t.rows.size() == rows.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c) {
      // compare representations, not values: -0.0 must survive too
      CHECK(std::memcmp(&t.rows[r][c], &rows[r][c], sizeof(double)) == 0);
    }
}

TEST_CASE("format_double survives strtod") {
  for (double v : {1.0 / 3.0, 2.0 / 3.0e7, -1.23456789012345678e-11,
                   9007199254740993.0, 5e-310}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("report writer emits ordered key = value text") {
  const auto dir = fresh_dir("cdflow_report_test");
  const std::string path = (dir / "r.txt").string();
  {
    ReportWriter rep(path, 0x1234);
    rep.put("alpha", 0.5);
    rep.put("note", "plain text");
  }
  const std::string text = read_file(path);
  CHECK(text.find("alpha = " + format_double(0.5)) != std::string::npos);
  CHECK(text.find("note = plain text") != std::string::npos);
  CHECK(text.find("# config") != std::string::npos);
}

TEST_CASE("solve artifacts are deterministic") {
  SolveConfig c;
  c.n1 = 16;
  c.n2 = 16;
  c.family.j = {{Basis::cosine, 2, 1.0}};
  c.amplitude = 1e-3;
  const auto d1 = fresh_dir("cdflow_det_a");
  const auto d2 = fresh_dir("cdflow_det_b");
  REQUIRE(run_solve(c, d1.string(), true) == 0);
  REQUIRE(run_solve(c, d2.string(), true) == 0);
  for (const char* f : {"fields.tsv", "contact.tsv", "diagnostics.txt"})
    CHECK(read_file((d1 / f).string()) == read_file((d2 / f).string()));
}
