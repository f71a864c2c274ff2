#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "qikdv/config.hpp"
#include "qikdv/errors.hpp"
#include "qikdv/io.hpp"

using namespace qikdv;

namespace {

std::string scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("qikdv_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

}  // namespace

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("config parses comments, spacing and lists") {
  auto c = Config::parse("# header\n grid.n = 256  # trailing\n\nmap.epsilons = 0.02, 0.04 ,0.08\nflag = yes\n");
  CHECK(c.get_int("grid.n", 0) == 256);
  CHECK(c.get_list("map.epsilons", {}) == std::vector<double>{0.02, 0.04, 0.08});
  CHECK(c.get_bool("flag", false));
  CHECK(c.get_double("absent", 1.5) == 1.5);
  CHECK(c.unused().empty());
}

TEST_CASE("config errors name the key or line") {
  try {
    Config::parse("grid.n 512\n", "cfg");
    FAIL("no throw");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "cfg:1");
  }
  CHECK_THROWS_AS(Config::parse("a = 1\na = 2\n"), ValidationError);
  CHECK_THROWS_AS(Config::parse("bad key = 1\n"), ValidationError);
  CHECK_THROWS_AS(Config::parse(".lead = 1\n"), ValidationError);

  auto c = Config::parse("grid.n = 12x\ngrid.L = forty\nb = maybe\nl = 1,,2\n");
  try {
    c.get_int("grid.n", 0);
    FAIL("no throw");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "grid.n");
  }
  CHECK_THROWS_AS(c.get_double("grid.L", 0), ValidationError);
  CHECK_THROWS_AS(c.get_bool("b", false), ValidationError);
  CHECK_THROWS_AS(c.get_list("l", {}), ValidationError);
  CHECK_THROWS_AS(c.require_string("missing"), ValidationError);
}

TEST_CASE("unused keys are reported") {
  auto c = Config::parse("a = 1\nb = 2\nc = 3\n");
  c.get_int("b", 0);
  CHECK(c.unused() == std::vector<std::string>{"a", "c"});
}

TEST_CASE("hash depends on content, not on line order or comments") {
  auto a = Config::parse("x = 1\ny = 2\n");
  auto b = Config::parse("# note\ny = 2\n\nx   =   1\n");
  auto c = Config::parse("x = 1\ny = 3\n");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash().size() == 16);
  CHECK(a.canonical() == "x = 1\ny = 2\n");
}

TEST_CASE("config load reports io errors") {
  CHECK_THROWS_AS(Config::load("/nonexistent/qikdv.cfg"), IoError);
}

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(mant(rng), ex(rng));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(NAN) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("csv write and read back") {
  const auto dir = scratch_dir("csv");
  const auto path = join_path(dir, "t.csv");
  write_csv(path, {"a", "b"}, {{1.0, 0.1}, {NAN, -2.5e-300}});
  const auto t = read_csv(path);
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.rows[0][1] == 0.1);
  CHECK(std::isnan(t.rows[1][0]));
  CHECK(t.rows[1][1] == -2.5e-300);
  CHECK(t.column("b") == 1);
  CHECK_THROWS_AS(t.column("c"), ValidationError);
  CHECK_THROWS_AS(csv_text({"a"}, {{1.0, 2.0}}), ValidationError);
}

TEST_CASE("io errors carry the path") {
  const auto dir = scratch_dir("io");
  const auto blocker = join_path(dir, "file");
  write_text(blocker, "x");
  try {
    ensure_dir(join_path(blocker, "sub"));
    FAIL("no throw");
  } catch (const IoError& e) {
    CHECK(e.path().find("sub") != std::string::npos);
  }
  CHECK_THROWS_AS(write_text(join_path(join_path(dir, "nope"), "f.txt"), "x"), IoError);
  CHECK_THROWS_AS(read_csv(join_path(dir, "missing.csv")), IoError);
}
