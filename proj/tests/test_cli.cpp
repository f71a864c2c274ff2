#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"
#include "qikdv/io.hpp"

using namespace qikdv;
using nlohmann::json;

namespace {

std::string scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("qikdv_cli_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string config(const std::string& dir, const std::string& text) {
  const auto p = join_path(dir, "run.cfg");
  write_text(p, text);
  return p;
}

json manifest(const std::string& out) { return json::parse(slurp(join_path(out, "manifest.json"))); }

const char* kSmall = "grid.L = 40\ngrid.n = 128\nequation.dt = 1e-3\nequation.t_end = 0.05\noutput.sample_every = 25\n"
                     "initial.kind = sech2\ninitial.amplitude = -0.5\ninitial.width = 4\n";

}  // namespace

TEST_CASE("simulate writes CSVs and a manifest with the config hash") {
  const auto dir = scratch("simulate");
  const auto cfg = config(dir, kSmall);
  const auto out = join_path(dir, "out");
  REQUIRE(cli::run({"simulate", cfg, out, 3, std::nullopt}) == cli::kOk);
  for (const char* f : {"trajectory.csv", "fields.csv", "charges.csv", "manifest.json", "timing.json"})
    CHECK(std::filesystem::exists(join_path(out, f)));
  const auto m = manifest(out);
  CHECK(m["status"] == "ok");
  CHECK(m["command"] == "simulate");
  CHECK(m["config_hash"] == cli::effective_config({"simulate", cfg, out, 3, std::nullopt}).hash());
  CHECK(m["outputs"].size() == 3);
  const auto t = read_csv(join_path(out, "trajectory.csv"));
  CHECK(t.rows.size() == 3);
}

TEST_CASE("--seed and --orders enter the effective config") {
  const auto dir = scratch("effective");
  const auto cfg = config(dir, kSmall);
  const auto a = cli::effective_config({"simulate", cfg, "o", 1, std::nullopt});
  const auto b = cli::effective_config({"simulate", cfg, "o", 2, std::nullopt});
  const auto c = cli::effective_config({"simulate", cfg, "o", 1, 0});
  CHECK(a.hash() != b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(c.get_int("charges.orders", -1) == 0);
}

TEST_CASE("orders 0 leaves the higher charges empty") {
  const auto dir = scratch("orders0");
  const auto cfg = config(dir, kSmall);
  const auto out = join_path(dir, "out");
  REQUIRE(cli::run({"charges", cfg, out, std::nullopt, 0}) == cli::kOk);
  const auto t = read_csv(join_path(out, "charges.csv"));
  const auto q1 = t.column("Q1");
  for (const auto& r : t.rows) CHECK(std::isnan(r[q1]));
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  const auto out = join_path(dir, "out");
  CHECK(cli::run({"simulate", config(dir, "grid.n = 500\n"), out, {}, {}}) == cli::kValidation);
  CHECK(manifest(out)["error"]["key"] == "grid.n");
  CHECK(cli::run({"simulate", config(dir, "grid.nn = 512\n"), out, {}, {}}) == cli::kValidation);
  CHECK(cli::run({"simulate", config(dir, "initial.kind = spline\n"), out, {}, {}}) == cli::kValidation);
  CHECK(cli::run({"simulate", config(dir, "equation.name = DEFORMED_KDV\ndeformation.kind = power_def\n"
                                          "deformation.epsilon = 0.01\ninitial.kind = sech2\n"),
                  out, {}, {}}) == cli::kValidation);
  CHECK(cli::run({"simulate", "", out, {}, 7}) == cli::kValidation);
  CHECK(cli::run({"map-nls", config(dir, "map.epsilons = 0.05\n"), out, {}, {}}) == cli::kValidation);
  CHECK(cli::run({"coupled", config(dir, "coupled.mode = conjugate\ncoupled.k = 0.3\n"), out, {}, {}}) == cli::kValidation);
  CHECK(cli::run({"nonsense", "", out, {}, {}}) == cli::kValidation);
  CHECK(cli::run({"simulate", join_path(dir, "absent.cfg"), out, {}, {}}) == cli::kIo);
  write_text(join_path(dir, "blocker"), "x");
  CHECK(cli::run({"verify-algebra", "", join_path(join_path(dir, "blocker"), "o"), {}, {}}) == cli::kIo);
}

TEST_CASE("numerical failures exit 3") {
  const auto dir = scratch("numerical");
  const auto out = join_path(dir, "out");
  CHECK(cli::run({"simulate",
                  config(dir, "initial.kind = sech2\ninitial.amplitude = 5000\ninitial.width = 0.2\nequation.dt = 0.01\n"),
                  out, {}, {}}) == cli::kNumerical);
  CHECK(manifest(out)["status"] == "error");
  CHECK(cli::run({"verify-algebra", config(dir, "algebra.samples = 50\nalgebra.bch_samples = 5\nalgebra.table = corrupted\n"),
                  out, {}, {}}) == cli::kNumerical);
  CHECK(manifest(out)["status"] == "check_failed");
}

TEST_CASE("verify-algebra passes on the standard table") {
  const auto dir = scratch("algebra");
  const auto out = join_path(dir, "out");
  REQUIRE(cli::run({"verify-algebra", config(dir, "algebra.samples = 100\nalgebra.bch_samples = 20\n"), out, 5, {}}) ==
          cli::kOk);
  std::istringstream csv(slurp(join_path(out, "algebra.csv")));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "check,pass,fail,worst_ratio");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    const auto a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
    CHECK(line.substr(b + 1, c - b - 1) == "0");
  }
  CHECK(rows == 4);
}

TEST_CASE("reruns are byte-identical") {
  const auto dir = scratch("determinism");
  const auto cfg = config(dir, kSmall);
  const auto a = join_path(dir, "a"), b = join_path(dir, "b");
  REQUIRE(cli::run({"charges", cfg, a, 11, {}}) == cli::kOk);
  REQUIRE(cli::run({"charges", cfg, b, 11, {}}) == cli::kOk);
  for (const char* f : {"charges.csv", "charges_summary.csv", "manifest.json"})
    CHECK(slurp(join_path(a, f)) == slurp(join_path(b, f)));
}
