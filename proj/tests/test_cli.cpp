#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cbm/commands.hpp"

using namespace cbm;

namespace {
std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("cbm_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}
}  // namespace

TEST_CASE("RunConfig round trip through JSON") {
  RunConfig c;
  c.command = "verify";
  c.psi.alpha = 3.0;
  c.psi.clamp_s0 = 0.01;
  c.kinds = {"spike"};
  c.workers = 4;
  c.theorem = "embed";
  c.tol.inequality = 1e-8;
  const RunConfig d = run_config_from_json(run_config_to_json(c));
  CHECK(run_config_to_json(d) == run_config_to_json(c));
  CHECK(d.psi.clamp_s0.value() == 0.01);
}

TEST_CASE("weight and Carleson JSON formats") {
  const DyadicWeight w(2, {1.0, 0.5, 0.0, 2.5});
  const DyadicWeight back = weight_from_json(json::parse(weight_to_json(w).dump()));
  CHECK(std::equal(w.values().begin(), w.values().end(), back.values().begin()));
  const json seq = json::parse(R"({"depth": 3, "alpha": [[0, 0, 1.0], [2, 3, 0.25]]})");
  const CarlesonSequence s = carleson_from_json(seq);
  CHECK(s(DyadicInterval(2, 3)) == 0.25);
  CHECK(s(DyadicInterval(1, 0)) == 0.0);
  CHECK(carleson_to_json(s) == seq);
  CHECK_THROWS_AS(carleson_from_json(json::parse(R"({"depth": 1, "alpha": [[2, 0, 1.0]]})")), IoError);
  CHECK_THROWS(weight_from_json(json::parse(R"({"depth": 1, "values": [1, -1]})")));
}

TEST_CASE("gen-corpus: 50 weights, stable hashes, empty kinds rejected") {
  RunConfig c;
  c.out_dir = scratch("corpus_a").string();
  CHECK(cmd_gen_corpus(c) == kExitOk);
  const json m = read_json(std::filesystem::path(c.out_dir) / "manifest.json");
  CHECK(m.at("weights").size() == 50);
  RunConfig c2 = c;
  c2.out_dir = scratch("corpus_b").string();
  cmd_gen_corpus(c2);
  CHECK(slurp(std::filesystem::path(c.out_dir) / "manifest.json") == slurp(std::filesystem::path(c2.out_dir) / "manifest.json"));

  RunConfig bad = c;
  bad.kinds.clear();
  CHECK_THROWS_AS(cmd_gen_corpus(bad), ConfigError);
}

TEST_CASE("verify: manifest corpus, tamper detection, errors") {
  RunConfig g;
  g.out_dir = scratch("corpus_v").string();
  g.kinds = {"spike"};
  cmd_gen_corpus(g);
  RunConfig v;
  v.corpus = (std::filesystem::path(g.out_dir) / "manifest.json").string();
  v.theorem = "buc-classic";
  const VerifyOutput out = run_verify(v);
  REQUIRE(out.certificates.size() == 7);
  for (std::size_t i = 0; i < out.certificates.size(); ++i)
    CHECK(out.certificates[i].ratio == doctest::Approx(4.0 * out.row_depths[i]).epsilon(1e-15));
  v.out_dir = scratch("verify_out").string();
  CHECK(cmd_verify(v) == kExitOk);
  const std::string csv = slurp(std::filesystem::path(v.out_dir) / "summary.csv");
  CHECK(csv.rfind("id,depth,lhs,rhs,ratio,verdict\n", 0) == 0);

  // A modified weight file no longer matches its hash.
  const auto file = std::filesystem::path(g.out_dir) / "weights" / "spike-d6.json";
  std::ofstream(file) << json{{"depth", 1}, {"values", {2.0, 0.0}}}.dump();
  CHECK_THROWS(run_verify(v));

  RunConfig u;
  u.theorem = "no-such";
  CHECK_THROWS_AS(run_verify(u), ConfigError);
  u.theorem = "d-embed";
  u.corpus = "/nonexistent/manifest.json";
  CHECK_THROWS_AS(run_verify(u), ConfigError);
}

TEST_CASE("bump-embed notes the normalization of raw sequences") {
  RunConfig v;
  v.theorem = "bump-embed";
  v.kinds = {"lacunary"};
  v.depth_max = 7;
  const VerifyOutput out = run_verify(v);
  bool noted = false;
  for (const auto& c : out.certificates)
    for (const auto& n : c.notes) noted = noted || n.find("normalized") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("psi-table: 1000 rows, B'(1) = 1 at the endpoint, monotone columns") {
  RunConfig c;
  c.out_dir = scratch("table").string();
  REQUIRE(cmd_psi_table(c) == kExitOk);
  std::ifstream in(std::filesystem::path(c.out_dir) / "psi_table.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "s,psi,phi,B,Bprime,m");
  std::vector<std::array<double, 6>> rows;
  while (std::getline(in, line)) {
    std::array<double, 6> r{};
    std::stringstream ss(line);
    std::string cell;
    for (double& x : r) {
      std::getline(ss, cell, ',');
      x = std::stod(cell);
    }
    rows.push_back(r);
  }
  REQUIRE(rows.size() == 1000);
  CHECK(rows.back()[0] == 1.0);
  CHECK(rows.back()[4] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i][1] <= rows[i - 1][1]);  // Psi nonincreasing in s
    REQUIRE(rows[i][2] > rows[i - 1][2]);   // phi increasing
  }
}

TEST_CASE("inadmissible Psi gives an admissibility report") {
  RunConfig c;
  c.out_dir = scratch("table_bad").string();
  c.psi.alpha = 0.5;
  CHECK_THROWS_AS(cmd_psi_table(c), ConfigError);
}
