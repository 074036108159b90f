#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "su11/cli.hpp"

using namespace su11::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(Subcommand sub, std::map<std::string, std::string> params) {
  std::ostringstream out, err;
  const int code = run({sub, std::move(params)}, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

// Header and data rows, metadata removed.
std::vector<std::vector<std::string>> table(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& line : split(csv, '\n')) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(split(line, ','));
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

const std::vector<std::string> kMetrics = {"N_Tot", "F_Q", "C_tilde", "C_phi", "delta_phi",
                                           "SQL",   "HL",  "beats_sql"};

// The metric cells of a single `bound` run.
std::vector<std::string> bound_metrics(std::map<std::string, std::string> params) {
  const auto r = invoke(Subcommand::kBound, std::move(params));
  REQUIRE(r.code == kOk);
  const auto t = table(r.out);
  REQUIRE(t.size() == 2);
  std::vector<std::string> cells;
  for (const auto& m : kMetrics) cells.push_back(t[1][column(t[0], m)]);
  return cells;
}

std::vector<std::string> row_metrics(const std::vector<std::string>& header, const std::vector<std::string>& row) {
  std::vector<std::string> cells;
  for (const auto& m : kMetrics) cells.push_back(row[column(header, m)]);
  return cells;
}

}  // namespace

TEST_CASE("bound: noiseless TMSV row") {
  const auto r = invoke(Subcommand::kBound, {{"g", "2"}, {"alpha", "0"}, {"r", "0"}, {"eta-a", "1"},
                                             {"eta-b", "1"}, {"beta-a", "0"}, {"beta-b", "0"}});
  REQUIRE(r.code == kOk);
  const auto t = table(r.out);
  REQUIRE(t.size() == 2);
  const std::vector<std::string> lead = {"g", "alpha", "r", "eta_a", "eta_b", "beta_a", "beta_b"};
  for (std::size_t i = 0; i < lead.size(); ++i) CHECK(t[0][i] == lead[i]);
  for (std::size_t i = 0; i < kMetrics.size(); ++i) CHECK(t[0][lead.size() + i] == kMetrics[i]);
  const double dphi = std::stod(t[1][column(t[0], "delta_phi")]);
  CHECK(std::abs(dphi * std::sinh(4.0) - 1.0) <= 1e-12);
  CHECK(t[1][column(t[0], "beats_sql")] == "true");
  CHECK(r.out.rfind("# tool: su11-bounds", 0) == 0);
  CHECK(r.out.find("# seed: reserved") != std::string::npos);
}

TEST_CASE("unknown keys and domain errors") {
  auto r = invoke(Subcommand::kBound, {{"bogus", "1"}});
  CHECK(r.code == kDomainError);
  CHECK(r.err.find("bogus") != std::string::npos);
  CHECK(r.out.empty());

  r = invoke(Subcommand::kCritical, {{"eta-a", "0.9"}});
  CHECK(r.code == kDomainError);

  r = invoke(Subcommand::kBound, {{"eta-a", "0"}});
  CHECK(r.code == kDomainError);
  CHECK(r.err.find("'eta-a'") != std::string::npos);
  CHECK(r.err.find("(0, 1]") != std::string::npos);

  CHECK(invoke(Subcommand::kBound, {{"beta-b", "-0.1"}}).code == kDomainError);
  CHECK(invoke(Subcommand::kBound, {{"g", "abc"}}).code == kDomainError);
  CHECK(invoke(Subcommand::kSweepBeta, {{"grid", "0:1"}}).code == kDomainError);
  CHECK(invoke(Subcommand::kSweepBeta, {{"grid", "0:1:1"}}).code == kDomainError);
  CHECK(invoke(Subcommand::kOracleCheck, {{"n-max", "4"}}).code == kDomainError);
}

TEST_CASE("argv front end") {
  auto call = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return su11::cli::main(static_cast<int>(argv.size()), argv.data());
  };
  CHECK(call({"su11-bounds", "bound", "--bogus", "1"}) == kDomainError);
  CHECK(call({"su11-bounds"}) == kDomainError);
  CHECK(call({"su11-bounds", "bound", "--eta-a", "2"}) == kDomainError);

  const auto path = std::filesystem::temp_directory_path() / "su11_cli_test_moments.csv";
  CHECK(call({"su11-bounds", "moments", "--g", "1", "--out", path.string()}) == kOk);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto t = table(ss.str());
  REQUIRE(t.size() == 2);
  const double s2 = std::pow(std::sinh(1.0), 2);
  CHECK(std::stod(t[1][column(t[0], "mean_a")]) == doctest::Approx(s2).epsilon(1e-14));
  CHECK(std::stod(t[1][column(t[0], "N_Tot")]) == doctest::Approx(2 * s2).epsilon(1e-14));
  std::filesystem::remove(path);
}

TEST_CASE("byte-identical output across runs and thread counts") {
  const std::map<std::string, std::string> base = {{"betas", "0.01,0.003"}};
  const auto a = invoke(Subcommand::kSweepBeta, base);
  auto p1 = base;
  p1["threads"] = "1";
  auto p4 = base;
  p4["threads"] = "4";
  const auto b = invoke(Subcommand::kSweepBeta, p1);
  const auto c = invoke(Subcommand::kSweepBeta, p4);
  REQUIRE(a.code == kOk);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);

  const auto s1 = invoke(Subcommand::kSurface, {{"threads", "1"}});
  const auto s3 = invoke(Subcommand::kSurface, {{"threads", "3"}});
  CHECK(s1.out == s3.out);
}

TEST_CASE("sweep rows are re-derivable by single bound runs") {
  std::mt19937_64 rng(42);
  auto pick = [&](std::size_t n) {
    std::vector<std::size_t> idx;
    std::uniform_int_distribution<std::size_t> d(1, n - 1);
    for (int k = 0; k < 10; ++k) idx.push_back(d(rng));
    return idx;
  };

  SUBCASE("sweep-beta") {
    const auto r = invoke(Subcommand::kSweepBeta, {{"eta-a", "0.9"}, {"eta-b", "0.9"}});
    REQUIRE(r.code == kOk);
    const auto t = table(r.out);
    REQUIRE(t.size() == 83);
    CHECK(t[0][0] == "beta");
    CHECK(t[0][1] == "r");
    CHECK(t[0][2] == "alpha");
    for (auto i : pick(t.size())) {
      const auto& row = t[i];
      CHECK(bound_metrics({{"g", "2"}, {"alpha", row[2]}, {"r", row[1]}, {"eta-a", "0.9"}, {"eta-b", "0.9"},
                           {"beta-a", row[0]}, {"beta-b", row[0]}}) == row_metrics(t[0], row));
    }
  }
  SUBCASE("sweep-eta") {
    const auto r = invoke(Subcommand::kSweepEta, {{"beta-a", "0.01"}});
    REQUIRE(r.code == kOk);
    const auto t = table(r.out);
    REQUIRE(t.size() == 122);
    // Default input is |α| = e/2 at r = 1, as echoed in the metadata.
    std::string alpha_text;
    for (const auto& line : split(r.out, '\n')) {
      if (line.rfind("# param alpha: ", 0) == 0) alpha_text = line.substr(15);
    }
    for (auto i : pick(t.size())) {
      const auto& row = t[i];
      CHECK(bound_metrics({{"g", "2"}, {"alpha", alpha_text}, {"r", "1"}, {"eta-a", row[0]}, {"eta-b", row[1]},
                           {"beta-a", "0.01"}}) == row_metrics(t[0], row));
    }
  }
  SUBCASE("surface") {
    const auto r = invoke(Subcommand::kSurface, {});
    REQUIRE(r.code == kOk);
    const auto t = table(r.out);
    REQUIRE(t.size() == 122);
    std::string alpha_text;
    for (const auto& line : split(r.out, '\n')) {
      if (line.rfind("# param alpha: ", 0) == 0) alpha_text = line.substr(15);
    }
    for (auto i : pick(t.size())) {
      const auto& row = t[i];
      CHECK(bound_metrics({{"alpha", alpha_text}, {"r", "1"}, {"eta-a", row[0]}, {"eta-b", row[0]},
                           {"beta-a", row[1]}, {"beta-b", row[1]}}) == row_metrics(t[0], row));
    }
  }
}

TEST_CASE("critical table") {
  const auto r = invoke(Subcommand::kCritical, {{"grid", "0:4:5"}});
  REQUIRE(r.code == kOk);
  const auto t = table(r.out);
  REQUIRE(t.size() == 6);
  CHECK(t[0][column(t[0], "beta_status")] == "beta_status");
  for (std::size_t i = 1; i < t.size(); ++i) {
    CHECK(t[i][column(t[0], "beta_status")] == "FOUND");
    CHECK(t[i][column(t[0], "eta_status")] == "FOUND");
  }
}
