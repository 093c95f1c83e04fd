#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "test_util.hpp"

using namespace fundscape::testutil;
namespace fs = std::filesystem;

namespace {

int cli(const std::string& args) {
  std::string cmd = std::string(FUNDSCAPE_CLI_PATH) + " " + args + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string fixture(const std::string& rel) {
  return std::string(FUNDSCAPE_SOURCE_DIR) + "/" + rel;
}

std::string golden(const std::string& name) { return fixture("data/golden/" + name); }

}  // namespace

TEST_CASE("cli: validate exits 0 on the fixture config") {
  CHECK(cli("validate -c " + fixture("data/synthetic/config.json")) == 0);
}

TEST_CASE("cli: match/classify/indicators reproduce the golden artifacts") {
  TempDir dir("cli_stages");
  std::string cfg = fixture("data/synthetic/config.json");

  std::string matched = (dir.path() / "m.jsonl").string();
  REQUIRE(cli("match -c " + cfg + " -o " + matched) == 0);
  CHECK(read_file(matched) == read_file(golden("matched.jsonl")));

  std::string classified = (dir.path() / "c.jsonl").string();
  REQUIRE(cli("classify -c " + cfg + " -o " + classified) == 0);
  CHECK(read_file(classified) == read_file(golden("classification.jsonl")));

  std::string csv = (dir.path() / "i.csv").string();
  std::string plot = (dir.path() / "p.json").string();
  REQUIRE(cli("indicators -c " + cfg + " -o " + csv + " --plot " + plot) == 0);
  CHECK(read_file(csv) == read_file(golden("indicators.csv")));
  CHECK(read_file(plot) == read_file(golden("plot_data.json")));
}

TEST_CASE("cli: report rebuilds plot data from a prior run's CSV") {
  TempDir dir("cli_report");
  fs::copy_file(golden("indicators.csv"), dir.path() / "indicators.csv");
  std::string out = (dir.path() / "plot.json").string();
  REQUIRE(cli("report --from " + dir.path().string() + " -o " + out) == 0);

  // category-level series are exact; country-year totals are recombined
  // from 6-decimal CSV values, so compare numerically
  auto got = nlohmann::json::parse(read_file(out));
  auto want = nlohmann::json::parse(read_file(golden("plot_data.json")));
  CHECK(got["output_by_country_category"] == want["output_by_country_category"]);
  CHECK(got["output_by_country"] == want["output_by_country"]);
  CHECK(got["category_shares"] == want["category_shares"]);
  for (auto& [country, by_year] : want["impact_by_country"].items()) {
    for (auto& [year, value] : by_year.items()) {
      const auto& g = got["impact_by_country"][country][year];
      if (value.is_null()) {
        CHECK(g.is_null());
      } else {
        CHECK(std::abs(g.get<double>() - value.get<double>()) < 1e-4);
      }
    }
  }
}

TEST_CASE("cli: exit codes distinguish validation from runtime failures") {
  TempDir dir("cli_exit");
  CHECK(cli("run -c /nonexistent/config.json") == 2);

  // structurally valid config pointing at a missing corpus: validation catches it
  auto cfg = dir.write("cfg.json", R"({
    "corpus": "missing.jsonl", "reference_corpus": "missing.jsonl",
    "lexicon": "missing.csv", "funders": "missing.csv",
    "census_year": 2016, "output_dir": "out"})");
  CHECK(cli("run -c " + cfg) == 1);
  CHECK(cli("validate -c " + cfg) == 1);
  CHECK_FALSE(fs::exists(dir.path() / "out" / "indicators.csv"));
}
