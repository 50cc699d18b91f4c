#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "apfree/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "apfree");
  std::istringstream in(stdin_text);
  std::ostringstream out;
  std::ostringstream err;
  const int code = apfree::cli::dispatch(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("apfree_cli_" + name);
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("detect ap reports a witness as data") {
  const auto path = temp_file("ap123.txt", "1\n2\n3\n");
  const Run r = run({"detect", "ap", "--k", "3", "--input", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"found\":true,\"witness\":{\"start\":1,\"diff\":1,\"length\":3}}\n");

  const Run none = run({"detect", "ap", "--k", "3", "--input", "-"}, "1\n2\n4\n5\n");
  CHECK(none.code == 0);
  CHECK(none.out == "{\"found\":false}\n");
}

TEST_CASE("detect grid") {
  const Run r = run({"detect", "grid", "--s", "2", "--input", "-"}, "1 1\n2 1\n1 2\n2 2\n");
  CHECK(r.code == 0);
  CHECK(r.out == "{\"found\":true,\"witness\":{\"x0\":1,\"y0\":1,\"side\":1,\"size\":2}}\n");
}

TEST_CASE("search r emits the extremal value") {
  const Run r = run({"search", "r", "--k", "3", "--n", "5"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["value"] == 4);
  CHECK(j["exact"] == true);
  CHECK(j["optimum"] == nlohmann::json::array({1, 2, 4, 5}));
  CHECK(j.contains("nodes"));
  CHECK(j.contains("seconds"));

  const Run text = run({"search", "r", "--k", "3", "--n", "5", "--format", "text"});
  CHECK(text.out == "1\n2\n4\n5\n");

  const Run budget = run({"search", "r", "--k", "3", "--n", "30", "--budget", "5"});
  REQUIRE(budget.code == 0);
  CHECK(nlohmann::json::parse(budget.out)["exact"] == false);
}

TEST_CASE("search rtilde and bound") {
  const Run r = run({"search", "rtilde", "--s", "2", "--n", "2"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["value"] == 3);

  const Run b = run({"search", "bound", "--s", "2", "--n", "5"});
  REQUIRE(b.code == 0);
  const auto j = nlohmann::json::parse(b.out);
  CHECK(j["bound"] == 20);
  CHECK(j["certificate"].size() == 20);
}

TEST_CASE("construct theta writes the point format") {
  const Run r = run({"construct", "theta", "--rows", "2", "--input", "-"}, "1\n");
  CHECK(r.code == 0);
  CHECK(r.out == "2 1\n3 2\n");
}

TEST_CASE("constructed files are accepted by the consumers") {
  const Run greedy = run({"construct", "greedy", "--k", "3", "--n", "40"});
  REQUIRE(greedy.code == 0);
  const Run detect = run({"detect", "ap", "--k", "3", "--input", "-"}, greedy.out);
  CHECK(detect.out == "{\"found\":false}\n");

  const Run lifted = run({"construct", "theta", "--rows", "40", "--input", "-"}, greedy.out);
  REQUIRE(lifted.code == 0);
  CHECK(run({"detect", "grid", "--s", "2", "--input", "-"}, lifted.out).out == "{\"found\":false}\n");
  const Run energy = run({"analyze", "energy", "--input", "-", "--format", "csv"}, lifted.out);
  CHECK(energy.code == 0);
  CHECK(energy.out.rfind("points,approx,exact\n", 0) == 0);

  const Run behrend = run({"construct", "behrend", "--n", "1000"});
  REQUIRE(behrend.code == 0);
  CHECK(run({"detect", "ap", "--k", "3", "--input", "-"}, behrend.out).out == "{\"found\":false}\n");

  const Run rtilde = run({"search", "rtilde", "--s", "2", "--n", "3", "--format", "text"});
  CHECK(run({"detect", "grid", "--s", "2", "--input", "-"}, rtilde.out).out == "{\"found\":false}\n");
}

TEST_CASE("analyze subcommands") {
  const Run energy = run({"analyze", "energy", "--input", "-"}, "2 1\n3 2\n");
  REQUIRE(energy.code == 0);
  CHECK(nlohmann::json::parse(energy.out)["exact"] == "18/65");

  const Run rows = run({"analyze", "rowbound", "--max", "3"});
  REQUIRE(rows.code == 0);
  CHECK(rows.out.rfind("a,row_energy,lower_bound,holds,tight\n1,0.2,1/5,true,true\n2,0.15,1/10,true,false\n", 0) == 0);

  const Run summary = run({"analyze", "rowbound", "--max", "50", "--format", "json"});
  const auto j = nlohmann::json::parse(summary.out);
  CHECK(j["all_hold"] == true);
  CHECK(j["tight"] == nlohmann::json::array({1}));

  const Run table = run({"analyze", "table", "--s", "2", "--nmax", "5", "--c", "1"});
  REQUIRE(table.code == 0);
  CHECK(table.out.find("\n5,4,true,20,") != std::string::npos);
}

TEST_CASE("exit codes separate usage errors from domain errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"search", "r", "--n", "5"}).code == 2);
  CHECK(run({"search", "r", "--k", "3", "--n", "5", "--format", "csv"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);

  const Run bad_k = run({"detect", "ap", "--k", "2", "--input", "-"}, "1\n");
  CHECK(bad_k.code == 1);
  CHECK(bad_k.err.find("at least 3") != std::string::npos);

  const Run malformed = run({"detect", "ap", "--k", "3", "--input", "-"}, "1\n2\n2\n");
  CHECK(malformed.code == 1);
  CHECK(malformed.err.find("line 3") != std::string::npos);

  CHECK(run({"detect", "ap", "--k", "3", "--input", "/nonexistent/file"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("file output is accompanied by a manifest") {
  const auto out = std::filesystem::temp_directory_path() / "apfree_cli_out.txt";
  const auto manifest = std::filesystem::path(out.string() + ".manifest.json");
  std::filesystem::remove(manifest);
  const Run r = run({"search", "r", "--k", "3", "--n", "8", "--output", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  REQUIRE(std::filesystem::exists(manifest));
  std::ifstream mf(manifest);
  const auto j = nlohmann::json::parse(mf);
  CHECK(j["command"] == "search r");
  CHECK(j["parameters"]["k"] == "3");
  CHECK(j["tool_version"] == apfree::cli::tool_version());
  CHECK(j["exact"] == true);
  CHECK(j["started_at"].get<std::string>().back() == 'Z');

  std::filesystem::remove(manifest);
  run({"search", "r", "--k", "3", "--n", "8", "--output", out.string(), "--no-manifest"});
  CHECK_FALSE(std::filesystem::exists(manifest));
}
