#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

namespace {

struct Run {
  int exitCode = -1;
  std::vector<std::string> lines;

  json last() const { return json::parse(lines.back()); }
  json summary() const { return last().at("summary"); }
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ELLSTAB_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string current;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) {
    current += buf;
    if (!current.empty() && current.back() == '\n') {
      current.pop_back();
      r.lines.push_back(current);
      current.clear();
    }
  }
  const int status = pclose(pipe);
  r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path tempFile(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / ("ellstab_cli_" + name);
  std::ofstream(p) << content;
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* matrix = R"J({
  "variables": {"equivariant": ["a"], "kahler": ["z"]},
  "labels": ["p", "q"],
  "entries": [[1, 0],
              [{"terms": [{"coef": -1, "num": [{"exp": {"a": 1, "z": 1}}],
                           "den": [{"exp": {"a": 1}}, {"exp": {"z": 1}}]}]}, 1]],
  "metadata": {"order": ["p", "q"]}
})J";

}  // namespace

TEST_CASE("theta-verify passes and summarizes") {
  const Run r = run("theta-verify --order 10 --w-denoms 6");
  CHECK(r.exitCode == 0);
  const json s = r.summary();
  CHECK(s.at("command") == "theta-verify");
  CHECK(s.at("failed") == 0);
  CHECK(s.at("checks").get<int>() == s.at("passed").get<int>());
  // 3 identities, 73 reduced w with denominator <= 6 and |w| <= 3, 5 numeric points.
  CHECK(s.at("checks").get<int>() == 81);
}

TEST_CASE("component-enum example") {
  const Run r = run("component-enum --n 2 --b 2");
  CHECK(r.exitCode == 0);
  REQUIRE(r.lines.size() >= 2);
  const json c = json::parse(r.lines.front());
  CHECK(c.at("component") == json::array({1, 1}));
  CHECK(c.at("diagrams") == json::array({"(2)", "(1,1)"}));
  CHECK(r.summary().at("components") == 1);

  const Run f = run("component-enum --w 0,1/2 --framing 2 --dims 2");
  CHECK(f.exitCode == 0);
  CHECK(f.summary().at("mode") == "framing");
  CHECK(f.lines.size() == 3 + 2);
}

TEST_CASE("diflem-scan example exits cleanly under calibrated conventions") {
  const Run r = run("diflem-scan --n-max 8 --b-max 4");
  const json s = r.summary();
  CHECK(s.at("calibrated") == true);
  // Exit code mirrors the failure count.
  CHECK(r.exitCode == (s.at("failed").get<int>() == 0 ? 0 : 1));
  CHECK(r.exitCode == 0);
}

TEST_CASE("calibrate and young-report") {
  const Run c = run("calibrate --n-max 4 --b-max 3");
  REQUIRE(c.lines.size() == 4 + 2);
  CHECK(c.exitCode == (c.summary().at("any_passed").get<bool>() ? 0 : 1));
  for (int i = 0; i < 4; ++i) CHECK(json::parse(c.lines[static_cast<std::size_t>(i)]).contains("convention"));

  const Run y = run("young-report --n 4 --w 1/2 --content i-j --attract neg");
  CHECK(y.exitCode == 0);
  CHECK(y.lines.size() == 5 + 1);
  CHECK(json::parse(y.lines.front()).at("diagram") == "(4)");
  CHECK(y.summary().at("convention") == "i-j/neg");
}

TEST_CASE("limit-apply on a matrix file") {
  const auto path = tempFile("matrix.json", matrix);
  const Run r = run("limit-apply --input " + path.string() + " --w 0 --chamber zero");
  CHECK(r.exitCode == 0);
  bool sawCandidate = false;
  for (const auto& l : r.lines) {
    const json j = json::parse(l);
    if (j.contains("candidate")) {
      sawCandidate = true;
      CHECK(j.at("candidate").at("text")[1][0] == "1/(1 - a)");
    }
  }
  CHECK(sawCandidate);
  CHECK(r.summary().at("failed") == 0);

  // A pole in q is a verification failure, not a usage error.
  json bad = json::parse(matrix);
  bad["entries"][1][0] = json::parse(R"J({"terms": [{"num": [{"exp": {"a": 1}}]}]})J");
  const auto badPath = tempFile("pole.json", bad.dump());
  CHECK(run("limit-apply --input " + badPath.string() + " --w 1/2").exitCode == 1);
}

TEST_CASE("framing-blocks") {
  const Run r = run("framing-blocks --w 0,1,1/2 --framing 3 --dims 2");
  CHECK(r.exitCode == 0);
  const json j = json::parse(r.lines.front());
  CHECK(j.at("b") == 2);
  CHECK(j.at("component_count") == 3);
}

TEST_CASE("malformed input exits with 2") {
  CHECK(run("theta-verify --bogus").exitCode == 2);
  CHECK(run("").exitCode == 2);
  CHECK(run("theta-verify --order x").exitCode == 2);
  CHECK(run("young-report --content k-l").exitCode == 2);
  CHECK(run("limit-apply --input /nonexistent/matrix.json").exitCode == 2);
  CHECK(run("limit-apply --input " + tempFile("garbage.json", "{not json").string()).exitCode == 2);
  CHECK(run("limit-apply --input " + tempFile("shape.json", R"({"labels": ["x"]})").string()).exitCode == 2);
  const auto path = tempFile("matrix2.json", matrix);
  CHECK(run("limit-apply --input " + path.string() + " --w 0,1").exitCode == 2);
  CHECK(run("limit-apply --input " + path.string() + " --chamber sideways").exitCode == 2);
  CHECK(run("framing-blocks --w 0,1/2 --framing 3 --dims 1").exitCode == 2);
}

TEST_CASE("identical inputs give identical bytes") {
  const auto a = std::filesystem::temp_directory_path() / "ellstab_cli_det_a.jsonl";
  const auto b = std::filesystem::temp_directory_path() / "ellstab_cli_det_b.jsonl";
  CHECK(run("theta-verify --order 6 --seed 9 --output " + a.string()).exitCode == 0);
  CHECK(run("theta-verify --order 6 --seed 9 --output " + b.string()).exitCode == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  const auto c = std::filesystem::temp_directory_path() / "ellstab_cli_det_c.jsonl";
  run("young-report --n 6 --w 2/3 --output " + c.string());
  const auto d = std::filesystem::temp_directory_path() / "ellstab_cli_det_d.jsonl";
  run("young-report --n 6 --w 2/3 --output " + d.string());
  CHECK(slurp(c) == slurp(d));
}
