#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NLSMASS_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name)
      : dir(fs::temp_directory_path() / ("nlsmass_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string write(const std::string& file, const std::string& text) const {
    std::ofstream(dir / file) << text;
    return (dir / file).string();
  }
  std::string out(const std::string& sub) const { return (dir / sub).string(); }
};

}  // namespace

TEST_CASE("cli: lambda below -lambda_1 reports its kind and exits 1") {
  Scratch s("below");
  const auto cfg = s.write("a.conf", "dimension = 3\nexponent = 3\nlambda = -20\n");
  const auto r = run("solve " + cfg + " -o " + s.out("o"));
  CHECK(r.status == 1);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["error"] == "below_first_eigenvalue");
  CHECK(fs::exists(s.dir / "o" / "error.json"));
}

TEST_CASE("cli: unknown key and missing file are config errors") {
  Scratch s("config");
  const auto cfg = s.write("a.conf", "dimension = 3\nexponnent = 3\n");
  const auto r = run("solve " + cfg + " -o " + s.out("o"));
  CHECK(r.status == 1);
  CHECK(nlohmann::json::parse(r.out)["error"] == "config");
  const auto m = run("solve " + s.out("missing.conf") + " -o " + s.out("o"));
  CHECK(m.status == 1);
  CHECK(nlohmann::json::parse(m.out)["error"] == "config");
  const auto bad = run("solve " + cfg + " --set nokey=1 -o " + s.out("o"));
  CHECK(bad.status == 1);
}

TEST_CASE("cli: solve writes an enveloped artifact, byte-identical on rerun") {
  Scratch s("solve");
  const auto cfg = s.write("a.conf", "dimension = 3\nexponent = 3\nlambda = 2\n");
  REQUIRE(run("solve " + cfg + " -o " + s.out("a")).status == 0);
  REQUIRE(run("solve " + cfg + " -o " + s.out("b")).status == 0);
  const auto a = slurp(s.dir / "a" / "groundstate.json");
  CHECK(a == slurp(s.dir / "b" / "groundstate.json"));
  CHECK(slurp(s.dir / "a" / "groundstate.csv") == slurp(s.dir / "b" / "groundstate.csv"));
  const auto j = nlohmann::json::parse(a);
  CHECK(j["command"] == "solve");
  CHECK(j["config"]["lambda"] == "2");
  CHECK(j["result"]["relative_residual"].get<double>() < 1e-8);
}

TEST_CASE("cli: --set overrides a key") {
  Scratch s("set");
  const auto cfg = s.write("a.conf", "dimension = 3\nexponent = 3\nlambda = 2\n");
  REQUIRE(run("solve " + cfg + " --set lambda=4 -o " + s.out("o")).status == 0);
  const auto j = nlohmann::json::parse(slurp(s.dir / "o" / "groundstate.json"));
  CHECK(j["config"]["lambda"] == "4");
  CHECK(j["result"]["lambda"].get<double>() == 4.0);
}

TEST_CASE("cli: yanagida check exit status follows the verdict") {
  Scratch s("yanagida");
  const auto ok = s.write("a.conf", "dimension = 3\nexponent = 3\n");
  CHECK(run("yanagida " + ok + " -o " + s.out("a")).status == 0);
  const auto j = nlohmann::json::parse(slurp(s.dir / "a" / "yanagida.json"));
  CHECK(j["result"]["overall"] == "pass");
}
