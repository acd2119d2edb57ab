#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Out {
  int code = -1;
  std::string text;
};

Out declc(const std::string& args) {
  std::string cmd = std::string(DECLC_BIN) + " " + args + " 2>&1";
  Out o;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) o.text.append(buf, n);
  int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string src(const std::string& name) { return std::string(DECLC_SOURCE_DIR) + "/corpus/" + name; }

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "declc_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse reports diagnostics with exit 1") {
  CHECK(declc("parse " + src("fig8.hc")).code == 0);
  fs::path bad = scratch("bad.hc");
  std::ofstream(bad) << "int x;\nint main() { y = 1; return 0; }\n";
  Out o = declc("parse " + bad.string());
  CHECK(o.code == 1);
  CHECK(o.text.find("bad.hc:2:") != std::string::npos);
}

TEST_CASE("graph exports DOT") {
  fs::path dot = scratch("g.dot");
  CHECK(declc("graph " + src("fig8.hc") + " --dot " + dot.string()).code == 0);
  std::string text = slurp(dot);
  CHECK(text.find("digraph") != std::string::npos);
  std::size_t edges = 0;
  for (std::size_t at = 0; (at = text.find("->", at)) != std::string::npos; ++at) ++edges;
  CHECK(edges == 4);
  Out o = declc("graph " + src("fig8.hc"));
  CHECK(o.text.find("p[i]  <- p i") != std::string::npos);
}

TEST_CASE("emit writes the lowered unit") {
  fs::path out = scratch("fig8.gen");
  CHECK(declc("emit " + src("fig8.hc") + " -o " + out.string()).code == 0);
  std::string text = slurp(out);
  CHECK(text.rfind("// declc lowered unit", 0) == 0);
  CHECK(text.find("void redef_sim_x(void* owner, bool b)") != std::string::npos);
}

TEST_CASE("run streams a JSON-lines trace") {
  Out o = declc("run " + src("fig5.hc") + " --trace -");
  CHECK(o.code == 0);
  std::istringstream lines(o.text);
  std::string line;
  int events = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] != '{') continue;
    auto j = nlohmann::json::parse(line);
    CHECK(j.contains("kind"));
    ++events;
  }
  CHECK(events > 10);

  fs::path t = scratch("t.jsonl");
  CHECK(declc("run " + src("fig5.hc") + " --trace " + t.string()).code == 0);
  CHECK(slurp(t).find("ConstraintApplied") != std::string::npos);
}

TEST_CASE("buffered trace output is complete") {
  fs::path a = scratch("a.jsonl");
  fs::path b = scratch("b.jsonl");
  declc("run " + src("classes.hc") + " --trace " + a.string());
  CHECK(std::system(("DECLC_TRACE_BUFFER=3 " + std::string(DECLC_BIN) + " run " + src("classes.hc") +
                     " --trace " + b.string() + " >/dev/null").c_str()) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("a runtime fault exits 2") {
  fs::path f = scratch("fault.hc");
  std::ofstream(f) << "int *p = null;\nint main() { *p = 1; return 0; }\n";
  Out o = declc("run " + f.string());
  CHECK(o.code == 2);
  CHECK(o.text.find("runtime fault") != std::string::npos);
}

TEST_CASE("check compares vm and oracle") {
  Out one = declc("check " + src("fig8.hc"));
  CHECK(one.code == 0);
  Out dir = declc("check " + std::string(DECLC_SOURCE_DIR) + "/corpus --seed 42 --count 100 --json");
  CHECK(dir.code == 0);
  auto j = nlohmann::json::parse(dir.text.substr(dir.text.find('{')));
  CHECK(j["diverged"] == 0);
  CHECK(j["programs"].get<int>() >= 100);
}
