#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "declc/checker.hpp"
#include "declc/codegen.hpp"
#include "declc/differ.hpp"
#include "declc/lvgraph.hpp"
#include "declc/oracle.hpp"
#include "declc/progen.hpp"
#include "declc/vm.hpp"

namespace fs = std::filesystem;
using namespace declc;

namespace {

enum Exit { kOk = 0, kDiagnostics = 1, kFault = 2, kDivergence = 3 };

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Usage("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Usage("cannot write " + path);
  out << text;
}

// Compiles or prints diagnostics; nullopt on failure.
std::optional<Program> load(const std::string& path, const std::string& source) {
  try {
    return compile(source);
  } catch (const CompileError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << d.format(path) << "\n";
    if (e.diagnostics().empty()) std::cerr << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

int cmd_parse(const std::string& file) {
  auto prog = load(file, slurp(file));
  if (!prog) return kDiagnostics;
  std::cout << file << ": ok, " << prog->constructs.size() << " constructs\n";
  return kOk;
}

int cmd_graph(const std::string& file, const std::string& dot) {
  auto prog = load(file, slurp(file));
  if (!prog) return kDiagnostics;
  lvgraph::RedefGraph g = lvgraph::build_graph(*prog);
  if (!dot.empty()) {
    if (dot == "-") std::cout << lvgraph::to_dot(g);
    else spill(dot, lvgraph::to_dot(g));
    return kOk;
  }
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    const auto& n = g.nodes()[i];
    std::cout << i << " " << (n.scope.empty() ? "" : n.scope + "::") << n.str;
    if (!n.redef.empty()) {
      std::cout << "  <-";
      for (auto r : n.redef) std::cout << " " << g.node(r).str;
    }
    std::cout << "\n";
  }
  if (auto cycle = lvgraph::check_acyclic(g)) {
    std::cerr << "cycle in redefinition graph\n";
    return kDiagnostics;
  }
  return kOk;
}

int cmd_emit(const std::string& file, const std::string& out) {
  auto prog = load(file, slurp(file));
  if (!prog) return kDiagnostics;
  std::string text = codegen::render(codegen::generate(*prog, lvgraph::build_graph(*prog)));
  if (out.empty() || out == "-") std::cout << text;
  else spill(out, text);
  return kOk;
}

int cmd_run(const std::string& file, const std::string& trace_path) {
  auto prog = load(file, slurp(file));
  if (!prog) return kDiagnostics;
  std::ofstream file_out;
  std::ostream* sink = nullptr;
  if (trace_path == "-") {
    sink = &std::cout;
  } else if (!trace_path.empty()) {
    file_out.open(trace_path, std::ios::binary);
    if (!file_out) throw Usage("cannot write " + trace_path);
    sink = &file_out;
  }
  Trace trace(sink, trace_buffer_from_env());
  RunResult r = vm::run_program(*prog, trace);
  trace.flush();
  std::ostream& report = trace_path == "-" ? std::cerr : std::cout;
  for (const auto& [name, value] : r.memory) report << name << " = " << value << "\n";
  if (r.status == Status::Fault) {
    std::cerr << file << ": runtime fault: " << r.fault << "\n";
    return kFault;
  }
  report << "exit " << r.exit_value << "\n";
  return kOk;
}

struct Outcome {
  std::string name;
  bool diagnostics = false;
  DiffReport diff;
  std::string source;
};

Outcome check_one(const std::string& name, const std::string& source) {
  Outcome o;
  o.name = name;
  o.source = source;
  Program prog;
  try {
    prog = compile(source);
  } catch (const CompileError& e) {
    o.diagnostics = true;
    for (const auto& d : e.diagnostics()) o.diff.text += d.format(name) + "\n";
    return o;
  }
  Trace a, b;
  RunResult ra = vm::run_program(prog, a);
  RunResult rb = oracle::oracle_run(prog, b);
  o.diff = diff_runs(a.events(), ra, b.events(), rb);
  return o;
}

int cmd_check(const std::string& target, std::uint64_t seed, int count, int jobs,
              const std::string& save, bool json) {
  std::vector<std::pair<std::string, std::string>> work;  // name, source or empty for generated
  std::vector<std::uint64_t> seeds;
  if (fs::is_directory(target)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(target)) {
      if (e.path().extension() == ".hc") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) work.emplace_back(f.string(), slurp(f.string()));
    for (int i = 0; i < count; ++i) {
      work.emplace_back("random#" + std::to_string(seed + static_cast<std::uint64_t>(i)), "");
      seeds.push_back(seed + static_cast<std::uint64_t>(i));
    }
  } else {
    work.emplace_back(target, slurp(target));
  }

  std::size_t first_random = work.size() - seeds.size();
  std::vector<Outcome> results(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < work.size();) {
      std::string src = i < first_random ? work[i].second : progen::generate(seeds[i - first_random]);
      results[i] = check_one(work[i].first, src);
    }
  };
  int n = std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int diverged = 0;
  int broken = 0;
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const Outcome& o = results[i];
    if (o.diagnostics) {
      ++broken;
      std::cerr << o.diff.text;
      continue;
    }
    if (o.diff.equal) continue;
    ++diverged;
    std::cerr << o.name << ": divergence\n" << o.diff.text;
    if (!save.empty()) {
      fs::create_directories(save);
      std::string base = o.name;
      std::replace(base.begin(), base.end(), '#', '_');
      base = fs::path(base).filename().string();
      spill((fs::path(save) / (fs::path(base).stem().string() + ".hc")).string(), o.source);
    }
    nlohmann::ordered_json f = nlohmann::ordered_json::parse(o.diff.json());
    f["program"] = o.name;
    failures.push_back(f);
  }
  if (json) {
    nlohmann::ordered_json j;
    j["programs"] = results.size();
    j["diverged"] = diverged;
    j["diagnostics"] = broken;
    j["failures"] = failures;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "checked " << results.size() << " programs: " << diverged << " divergences";
    if (broken) std::cout << ", " << broken << " with diagnostics";
    std::cout << "\n";
  }
  if (diverged) return kDivergence;
  return broken ? kDiagnostics : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"declc: HybridC declarative-construct compiler and checker"};
  app.require_subcommand(1);
  std::string file, out, dot, trace, save;
  std::uint64_t seed = 1;
  int count = 0;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool json = false;

  auto* parse = app.add_subcommand("parse", "parse and check a program, print diagnostics");
  parse->add_option("file", file)->required();
  auto* graph = app.add_subcommand("graph", "print the redefinition graph");
  graph->add_option("file", file)->required();
  graph->add_option("--dot", dot, "write Graphviz DOT to OUT (- for stdout)");
  auto* emit = app.add_subcommand("emit", "render the lowered unit");
  emit->add_option("file", file)->required();
  emit->add_option("-o,--output", out, "output file");
  auto* run = app.add_subcommand("run", "execute a program");
  run->add_option("file", file)->required();
  run->add_option("--trace", trace, "write the JSON-lines trace to OUT (- for stdout)");
  auto* check = app.add_subcommand("check", "run vm and oracle and diff; a directory adds random programs");
  check->add_option("file", file)->required();
  check->add_option("--seed", seed, "first random seed");
  check->add_option("--count", count, "random programs to generate (directory only)");
  check->add_option("-j,--jobs", jobs, "parallel workers");
  check->add_option("--save", save, "write diverging programs into DIR");
  check->add_flag("--json", json, "print a JSON summary");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*parse) return cmd_parse(file);
    if (*graph) return cmd_graph(file, dot);
    if (*emit) return cmd_emit(file, out);
    if (*run) return cmd_run(file, trace);
    if (*check) return cmd_check(file, seed, count, jobs, save, json);
  } catch (const Usage& e) {
    std::cerr << "declc: " << e.what() << "\n";
    return kDiagnostics;
  }
  return kOk;
}
