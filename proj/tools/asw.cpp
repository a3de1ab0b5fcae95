// Command-line front end: one subcommand per library command, JSON in and out.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asw/asw.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code(asw_status s) {
  switch (s) {
    case ASW_OK: return 0;
    case ASW_ERR_INVALID: return 2;
    case ASW_ERR_UNSUPPORTED: return 3;
    default: return 1;
  }
}

struct Io {
  std::string input;
  std::string json_text;
  std::string output;
  std::string mode;
  std::string place;
  bool derivative = false;
};

std::string slurp(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int report_error(asw_status s, const std::string& msg) {
  json e{{"status", asw_status_name(s)}, {"error", msg}};
  std::cerr << e.dump(2) << "\n";
  return exit_code(s);
}

int run_command(asw_context* ctx, const std::string& cmd, const Io& io) {
  std::string text = "{}";
  try {
    if (!io.input.empty()) text = slurp(io.input);
    else if (!io.json_text.empty()) text = io.json_text;
  } catch (const std::exception& e) {
    return report_error(ASW_ERR_INVALID, e.what());
  }
  // Flag conveniences are merged into the request; explicit keys win.
  if (!io.mode.empty() || !io.place.empty() || io.derivative) {
    json body;
    try {
      body = json::parse(text);
    } catch (const json::exception& e) {
      return report_error(ASW_ERR_INVALID, std::string("request is not valid JSON: ") + e.what());
    }
    if (!body.is_object()) return report_error(ASW_ERR_INVALID, "request must be a JSON object");
    if (!io.mode.empty() && !body.contains("mode")) body["mode"] = io.mode;
    if (!io.place.empty() && !body.contains("place")) body["place"] = io.place;
    if (io.derivative && !body.contains("derivative")) body["derivative"] = true;
    text = body.dump();
  }
  asw_status s = asw_invoke(ctx, cmd.c_str(), text.c_str());
  if (s != ASW_OK) return report_error(s, asw_last_error(ctx));
  std::string res = std::string(asw_result(ctx)) + "\n";
  if (io.output.empty() || io.output == "-") {
    std::cout << res;
  } else {
    std::ofstream f(io.output);
    if (!f) return report_error(ASW_ERR_INVALID, "cannot write " + io.output);
    f << res;
  }
  return 0;
}

fs::path self_dir(const char* argv0) {
  std::error_code ec;
  auto p = fs::read_symlink("/proc/self/exe", ec);
  if (ec) p = fs::absolute(argv0, ec);
  return p.parent_path();
}

// Replaces this process with the acceptance runner so its table and exit
// status pass through unchanged.
int run_acceptance(const char* argv0, bool strict) {
  std::vector<fs::path> candidates;
  if (const char* env = std::getenv("ASW_ACCEPTANCE")) candidates.emplace_back(env);
  auto dir = self_dir(argv0);
  candidates.push_back(dir / "asw_acceptance");
  candidates.push_back(dir / "tests" / "asw_acceptance");
  for (const auto& c : candidates) {
    if (access(c.c_str(), X_OK) != 0) continue;
    std::string exe = c.string();
    std::vector<char*> args{exe.data()};
    std::string flag = "--strict";
    if (strict) args.push_back(flag.data());
    args.push_back(nullptr);
    std::cout.flush();
    execv(exe.c_str(), args.data());
    std::perror("execv");
    return 1;
  }
  std::cerr << "acceptance runner not found; set ASW_ACCEPTANCE\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local factors of incoherent Siegel Eisenstein series"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(asw_version()));

  std::string threads, max_work, max_precision, tolerance, node_budget;
  app.add_option("--threads", threads, "worker threads for counting (results do not depend on it)");
  app.add_option("--max-work", max_work, "counting work budget per precision level");
  app.add_option("--max-precision", max_precision, "largest counting precision k");
  app.add_option("--tolerance", tolerance, "quadrature tolerance");
  app.add_option("--node-budget", node_budget, "quadrature node budget");

  std::map<std::string, Io> ios;
  std::map<std::string, CLI::App*> subs;
  for (int i = 0; const char* name = asw_command_name(i); ++i) {
    std::string cmd = name;
    std::string desc;
    try {
      desc = json::parse(asw_schema(name)).value("description", "");
    } catch (...) {
    }
    auto* sub = app.add_subcommand(cmd, desc);
    auto& io = ios[cmd];
    sub->add_option("-i,--input", io.input, "request file, - for stdin");
    sub->add_option("-j,--json", io.json_text, "request as a JSON string");
    sub->add_option("-o,--output", io.output, "output file (default stdout)");
    if (cmd == "density")
      sub->add_option("--mode", io.mode, "auto, closed, split, count or interp")
          ->check(CLI::IsMember({"auto", "closed", "split", "count", "interp"}));
    if (cmd == "whittaker") {
      sub->add_option("--place", io.place, "a prime or inf");
      sub->add_flag("--derivative", io.derivative, "n = 1 derivative at s = 0");
    }
    subs[cmd] = sub;
  }

  std::string schema_cmd;
  auto* schema = app.add_subcommand("schema", "print the request schema of a command");
  schema->add_option("command", schema_cmd)->required();

  bool strict = false;
  auto* acceptance = app.add_subcommand("acceptance", "run the acceptance suite");
  acceptance->add_flag("--strict", strict, "count every failing criterion in the exit status");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*acceptance) return run_acceptance(argv[0], strict);
  if (*schema) {
    const char* s = asw_schema(schema_cmd.c_str());
    if (!s) return report_error(ASW_ERR_INVALID, "unknown command \"" + schema_cmd + "\"");
    std::cout << s;
    return 0;
  }

  asw_context* ctx = asw_context_new();
  if (!ctx) return 1;
  const std::pair<const char*, std::string*> opts[] = {{"threads", &threads},
                                                       {"max_work", &max_work},
                                                       {"max_precision", &max_precision},
                                                       {"tolerance", &tolerance},
                                                       {"node_budget", &node_budget}};
  for (const auto& [key, val] : opts) {
    if (val->empty()) continue;
    asw_status s = asw_set_option(ctx, key, val->c_str());
    if (s != ASW_OK) {
      int rc = report_error(s, asw_last_error(ctx));
      asw_context_free(ctx);
      return rc;
    }
  }
  int rc = 1;
  for (const auto& [cmd, sub] : subs)
    if (*sub) rc = run_command(ctx, cmd, ios[cmd]);
  asw_context_free(ctx);
  return rc;
}
