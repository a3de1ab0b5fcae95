#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " '" ASW_CLI_PATH "' " + args + " 2>/dev/null";
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
  int st = pclose(f);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST_CASE("exit codes") {
  auto ok = cli("diff-set -j '{\"v_gram\": [[-2, 0], [0, -2]], \"t\": [[\"1\"]]}'");
  CHECK(ok.code == 0);
  CHECK(nlohmann::json::parse(ok.out)["diff"] == nlohmann::json::array({2}));
  CHECK(cli("density -j '{\"p\": 2, \"lattice_gram\": [[2]], \"t\": [[1]]}'").code == 3);
  CHECK(cli("density -j '{\"p\": 3}'").code == 2);
  CHECK(cli("density -j '{broken'").code == 2);
  CHECK(cli("no-such-command").code == 2);
  CHECK(cli("schema density").code == 0);
  CHECK(cli("schema nope").code == 2);
}

TEST_CASE("flags are merged into the request") {
  auto r = cli("density --mode closed -j '{\"p\": 5, \"lattice_gram\": [[0, 1], [1, 0]], \"t\": [[1]]}'");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["mode"] == "closed");
  CHECK(j["coeffs"] == nlohmann::json::array({"1", "-1/5"}));
  r = cli("whittaker --place inf --derivative -j '{\"t\": [[-1]]}'");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["derivative"]["im"].get<double>() < 0);
}

TEST_CASE("output is byte identical across runs and thread counts") {
  std::string req = "-j '{\"p\": 3, \"lattice_gram\": [[2,0,0],[0,2,0],[0,0,2]], \"t\": [[1,0],[0,3]], \"mode\": \"interp\"}'";
  auto a = cli("density " + req);
  auto b = cli("--threads 3 density " + req);
  auto c = cli("density " + req);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("acceptance passes the runner's status through") {
  CHECK(cli("acceptance", "ASW_ACCEPTANCE=/bin/true").code == 0);
  CHECK(cli("acceptance", "ASW_ACCEPTANCE=/bin/false").code == 1);
}
