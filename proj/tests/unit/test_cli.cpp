#include "doctest.h"
#include "support.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run run(const std::vector<std::string>& args, const std::string& env = {}) {
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += quote(PHL_BINARY);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string th(const std::string& f) { return phltest::data_path("theories/" + f); }
std::string md(const std::string& f) { return phltest::data_path("models/" + f); }

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit-code matrix") {
  const std::string chain4 = "[x:*, y:*, z:*, w:*] leq(x,y) /\\ leq(y,z) /\\ leq(z,w) |- leq(x,w)";
  std::string judg = temp_file("phl_test_antisym.phl", "judgment antisym [x:*, y:*] leq(x,y) /\\ leq(y,x) |- x = y;\n");
  struct Case {
    std::vector<std::string> args;
    int code;
    std::string env;
  };
  const std::vector<Case> cases = {
      {{"check", th("pos.phl"), md("chain2.model")}, 0, ""},
      {{"check", th("pos.phl"), md("empty_pos.model")}, 0, ""},
      {{"check", th("pos.phl"), md("cycle2.model")}, 1, ""},
      {{"check", th("terms.phl"), phltest::data_path("derivations/symmetry_vars.deriv")}, 0, ""},
      {{"check", th("terms.phl"), phltest::data_path("derivations/bad_symmetry_relabel.deriv")}, 1, ""},
      {{"prove", th("pos.phl"), "[x:*] true |- leq(x,x)"}, 0, ""},
      {{"prove", th("mon.phl"), "[x:*] true |- mul(x,x)=x", "-k", "2"}, 1, ""},
      {{"prove", th("pos.phl"), chain4, "-d", "1", "-k", "2"}, 2, ""},
      {{"prove", th("pos.phl"), chain4, "-k", "2"}, 2, "PHL_BUDGET_DEPTH=1"},
      {{"prove", th("pos.phl"), chain4, "-k", "2", "-d", "2"}, 0, "PHL_BUDGET_DEPTH=1"},
      {{"prove", th("pos.phl"), chain4, "-d", "-1"}, 10, ""},
      {{"prove", th("pos.phl"), chain4, "-k", "0"}, 10, ""},
      {{"prove", th("pos.phl"), "[x:*] true |- leq(x"}, 11, ""},
      {{"prove", th("pos.phl"), "[x:*] true |- geq(x,x)"}, 12, ""},
      {{"prove", th("missing.phl"), "[x:*] true |- leq(x,x)"}, 13, ""},
      {{"free", th("pos.phl"), "[x:*, y:*] leq(x,y)"}, 0, ""},
      {{"free", th("mon.phl"), "[x:*] true", "-d", "2"}, 2, ""},
      {{"free", th("pointed.phl"), md("set_ab.model")}, 0, ""},
      {{"factor", th("pos.phl"), md("chain2_const.hom")}, 0, ""},
      {{"factor", th("mon.phl"), md("z4_z2.hom")}, 0, ""},
      {{"translate", th("quiv.phl"), th("cat.phl"), phltest::data_path("morphisms/quiv_to_cat.morph"), "--check"}, 0, ""},
      {{"translate", th("pos.phl"), th("preorder.phl"), phltest::data_path("morphisms/pos_to_pre.morph"), "--check"}, 1, ""},
      {{"sketch2pht", phltest::data_path("sketches/product.sketch"), "--count", "2"}, 0, ""},
      {{"birkhoff", th("preorder.phl"), "--pool-size", "3", "--judgments", judg}, 0, ""},
      {{"fmt", th("cat.phl")}, 0, ""},
      {{"fmt", md("chain2.model"), "--theory", th("pos.phl")}, 0, ""},
      {{}, 10, ""},
      {{"frobnicate"}, 10, ""},
      {{"prove", th("pos.phl")}, 10, ""},
  };
  for (const auto& c : cases) {
    std::string shown;
    for (const auto& a : c.args) shown += a + " ";
    INFO(c.env << " phl " << shown);
    CHECK(run(c.args, c.env).code == c.code);
  }
}

TEST_CASE("refutation prints the countermodel") {
  auto r = run({"prove", th("mon.phl"), "[x:*] true |- mul(x,x)=x", "-k", "2"});
  CHECK(r.code == 1);
  CHECK(r.out.find("Refuted") != std::string::npos);
  CHECK(r.out.find("model") != std::string::npos);
}

TEST_CASE("json reports are deterministic and parse") {
  const std::vector<std::vector<std::string>> commands = {
      {"--json", "check", th("pos.phl"), md("cycle2.model")},
      {"--json", "prove", th("mon.phl"), "[x:*] true |- mul(x,x)=x", "-k", "2"},
      {"--json", "free", th("join.phl"), md("set_ab.model")},
      {"--json", "factor", th("mon.phl"), md("z4_z2.hom")},
      {"--json", "translate", th("quiv.phl"), th("cat.phl"), phltest::data_path("morphisms/quiv_to_cat.morph"), "--check"},
      {"--json", "sketch2pht", phltest::data_path("sketches/kernel_pair.sketch"), "--count", "2"},
      {"--json", "birkhoff", th("pos.phl"), "--pool-size", "3"},
  };
  for (const auto& c : commands) {
    auto a = run(c), b = run(c);
    INFO(c[1]);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(nlohmann::json::accept(a.out));
  }
  auto j = nlohmann::json::parse(run(commands[1]).out);
  CHECK(j.contains("verdict"));
}

TEST_CASE("fmt output reparses to the same text") {
  auto once = run({"fmt", th("cat.phl")});
  std::string path = temp_file("phl_test_cat.phl", once.out);
  auto twice = run({"fmt", path});
  CHECK(once.out == twice.out);
}

}
