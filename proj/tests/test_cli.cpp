#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

// End-to-end checks of the command line tool: exit codes, wire formats,
// and byte-identical output under identical seeds.

namespace {

const std::string kCli = THETAVER_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string run_capture(const std::string& args, const std::string& tag) {
  const std::string path = "/tmp/thetaver_cli_test_" + tag + ".json";
  const std::string cmd = kCli + " " + args + " --out " + path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(WEXITSTATUS(status) == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

}  // namespace

TEST_CASE("verify subcommand exit codes") {
  CHECK(run("verify jac0 --genus 1 --seed 7") == 0);
  CHECK(run("verify unknown-identity") == 2);
  CHECK(run("verify") == 2);
  CHECK(run("bogus-subcommand") == 2);
  CHECK(run("verify jac0 --genus 3") == 2);  // genus 1 identity
}

TEST_CASE("qdump emits the classical pattern") {
  const auto text = run_capture("qdump 0 0 --genus 1 --order 16", "qdump");
  const auto j = nlohmann::json::parse(text);
  REQUIRE(j.at("terms").size() == 3);
  CHECK(j.at("terms")[0].at("exps")[0] == 0);
  CHECK(j.at("terms")[1].at("exps")[0] == 4);
  CHECK(j.at("terms")[2].at("exps")[0] == 16);
  CHECK(j.at("terms")[1].at("re") == "2");
  CHECK(run("qdump 00 0 --genus 1") == 2);  // length mismatch
}

TEST_CASE("qverify exit codes") {
  CHECK(run("qverify jac0 --order 32") == 0);
  CHECK(run("qverify Eq --genus 2 --order 12") == 0);
  CHECK(run("qverify what") == 2);
}

TEST_CASE("reducibility verdicts and domain errors") {
  write_file("/tmp/thetaver_tau_block.json",
             R"({"g":2,"re":[[0,0],[0,0]],"im":[[1.0,0],[0,2.0]]})");
  const auto text = run_capture("reducibility --genus 2 --k 1 --tau /tmp/thetaver_tau_block.json",
                                "reducible");
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("verdict") == "consistent-with-reducible");

  const auto text2 = run_capture("reducibility --genus 2 --k 1 --seed 5", "random");
  CHECK(nlohmann::json::parse(text2).at("verdict") == "irreducible-at-this-basis");

  write_file("/tmp/thetaver_tau_bad.json",
             R"({"g":2,"re":[[0,0],[0,0]],"im":[[-1.0,0],[0,2.0]]})");
  CHECK(run("reducibility --genus 2 --k 1 --tau /tmp/thetaver_tau_bad.json") == 2);
  CHECK(run("reducibility --genus 2 --k 2 --seed 5") == 2);
}

TEST_CASE("constant estimation and catalog round trip") {
  const std::string cat = "/tmp/thetaver_cat.json";
  std::remove(cat.c_str());
  CHECK(run("constant Eq --genus 1 --seed 3 --catalog " + cat) == 0);
  const auto text = run_capture("constant Eq --genus 2 --seed 3 --catalog " + cat, "const2");
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("exact").at("r") == "64");
  CHECK(j.at("exact").at("s") == 2);
  CHECK(j.at("exact").at("t") == -2);
  CHECK(j.at("dispersion").get<double>() < 1e-7);
  // the written catalog is consumable by verify
  CHECK(run("verify Eq --genus 2 --catalog " + cat) == 0);
}

TEST_CASE("determinism: identical seeds give identical bytes") {
  const auto a = run_capture("verify Eq --genus 2 --seed 11", "det_a");
  const auto b = run_capture("verify Eq --genus 2 --seed 11", "det_b");
  CHECK(a == b);
  const auto c = run_capture("verify tT --genus 1 --seed 4", "det_c");
  const auto d = run_capture("verify tT --genus 1 --seed 4", "det_d");
  CHECK(c == d);
  const auto e = run_capture("verify tT --genus 1 --seed 5", "det_e");
  CHECK(c != e);
}

TEST_CASE("fundamental systems output") {
  const auto text = run_capture("fundamental-systems --genus 2 --limit 4", "fsys");
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("ordered_count") == 720);
  CHECK(j.at("unordered_count") == 15);
  REQUIRE(j.at("systems").size() == 4);
  CHECK(j.at("systems")[0].size() == 6);
}
