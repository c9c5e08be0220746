#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "momtail/cli/app.hpp"
#include "support.hpp"

using namespace momtail;
using namespace momtail::cli;
namespace fs = std::filesystem;

namespace {

Json point_mass_json() { return {{"kind", "discrete"}, {"atoms", Json::array({Json{{"location", "2"}, {"mass", "1"}}})}}; }

Json table_game_json() {
  return {{"payoff",
           {{{"3/10", "1/5", "1/2"}, {"3/5", "3/10", "1/10"}}, {{"4/5", "1/10", "1/10"}, {"3/10", "1/5", "1/2"}}}}};
}

Json artifact_for(const Json& command, const Config& config = {}) {
  return make_artifact(command, config, execute(command, config));
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("momtail-cli-" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  fs::path file(const std::string& name, const Json& content) const {
    fs::path p = dir_ / name;
    write_text_file(p, dump(content));
    return p;
  }
  fs::path path(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
};

// Exit status of the command-line tool; output is discarded.
int run(const std::string& args) {
  std::string line = std::string(MOMTAIL_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(line.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("moment table of a point mass") {
  Result r = execute({{"name", "moments"}, {"measure", point_mass_json()}, {"k_max", 4}}, {});
  CHECK(r.kind == "moment-table");
  REQUIRE(r.payload.at("moments").size() == 5);
  for (unsigned k = 0; k <= 4; ++k) CHECK(r.payload["moments"][k]["value"] == std::to_string(1u << k));
  CHECK(r.verification.at("all_exact") == true);
  CHECK(r.csv == "k,value,error_radius,exact\n0,1,0,true\n1,2,0,true\n2,4,0,true\n3,8,0,true\n4,16,0,true\n");
}

TEST_CASE("comparison commands") {
  Json u = {{"kind", "density"}, {"breakpoints", {"1", "2"}}, {"pieces", Json::array({Json::array({"1"})})}};
  Result same = execute({{"name", "compare"}, {"m1", u}, {"m2", u}}, {});
  CHECK(same.payload["empirical"]["outcome"] == "equal-prefix");
  CHECK(same.payload["empirical"]["evidence"] == "heuristic");

  Json ramp = {{"kind", "density"}, {"breakpoints", {"1", "2"}}, {"pieces", Json::array({Json::array({"-2", "2"})})}};
  Result decided = execute({{"name", "compare"}, {"m1", u}, {"m2", ramp}, {"certify", "piecewise"}}, {});
  CHECK(decided.payload["decided"]["outcome"] == "strictly-below");
  CHECK(decided.payload["decided"]["evidence"] == "proved");
  CHECK(decided.verification["proved"] == true);

  Json far = {{"kind", "discrete"}, {"atoms", Json::array({Json{{"location", "2"}, {"mass", "1"}}})}};
  Json near = {{"kind", "discrete"}, {"atoms", Json::array({Json{{"location", "1"}, {"mass", "1"}}})}};
  Result cdf = execute({{"name", "compare"}, {"m1", near}, {"m2", far}, {"certify", "cdf:3/2"}}, {});
  CHECK(cdf.verification["proved"] == true);
  CHECK_THROWS_AS(execute({{"name", "compare"}, {"m1", near}, {"m2", far}, {"certify", "piecewise"}}, {}),
                  InputError);
}

TEST_CASE("filter and game commands") {
  Result t = execute({{"name", "filters"}, {"query", "theta"}, {"expr", "geom 1 2"}}, {});
  CHECK(t.payload["result"]["value"] == "2");
  Result fip = execute({{"name", "filters"}, {"query", "fip"}, {"family", {"ap 0 2", "ap 1 2"}}}, {});
  CHECK(fip.payload["result"]["holds"] == false);
  CHECK(fip.verification["witness_checked"] == true);

  Result g = execute({{"name", "game"}, {"game", table_game_json()}, {"action", "analyze"}}, {});
  CHECK(g.payload["report"]["verdict"] == "no-equilibrium");
  CHECK(g.verification["report_verified"] == true);
  Result p = execute({{"name", "game"}, {"game", table_game_json()}, {"action", "project"}, {"i", 3}}, {});
  REQUIRE(p.payload["projections"].size() == 1);
  CHECK(p.payload["projections"][0]["matrix"] == Json::array({Json::array({"1/2", "1/10"}), Json::array({"1/10", "1/2"})}));

  Json n1 = {{"payoff", Json::array({Json::array({Json::array({"1"})})})}};
  Result check = execute(
      {{"name", "game"}, {"game", n1}, {"action", "check"}, {"profile", {{"sigma1", {"1"}}, {"sigma2", {"1"}}}}}, {});
  CHECK(check.payload["result"]["equilibrium"] == true);
}

TEST_CASE("configuration is strict about its keys") {
  Config c = config_from_json({{"compare_depth", 50}});
  CHECK(c.compare_depth == 50);
  CHECK(to_json(config_from_json(to_json(c))) == to_json(c));
  CHECK_THROWS_AS(config_from_json({{"compare_dept", 50}}), InputError);
  CHECK_THROWS_AS(config_from_json({{"compare_depth", -1}}), InputError);
}

TEST_CASE("artifacts replay exactly and detect tampering") {
  Json cmd = {{"name", "construct"}, {"kind", "kernel"}, {"n", 3}};
  Json a = artifact_for(cmd);
  CHECK(dump(a) == dump(artifact_for(cmd)));
  VerifyOutcome fresh = verify_artifact(a);
  CHECK(fresh.matches);
  CHECK_FALSE(fresh.version_note.has_value());

  // Flip one digit of a recorded coefficient.
  Json flipped = a;
  std::string coef = flipped["payload"]["coefficients"][0].get<std::string>();
  REQUIRE_FALSE(coef.empty());
  std::size_t pos = coef.find_first_of("123456789");
  REQUIRE(pos != std::string::npos);
  coef[pos] = coef[pos] == '9' ? '8' : static_cast<char>(coef[pos] + 1);
  flipped["payload"]["coefficients"][0] = coef;
  VerifyOutcome bad = verify_artifact(flipped);
  CHECK_FALSE(bad.matches);
  CHECK(bad.detail.find("/coefficients/0") != std::string::npos);

  Json old = a;
  old["version"] = "0.9.0";
  VerifyOutcome cross = verify_artifact(old);
  CHECK(cross.matches);
  REQUIRE(cross.version_note.has_value());
  CHECK(cross.version_note->find("0.9.0") != std::string::npos);

  Json foreign = a;
  foreign["tool"] = "other";
  CHECK_THROWS_AS(verify_artifact(foreign), InputError);
}

TEST_CASE("moment tables are memoized under the cache directory") {
  Scratch scratch;
  fs::path cache = scratch.path("cache");
  ::setenv("MOMTAIL_CACHE_DIR", cache.c_str(), 1);
  Json cmd = {{"name", "moments"}, {"measure", point_mass_json()}, {"k_max", 6}};
  Result first = execute(cmd, {});
  ::unsetenv("MOMTAIL_CACHE_DIR");
  std::size_t entries = 0;
  for (const auto& e : fs::directory_iterator(cache)) {
    ++entries;
    CHECK(e.path().filename().string().rfind("moments-", 0) == 0);
  }
  CHECK(entries == 1);
  ::setenv("MOMTAIL_CACHE_DIR", cache.c_str(), 1);
  Result second = execute(cmd, {});
  ::unsetenv("MOMTAIL_CACHE_DIR");
  CHECK(first.payload == second.payload);
  CHECK(first.csv == second.csv);
}

TEST_CASE("exit codes of the command-line tool") {
  Scratch scratch;
  fs::path measure = scratch.file("point.json", point_mass_json());
  fs::path broken = scratch.file("broken.json", Json{{"kind", "discrete"}, {"atoms", {{{"location", "0"}, {"mass", "1"}}}}});
  fs::path uniform = scratch.file("u.json", Json{{"kind", "density"}, {"breakpoints", {"1", "2"}}, {"pieces", Json::array({Json::array({"1"})})}});
  fs::path tight = scratch.file("tight.json", Json{{"precision_bits", 64}});
  fs::path nocap = scratch.file("nocap.json", Json{{"alternating_search_cap", 1}});
  fs::path typo = scratch.file("typo.json", Json{{"depth", 3}});
  fs::path fipcap = scratch.file("fip.json", Json{{"fip_bound", 2}});
  std::vector<std::vector<std::string>> big(7, std::vector<std::string>(2, "1"));
  Json big_game = Json::object();
  big_game["payoff"] = Json::array();
  for (int i = 0; i < 7; ++i) big_game["payoff"].push_back(Json{Json{"1"}, Json{"1"}});
  fs::path big_path = scratch.file("big.json", big_game);
  fs::path game = scratch.file("table.json", table_game_json());

  CHECK(run("moments " + measure.string() + " --k-max 3") == kOk);
  CHECK(run("") == kInputError);
  CHECK(run("moments " + broken.string()) == kInputError);
  CHECK(run("--config " + typo.string() + " moments " + measure.string()) == kInputError);
  CHECK(run("moments " + scratch.path("missing.json").string()) == kIoError);
  CHECK(run("--config " + tight.string() + " moments " + uniform.string() + " --k-max 200") == kPrecisionError);
  CHECK(run("--config " + nocap.string() + " construct alternating --N 2") == kConstructionError);
  CHECK(run("--config " + fipcap.string() + " filters fip --family 'ap 0 2' 'ap 0 3' 'ap 0 5'") == kSizeBound);
  CHECK(run("game " + big_path.string() + " project") == kSizeBound);

  fs::path artifact = scratch.path("analyze.json");
  CHECK(run("game " + game.string() + " analyze -o " + artifact.string()) == kOk);
  CHECK(run("verify " + artifact.string()) == kOk);
  Json a = read_json_file(artifact);
  a["payload"]["report"]["top_value"] = "1/3";
  write_text_file(artifact, dump(a));
  CHECK(run("verify " + artifact.string()) == kVerifyMismatch);

  fs::path csv = scratch.path("m.csv");
  CHECK(run("moments " + measure.string() + " --k-max 2 --csv " + csv.string()) == kOk);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,value,error_radius,exact");
  CHECK(run("filters theta --expr 'geom 1 2' --csv " + csv.string()) == kInputError);
}

TEST_CASE("file inputs may point into an artifact") {
  Scratch scratch;
  Json a = artifact_for({{"name", "construct"}, {"kind", "alternating"}, {"N", 1}});
  fs::path artifact = scratch.file("alt.json", a);
  fs::path out = scratch.path("cmp.json");
  CHECK(run("compare '" + artifact.string() + "#/payload/f' '" + artifact.string() + "#/payload/g' --depth 30 -o " +
            out.string()) == kOk);
  Json cmp = read_json_file(out);
  CHECK(cmp["command"]["m1"] == a["payload"]["f"]);
  CHECK(run("compare '" + artifact.string() + "#/payload/nothing' '" + artifact.string() + "#/payload/g'") ==
        kInputError);
}

}  // TEST_SUITE
