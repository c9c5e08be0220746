#include <CLI11.hpp>
#include <iostream>

#include "momtail/cli/app.hpp"

using namespace momtail;
using namespace momtail::cli;

namespace {

// "file.json" or "file.json#/json/pointer" (e.g. an artifact's "#/payload/f").
Json load_input(const std::string& spec) {
  const auto hash = spec.find('#');
  Json doc = read_json_file(spec.substr(0, hash));
  if (hash == std::string::npos) return doc;
  try {
    return doc.at(Json::json_pointer(spec.substr(hash + 1)));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(spec + ": " + e.what());
  }
}

std::string table_view(const DistGame& g) {
  std::string out;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    out += "a" + std::to_string(i + 1) + " |";
    for (std::size_t j = 0; j < g.cols(); ++j) {
      out += " (";
      for (std::size_t k = 0; k < g.support(); ++k) out += (k ? ", " : "") + to_string(g.cell(i, j)[k]);
      out += ")";
    }
    out += "\n";
  }
  for (std::size_t c = 1; c <= g.support(); ++c) {
    out += "G" + std::to_string(c) + ":\n";
    for (const auto& row : project(g, c)) {
      out += " ";
      for (const auto& v : row) out += " " + to_string(v);
      out += "\n";
    }
  }
  return out;
}

struct Sinks {
  std::string out, csv, plot;
};

void emit(const Json& command, const Config& config, const Sinks& sinks) {
  Result r = execute(command, config);
  const std::string text = dump(make_artifact(command, config, r));
  if (sinks.out.empty())
    std::cout << text;
  else
    write_text_file(sinks.out, text);
  if (!sinks.csv.empty()) {
    if (r.csv.empty()) throw InputError("this command has no CSV output");
    write_text_file(sinks.csv, r.csv);
  }
  if (!sinks.plot.empty()) {
    if (r.plot.empty()) throw InputError("this command has no plot data");
    write_text_file(sinks.plot, r.plot);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact moments, tail-order comparisons, counterexample constructions, filters and lex games."};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with precision budgets, search caps and default depths");
  Sinks sinks;
  auto add_sinks = [&](CLI::App* sub) {
    sub->add_option("-o,--out", sinks.out, "Write the artifact here instead of stdout");
    sub->add_option("--csv", sinks.csv, "Write a CSV table here");
    sub->add_option("--plot", sinks.plot, "Write plot-ready numeric columns here");
  };

  Json command;
  std::function<void(const Config&)> action;

  // moments
  auto* moments = app.add_subcommand("moments", "Exact moment table of a measure");
  std::string measure_path;
  unsigned long k_max = 20;
  moments->add_option("measure", measure_path, "Measure JSON")->required();
  moments->add_option("--k-max", k_max, "Largest order");
  add_sinks(moments);
  moments->callback([&] {
    action = [&](const Config& c) {
      command = {{"name", "moments"}, {"measure", load_input(measure_path)}, {"k_max", k_max}};
      emit(command, c, sinks);
    };
  });

  // compare
  auto* compare = app.add_subcommand("compare", "Compare two measures in the tail order");
  std::string m1_path, m2_path, certify;
  std::optional<unsigned long> depth;
  std::vector<unsigned long> focus;
  compare->add_option("m1", m1_path, "First measure (file or file#/pointer)")->required();
  compare->add_option("m2", m2_path, "Second measure")->required();
  compare->add_option("--depth", depth, "Moment prefix depth");
  compare->add_option("--certify", certify, "piecewise | cdf:<x0> | density:<x0>");
  compare->add_option("--focus", focus, "Indices to report in an alternation witness");
  add_sinks(compare);
  compare->callback([&] {
    action = [&](const Config& c) {
      command = {{"name", "compare"}, {"m1", load_input(m1_path)}, {"m2", load_input(m2_path)}};
      if (depth) command["depth"] = *depth;
      if (!certify.empty()) command["certify"] = certify;
      if (!focus.empty()) command["focus"] = focus;
      emit(command, c, sinks);
    };
  });

  // construct
  auto* construct = app.add_subcommand("construct", "Build a counterexample construction");
  std::string kind, a, b, mode;
  std::optional<unsigned long> n, stages, big_n, degree, truncation, kmax, cdepth;
  bool padded = false;
  construct->add_option("kind", kind, "kernel | staged | matched | alternating | unimodal | mixed-demo | discrete-cdf | ac-cdf")
      ->required()
      ->check(CLI::IsMember({"kernel", "staged", "matched", "alternating", "unimodal", "mixed-demo", "discrete-cdf",
                             "ac-cdf"}));
  construct->add_option("--a", a, "Left end of the support interval, or the atom parameter a for discrete-cdf and ac-cdf");
  construct->add_option("--b", b, "Right end of the support interval");
  construct->add_option("--n", n, "Highest vanishing order for kernel");
  construct->add_option("--stages", stages, "Number of stages for staged and matched");
  construct->add_option("--N", big_n, "Number of sign alternations");
  construct->add_flag("--padded", padded, "Impose each inequality on a full run [l, 2l]");
  construct->add_option("--degree", degree, "Bump exponent m in ((x-l)(r-x))^m");
  construct->add_option("--mode", mode, "exact | smooth");
  construct->add_option("--truncation", truncation, "Truncation index for discrete-cdf and ac-cdf");
  construct->add_option("--kmax", kmax, "Number of CDF checks");
  construct->add_option("--depth", cdepth, "Moment depth");
  add_sinks(construct);
  construct->callback([&] {
    action = [&](const Config& c) {
      command = {{"name", "construct"}, {"kind", kind}};
      if (!a.empty()) command["a"] = to_string(parse_rational(a));
      if (!b.empty()) command["b"] = to_string(parse_rational(b));
      if (n) command["n"] = *n;
      if (stages) command["stages"] = *stages;
      if (big_n) command["N"] = *big_n;
      if (padded) command["padded"] = true;
      if (degree) command["degree"] = *degree;
      if (!mode.empty()) command["mode"] = mode;
      if (truncation) command["truncation"] = *truncation;
      if (kmax) command["kmax"] = *kmax;
      if (cdepth) command["depth"] = *cdepth;
      emit(command, c, sinks);
    };
  });

  // filters
  auto* filters = app.add_subcommand("filters", "Queries on structured subsets of N");
  std::string query, expr, prefix_path;
  std::vector<std::string> family, runs;
  unsigned long limit = 100;
  filters->add_option("query", query, "theta | frechet | msz | msz-set | msz-seq | fip | elements")
      ->required()
      ->check(CLI::IsMember({"theta", "frechet", "msz", "msz-set", "msz-seq", "fip", "elements"}));
  filters->add_option("--expr", expr, "Set expression, e.g. \"(ap 1 2) | geom 1 2\"");
  filters->add_option("--family", family, "Set expressions for fip");
  filters->add_option("--prefix", prefix_path, "JSON array (file) with a strictly increasing sequence prefix");
  filters->add_option("--runs", runs, "Runs lo:hi certifying divergence");
  filters->add_option("--limit", limit, "Bound for 'elements'");
  add_sinks(filters);
  filters->callback([&] {
    action = [&](const Config& c) {
      command = {{"name", "filters"}, {"query", query}};
      if (query == "msz-seq") {
        command["prefix"] = load_input(prefix_path);
        Json r = Json::array();
        for (const auto& run : runs) {
          const auto colon = run.find(':');
          if (colon == std::string::npos) throw InputError("runs are written lo:hi");
          r.push_back({std::stoull(run.substr(0, colon)), std::stoull(run.substr(colon + 1))});
        }
        command["runs"] = r;
      } else if (query == "fip") {
        command["family"] = family;
      } else {
        command["expr"] = expr;
        if (query == "elements") command["limit"] = limit;
      }
      emit(command, c, sinks);
    };
  });

  // game
  auto* game = app.add_subcommand("game", "Distribution-valued games with lexicographic preferences");
  std::string game_path, game_action, profile_path;
  std::optional<unsigned long> coordinate;
  bool pretty = false;
  game->add_option("game", game_path, "Game JSON")->required();
  game->add_option("action", game_action, "analyze | check | project")
      ->required()
      ->check(CLI::IsMember({"analyze", "check", "project"}));
  game->add_option("--profile", profile_path, "Mixed profile JSON for check");
  game->add_option("--i", coordinate, "Single coordinate for project");
  game->add_flag("--pretty", pretty, "Also print the payoff table and projected games to stderr");
  add_sinks(game);
  game->callback([&] {
    action = [&](const Config& c) {
      command = {{"name", "game"}, {"game", load_input(game_path)}, {"action", game_action}};
      if (game_action == "check") {
        if (profile_path.empty()) throw InputError("check needs --profile");
        command["profile"] = load_input(profile_path);
      }
      if (coordinate) command["i"] = *coordinate;
      if (pretty) std::cerr << table_view(game_from_json(command["game"]));
      emit(command, c, sinks);
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Replay an artifact and compare every recorded value");
  std::string artifact_path;
  verify->add_option("artifact", artifact_path, "Artifact JSON")->required();
  int verify_code = kOk;
  verify->callback([&] {
    action = [&](const Config&) {
      VerifyOutcome v = verify_artifact(read_json_file(artifact_path));
      Json out = {{"matches", v.matches}, {"detail", v.detail}};
      if (v.version_note) out["version_note"] = *v.version_note;
      std::cout << dump(out);
      verify_code = v.matches ? kOk : kVerifyMismatch;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    Config config;
    if (!config_path.empty()) config = config_from_json(read_json_file(config_path));
    action(config);
    return verify_code;
  } catch (const std::exception& e) {
    std::cerr << diagnostic(e) << '\n';
    return exit_code_for(e);
  }
}
