#include <cstdio>
#include <fstream>
#include <sstream>

#include "momtail/cli/app.hpp"

namespace momtail::cli {

Config config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  Config c;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number_integer() || value.get<long long>() < 0) throw InputError("config key '" + key + "' must be a nonnegative integer");
    const auto v = value.get<unsigned long>();
    if (key == "precision_bits")
      c.precision_bits = v;
    else if (key == "ell_search_cap")
      c.ell_search_cap = v;
    else if (key == "alternating_search_cap")
      c.alternating_search_cap = v;
    else if (key == "eventual_positive_cap")
      c.eventual_positive_cap = v;
    else if (key == "compare_depth")
      c.compare_depth = v;
    else if (key == "game_size_bound")
      c.game_size_bound = v;
    else if (key == "fip_bound")
      c.fip_bound = v;
    else
      throw InputError("unknown config key '" + key + "'");
  }
  return c;
}

Json to_json(const Config& c) {
  return {{"precision_bits", c.precision_bits},
          {"ell_search_cap", c.ell_search_cap},
          {"alternating_search_cap", c.alternating_search_cap},
          {"eventual_positive_cap", c.eventual_positive_cap},
          {"compare_depth", c.compare_depth},
          {"game_size_bound", c.game_size_bound},
          {"fip_bound", c.fip_bound}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json make_artifact(const Json& command, const Config& config, const Result& result) {
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"command", command},
          {"kind", result.kind},
          {"config", to_json(config)},
          {"payload", result.payload},
          {"verification", result.verification}};
}

VerifyOutcome verify_artifact(const Json& artifact) {
  VerifyOutcome out;
  for (const char* key : {"tool", "version", "command", "kind", "config", "payload", "verification"})
    if (!artifact.contains(key)) throw InputError(std::string("artifact is missing '") + key + "'");
  if (artifact.at("tool") != kToolName) throw InputError("artifact was not produced by this tool");
  if (artifact.at("version") != kToolVersion)
    out.version_note = "artifact version " + artifact.at("version").get<std::string>() + ", replayed with " +
                       kToolVersion;

  const Config config = config_from_json(artifact.at("config"));
  const Result again = execute(artifact.at("command"), config);
  const Json fresh = make_artifact(artifact.at("command"), config, again);
  for (const char* key : {"kind", "payload", "verification"}) {
    if (fresh.at(key) == artifact.at(key)) continue;
    Json patch = Json::diff(artifact.at(key), fresh.at(key));
    std::string where = patch.empty() ? "" : patch[0].value("path", "");
    out.detail = std::string("recorded ") + key + " differs from the replay at '" + where + "'";
    return out;
  }
  out.matches = true;
  out.detail = "replay reproduces the recorded kind, payload and verification exactly";
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return kInputError;
  if (dynamic_cast<const PrecisionExceeded*>(&e)) return kPrecisionError;
  if (dynamic_cast<const ConstructionFailure*>(&e)) return kConstructionError;
  if (dynamic_cast<const SizeBoundExceeded*>(&e)) return kSizeBound;
  if (dynamic_cast<const IoError*>(&e)) return kIoError;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return kInputError;
  return 1;
}

std::string diagnostic(const std::exception& e) {
  const char* category = "internal";
  switch (exit_code_for(e)) {
    case kInputError:
      category = "input";
      break;
    case kPrecisionError:
      category = "precision";
      break;
    case kConstructionError:
      category = "construction";
      break;
    case kSizeBound:
      category = "size-bound";
      break;
    case kIoError:
      category = "io";
      break;
    default:
      break;
  }
  return Json{{"error", category}, {"message", e.what()}}.dump();
}

}  // namespace momtail::cli
