#include <algorithm>
#include <charconv>
#include <sstream>

#include "willmore/cli.hpp"

namespace willmore::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty())
    throw ValidationError(key, "'" + value + "' is not a valid number");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError(key, "'" + value + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::string field, std::string message)
    : field_(std::move(field)), text_("invalid " + field_ + ": " + message) {}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "surface", "res",  "kind",      "invert", "max-steps", "threads",           "out",
      "format",  "tol-scale", "seed", "umax",   "twistor-convention", "control-amplitude"};
  return keys;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config", "line " + std::to_string(number) + " is not of the form key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ValidationError(key.empty() ? "config" : key, "unknown key on line " + std::to_string(number));
    out[key] = value;
  }
  return out;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "surface") {
    c.surface.name = value;
  } else if (key == "res") {
    c.surface.resolution = parse_number<int>(key, value);
  } else if (key == "kind") {
    c.kind = value;
  } else if (key == "invert") {
    c.invert = parse_bool(key, value);
  } else if (key == "max-steps") {
    c.max_steps = parse_number<int>(key, value);
  } else if (key == "threads") {
    c.threads = parse_number<int>(key, value);
  } else if (key == "out") {
    c.out_dir = value;
  } else if (key == "format") {
    c.formats = split_list(value);
  } else if (key == "tol-scale") {
    c.tol_scale = parse_number<double>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "umax") {
    c.surface.umax = parse_number<double>(key, value);
  } else if (key == "twistor-convention") {
    if (value == "left") {
      c.surface.twistor_convention = TwistorConvention::LeftJ;
    } else if (value == "right") {
      c.surface.twistor_convention = TwistorConvention::RightJ;
    } else {
      throw ValidationError(key, "expected left or right, got '" + value + "'");
    }
  } else if (key == "control-amplitude") {
    c.surface.control_amplitude = parse_number<double>(key, value);
  } else {
    throw ValidationError(key, "unknown key");
  }
}

void validate(const RunConfig& c) {
  const auto& names = gallery_names();
  if (c.surface.name.empty()) throw ValidationError("surface", "no surface given");
  if (std::find(names.begin(), names.end(), c.surface.name) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw ValidationError("surface", "'" + c.surface.name + "' is not one of " + list);
  }
  if (c.surface.resolution < 8 || c.surface.resolution > 4096)
    throw ValidationError("res", "must be between 8 and 4096, got " + std::to_string(c.surface.resolution));
  if (c.kind != "one-step" && c.kind != "forward" && c.kind != "backward" && c.kind != "dual")
    throw ValidationError("kind", "expected one-step, forward, backward or dual, got '" + c.kind + "'");
  if (c.max_steps < 1 || c.max_steps > 64)
    throw ValidationError("max-steps", "must be between 1 and 64, got " + std::to_string(c.max_steps));
  if (c.threads < 1 || c.threads > 256)
    throw ValidationError("threads", "must be between 1 and 256, got " + std::to_string(c.threads));
  if (!(c.tol_scale > 0.0) || c.tol_scale > 1e6) throw ValidationError("tol-scale", "must be positive");
  if (c.out_dir.empty()) throw ValidationError("out", "empty output directory");
  for (const auto& f : c.formats)
    if (f != "obj" && f != "csv" && f != "json")
      throw ValidationError("format", "expected obj, csv or json, got '" + f + "'");
  if (!(c.surface.umax > 0.0) || c.surface.umax > 10.0) throw ValidationError("umax", "must be in (0, 10]");
  if (!(c.surface.control_amplitude >= 0.0) || c.surface.control_amplitude > 10.0)
    throw ValidationError("control-amplitude", "must be in [0, 10]");
}

}  // namespace willmore::cli
