#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "willmore/cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace willmore::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "willmore");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("willmore-cli-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream ss(text);
  for (std::string l; std::getline(ss, l);) v.push_back(l);
  return v;
}

bool type_matches(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

// Enough of draft-07 for the report schema.
void check_schema(const json& schema, const json& value, const std::string& where, std::vector<std::string>& errors) {
  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) ok = type_matches(value, t);
    else
      for (const auto& x : t) ok = ok || type_matches(value, x);
    if (!ok) errors.push_back(where + ": type");
  }
  if (schema.contains("enum") && std::find(schema["enum"].begin(), schema["enum"].end(), value) == schema["enum"].end())
    errors.push_back(where + ": enum");
  if (value.is_number()) {
    if (schema.contains("minimum") && value.get<double>() < schema["minimum"].get<double>()) errors.push_back(where + ": minimum");
    if (schema.contains("exclusiveMinimum") && value.get<double>() <= schema["exclusiveMinimum"].get<double>())
      errors.push_back(where + ": exclusiveMinimum");
  }
  if (!value.is_object()) return;
  if (schema.contains("required"))
    for (const auto& k : schema["required"])
      if (!value.contains(k.get<std::string>())) errors.push_back(where + ": missing " + k.get<std::string>());
  const json props = schema.value("properties", json::object());
  for (const auto& [k, v] : value.items()) {
    if (props.contains(k)) check_schema(props[k], v, where + "/" + k, errors);
    else if (schema.contains("additionalProperties")) {
      const json& extra = schema["additionalProperties"];
      if (extra.is_boolean() && !extra.get<bool>()) errors.push_back(where + ": unexpected " + k);
      else if (extra.is_object()) check_schema(extra, v, where + "/" + k, errors);
    }
  }
}

std::vector<std::string> schema_errors(const json& report) {
  static const json schema = json::parse(slurp(WILLMORE_SCHEMA_PATH));
  std::vector<std::string> errors;
  check_schema(schema, report, "", errors);
  return errors;
}

}  // namespace

TEST_CASE("exit codes") {
  const std::string out = scratch("codes").string();
  CHECK(run_cli({"analyze", "clifford-torus", "--res", "32", "--out", out}).code == kOk);
  CHECK(run_cli({"analyze", "no-such-surface", "--out", out}).code == kValidation);
  CHECK(run_cli({"analyze", "clifford-torus", "--bogus", "1"}).code == kValidation);
  CHECK(run_cli({"analyze", "clifford-torus", "--threads", "0"}).code == kValidation);
  CHECK(run_cli({"analyze", "clifford-torus", "--res", "0"}).code == kValidation);
  CHECK(run_cli({"transform", "clifford-torus", "--kind", "sideways"}).code == kValidation);
  CHECK(run_cli({"transform", "non-willmore-control", "--res", "64", "--out", out}).code == kGateFailure);
  CHECK(run_cli({"sequence", "non-willmore-control", "--res", "64", "--out", out}).code == kGateFailure);
  CHECK(run_cli({"transform", "twistor-cubic", "--res", "64", "--out", out}).code == kTwistor);
  CHECK(run_cli({"sequence", "twistor-cubic", "--res", "64", "--out", out}).code == kTwistor);
  CHECK(run_cli({"transform", "catenoid", "--res", "64", "--out", out}).code == kMinimal);
  CHECK(run_cli({"sequence", "catenoid", "--res", "64", "--out", out}).code == kMinimal);
  CHECK(run_cli({"export", "clifford-torus", "--res", "16", "--out", "/proc/willmore-nope"}).code == kIoError);
  CHECK(run_cli({"analyze", "clifford-torus", "--config", "/nonexistent/willmore.cfg"}).code == kIoError);
}

TEST_CASE("validation messages name the field") {
  const Run r = run_cli({"analyze", "clifford-torus", "--res", "abc"});
  CHECK(r.code == kValidation);
  CHECK(r.err.find("res") != std::string::npos);
}

TEST_CASE("config file parsing") {
  const auto m = parse_config_text("# comment\nres = 48\n\nsurface=catenoid  # trailing\nformat = obj,csv\n");
  CHECK(m.at("res") == "48");
  CHECK(m.at("surface") == "catenoid");
  CHECK(m.at("format") == "obj,csv");
  CHECK_THROWS_AS(parse_config_text("colour = blue\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("res 48\n"), ValidationError);

  RunConfig c;
  apply_setting(c, "res", "48");
  apply_setting(c, "format", "obj,json");
  CHECK(c.surface.resolution == 48);
  CHECK(c.formats == std::vector<std::string>{"obj", "json"});
  CHECK_THROWS_AS(apply_setting(c, "res", "4x"), ValidationError);
  c.command = "analyze";
  c.surface.name = "clifford-torus";
  CHECK_NOTHROW(validate(c));
  RunConfig bad_format = c;
  apply_setting(bad_format, "format", "stl");
  CHECK_THROWS_AS(validate(bad_format), ValidationError);
  RunConfig bad_scale = c;
  apply_setting(bad_scale, "tol-scale", "-1");
  CHECK_THROWS_AS(validate(bad_scale), ValidationError);
}

TEST_CASE("flags override the config file which overrides the environment") {
  const fs::path dir = scratch("precedence");
  const fs::path env_dir = dir / "env";
  const fs::path cfg_dir = dir / "cfg";
  const fs::path flag_dir = dir / "flag";
  {
    std::ofstream(dir / "run.cfg") << "res = 16\nout = " << cfg_dir.string() << "\n";
  }
  ::setenv("WILLMORE_OUT", env_dir.string().c_str(), 1);
  CHECK(run_cli({"analyze", "clifford-torus", "--res", "16"}).code == kOk);
  CHECK(fs::exists(env_dir / "analyze-clifford-torus.json"));
  CHECK(run_cli({"analyze", "clifford-torus", "--config", (dir / "run.cfg").string()}).code == kOk);
  CHECK(fs::exists(cfg_dir / "analyze-clifford-torus.json"));
  CHECK(run_cli({"analyze", "clifford-torus", "--config", (dir / "run.cfg").string(), "--out", flag_dir.string(), "--res", "24"})
            .code == kOk);
  ::unsetenv("WILLMORE_OUT");
  const json r = json::parse(slurp(flag_dir / "analyze-clifford-torus.json"));
  CHECK(r["resolution"] == 24);
  CHECK(json::parse(slurp(cfg_dir / "analyze-clifford-torus.json"))["resolution"] == 16);
}

TEST_CASE("OBJ and CSV exports of the Clifford torus") {
  const fs::path dir = scratch("export");
  const int n = 24;
  REQUIRE(run_cli({"export", "clifford-torus", "--res", std::to_string(n), "--out", dir.string()}).code == kOk);
  int vertices = 0, faces = 0;
  for (const auto& l : lines(slurp(dir / "clifford-torus.obj"))) {
    vertices += l.rfind("v ", 0) == 0;
    faces += l.rfind("f ", 0) == 0;
  }
  CHECK(vertices == n * n);
  CHECK(faces == 2 * n * n);
  const auto csv = lines(slurp(dir / "clifford-torus.csv"));
  REQUIRE(!csv.empty());
  CHECK(csv.front().rfind("u,v,", 0) == 0);
  CHECK(csv.size() == static_cast<std::size_t>(n * n + 1));
  CHECK(schema_errors(json::parse(slurp(dir / "export-clifford-torus.json"))).empty());
}

TEST_CASE("reports satisfy the schema") {
  const fs::path dir = scratch("schema");
  const std::vector<std::vector<std::string>> runs = {
      {"analyze", "round-sphere"},         {"analyze", "catenoid"},
      {"transform", "clifford-torus", "--kind", "dual"}, {"transform", "clifford-torus", "--kind", "forward"},
      {"transform", "clifford-torus", "--kind", "one-step"}, {"transform", "catenoid", "--invert"},
      {"transform", "twistor-cubic", "--kind", "backward"}, {"sequence", "clifford-torus", "--max-steps", "1"},
      {"sequence", "twistor-cubic"},
  };
  for (auto args : runs) {
    args.insert(args.end(), {"--res", "32", "--out", dir.string()});
    const int code = run_cli(args).code;
    CHECK(code != kValidation);
    CHECK(code != kIoError);
  }
  int reports = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    ++reports;
    const auto errors = schema_errors(json::parse(slurp(e.path())));
    INFO(e.path().string() << ": " << (errors.empty() ? "" : errors.front()));
    CHECK(errors.empty());
  }
  CHECK(reports >= 8);

  json bad = json::parse(slurp(dir / "analyze-catenoid.json"));
  bad["provenance"]["command"] = "explode";
  bad["extra"] = 1;
  CHECK(schema_errors(bad).size() == 2);
}

TEST_CASE("identical configs give byte-identical reports") {
  const fs::path a = scratch("det-a");
  const fs::path b = scratch("det-b");
  for (const auto& dir : {a, b}) {
    REQUIRE(run_cli({"sequence", "clifford-torus", "--res", "48", "--max-steps", "1", "--out", dir.string()}).code == kOk);
    REQUIRE(run_cli({"transform", "clifford-torus-inverted", "--res", "48", "--out", dir.string()}).code == kOk);
  }
  CHECK(slurp(a / "sequence-clifford-torus.json") == slurp(b / "sequence-clifford-torus.json"));
  CHECK(slurp(a / "transform-clifford-torus-inverted-forward.json") == slurp(b / "transform-clifford-torus-inverted-forward.json"));
}
