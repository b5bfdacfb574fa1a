#pragma once

// Command-line front end. `run` is the whole program so tests can drive it
// in-process; main() only forwards to it.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "willmore/gallery.hpp"

namespace willmore::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kGateFailure = 3,
  kTwistor = 4,
  kMinimal = 5,
  kIoError = 6,
};

struct RunConfig {
  std::string command;
  SurfaceSpec surface;
  std::string kind = "forward";  // one-step | forward | backward | dual
  bool invert = false;
  int max_steps = 3;
  int threads = 1;
  std::string out_dir = "willmore-out";
  std::vector<std::string> formats;  // obj | csv | json
  double tol_scale = 1.0;
  std::uint64_t seed = 0;
};

/// Thrown for anything a user can fix in the flags or config file.
class ValidationError : public std::exception {
 public:
  ValidationError(std::string field, std::string message);
  const char* what() const noexcept override { return text_.c_str(); }
  const std::string& field() const { return field_; }

 private:
  std::string field_;
  std::string text_;
};

/// Key-value config text: one `key = value` per line, `#` starts a comment,
/// keys are the long flag names without dashes. Unknown keys are rejected.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Applies settings (config file or flags) onto `config`. Values that do not
/// parse throw ValidationError naming the key; ranges are left to validate().
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Checks ranges and cross-field invariants; throws ValidationError.
void validate(const RunConfig& config);

const std::vector<std::string>& config_keys();

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace willmore::cli
