#pragma once

// Text exports of a sampled surface.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "willmore/mcs.hpp"

namespace willmore::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vertices (1, i, j) coefficients of g, each followed by a `# k <value>`
/// comment carrying the fourth coefficient; grid quads split into two
/// triangles, wrapping across periodic directions.
std::string obj_text(const SurfaceChart& s);

/// Header plus one row per node: u, v, g, N, R, H (four reals each), |A|, |Q|.
std::string csv_text(const SurfaceChart& s);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace willmore::cli
