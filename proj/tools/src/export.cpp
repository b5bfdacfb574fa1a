#include "willmore/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace willmore::cli {

namespace {

void append(std::string& out, double x) { out += format_double(x); }

void append_quaternion(std::string& out, const Quaternion& q) {
  for (double c : {q.w, q.x, q.y, q.z}) {
    out += ',';
    append(out, c);
  }
}

double form_norm(const OneForm<HMat2>& w, std::size_t n) { return std::sqrt(w.cx[n].norm2() + w.cy[n].norm2()); }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string obj_text(const SurfaceChart& s) {
  const GridChart& c = s.chart();
  std::string out = "# willmore surface export\n";
  for (std::size_t n = 0; n < c.size(); ++n) {
    const Quaternion& g = s.g()[n];
    out += "v ";
    append(out, g.w);
    out += ' ';
    append(out, g.x);
    out += ' ';
    append(out, g.y);
    out += "\n# k ";
    append(out, g.z);
    out += '\n';
  }
  const int cells_x = c.periodic_x ? c.nx : c.nx - 1;
  const int cells_y = c.periodic_y ? c.ny : c.ny - 1;
  auto id = [&](int i, int j) { return std::to_string(c.index(i % c.nx, j % c.ny) + 1); };
  for (int j = 0; j < cells_y; ++j) {
    for (int i = 0; i < cells_x; ++i) {
      const std::string a = id(i, j), b = id(i + 1, j), d = id(i + 1, j + 1), e = id(i, j + 1);
      out += "f " + a + ' ' + b + ' ' + d + '\n';
      out += "f " + a + ' ' + d + ' ' + e + '\n';
    }
  }
  return out;
}

std::string csv_text(const SurfaceChart& s) {
  const GridChart& c = s.chart();
  std::string out = "u,v";
  for (const char* name : {"g", "N", "R", "H"})
    for (const char* part : {"re", "i", "j", "k"}) out += std::string(",") + name + "_" + part;
  out += ",abs_A,abs_Q\n";
  for (int j = 0; j < c.ny; ++j) {
    for (int i = 0; i < c.nx; ++i) {
      const std::size_t n = c.index(i, j);
      append(out, c.x(i));
      out += ',';
      append(out, c.y(j));
      append_quaternion(out, s.g()[n]);
      append_quaternion(out, s.N()[n]);
      append_quaternion(out, s.R()[n]);
      append_quaternion(out, s.H()[n]);
      out += ',';
      append(out, form_norm(s.hopf().A, n));
      out += ',';
      append(out, form_norm(s.hopf().Q, n));
      out += '\n';
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw IoError("write to " + path.string() + " failed");
}

}  // namespace willmore::cli
