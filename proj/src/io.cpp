#include "kramers/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace kramers::io {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(fmt(x).c_str(), nullptr);
}

Json vec3(const Vec3& v) { return Json::array({number(v.x()), number(v.y()), number(v.z())}); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error("config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

scf::FloatingBasis parse_basis(const std::string& text) {
  scf::FloatingBasis b;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw Error("basis line " + std::to_string(lineno) + ": " + what);
  };
  auto next = [&](bool keep_blank) {
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
      line = trim(line);
      if (!line.empty() || keep_blank) return true;
    }
    return false;
  };
  if (!next(false)) fail("empty basis");
  std::istringstream head(line);
  std::string word;
  int n = 0;
  if (!(head >> word >> n) || word != "centers" || n < 1) fail("expected 'centers <n>'");
  for (int i = 0; i < n; ++i) {
    if (!next(false)) fail("missing centre line");
    std::istringstream ls(line);
    Vec3 c;
    if (!(ls >> c.x() >> c.y() >> c.z())) fail("expected 'cx cy cz'");
    b.centers.push_back(c);
  }
  if (!next(false) || line != "primitives") fail("expected 'primitives'");
  bool open = false;
  while (next(true)) {
    if (line.empty()) {
      open = false;
      continue;
    }
    std::istringstream ls(line);
    int center;
    scf::Primitive p;
    if (!(ls >> center >> p.exponent >> p.coefficient)) fail("expected 'center_index exponent coefficient'");
    if (!open || b.functions.back().center != center) {
      b.functions.push_back({center, {}});
      open = true;
    }
    b.functions.back().primitives.push_back(p);
  }
  b.normalize();
  return b;
}

std::string format_basis(const scf::FloatingBasis& basis) {
  std::ostringstream out;
  out << "centers " << basis.centers.size() << "\n";
  for (const auto& c : basis.centers) out << fmt(c.x()) << " " << fmt(c.y()) << " " << fmt(c.z()) << "\n";
  out << "primitives\n";
  for (std::size_t i = 0; i < basis.functions.size(); ++i) {
    if (i) out << "\n";
    for (const auto& p : basis.functions[i].primitives)
      out << basis.functions[i].center << " " << fmt(p.exponent) << " " << fmt(p.coefficient) << "\n";
  }
  return out.str();
}

}  // namespace kramers::io
