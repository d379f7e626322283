#include "sphereconv/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sphereconv {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& tok, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const std::string t = trim(tok);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + t + "'");
  return v;
}

struct KnotRow {
  Vec3 x;
  double r, c;
};

std::vector<KnotRow> read_rows(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t ln = 0;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  ++ln;
  if (trim(line) != "x,y,z,r,c") throw IoError(path.string() + ": expected header x,y,z,r,c");
  std::vector<KnotRow> rows;
  while (std::getline(in, line)) {
    ++ln;
    if (trim(line).empty()) continue;
    std::vector<std::string> tok;
    std::stringstream ss(line);
    std::string t;
    while (std::getline(ss, t, ',')) tok.push_back(t);
    if (tok.size() != 5)
      throw IoError(path.string() + ":" + std::to_string(ln) + ": expected 5 columns");
    KnotRow r;
    for (int a = 0; a < 3; ++a) r.x[a] = parse_double(tok[a], path, ln);
    r.r = parse_double(tok[3], path, ln);
    r.c = parse_double(tok[4], path, ln);
    rows.push_back(r);
  }
  return rows;
}

void write_header(std::ostream& out, const UniformGrid& g) {
  out << g.dimension() << ' ' << g.per_axis() << ' ' << g.per_axis() << ' ' << g.per_axis();
  if (g.dimension() == 4) out << ' ' << g.r_count();
  out << ' ' << g.half_extent() << '\n';
}

UniformGrid read_header(std::istream& in, const std::filesystem::path& path) {
  int d = 0;
  if (!(in >> d) || (d != 3 && d != 4)) throw IoError(path.string() + ": bad dimension in header");
  int n[4] = {0, 0, 0, 0};
  for (int a = 0; a < d; ++a)
    if (!(in >> n[a]) || n[a] <= 0) throw IoError(path.string() + ": bad node count in header");
  double L = 0.0;
  if (!(in >> L) || !(L > 0.0)) throw IoError(path.string() + ": bad extent in header");
  if (n[0] != n[1] || n[1] != n[2]) throw IoError(path.string() + ": only cubic grids are supported");
  return UniformGrid(L, n[0], d == 4 ? n[3] : 0);
}

}  // namespace

std::string knots_csv(const KnotSet4& k) {
  std::string s = "x,y,z,r,c\n";
  char buf[256];
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Ball& b = k.knots()[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", b.center.x(), b.center.y(),
                  b.center.z(), b.radius, k.weights()[i]);
    s += buf;
  }
  return s;
}

void write_knots_csv(const std::filesystem::path& path, const KnotSet4& k) {
  write_text(path, knots_csv(k));
}

void write_knots_csv(const std::filesystem::path& path, const KnotSet3& k) {
  write_text(path, knots_csv(KnotSet4::lift(k, 1.0)));
}

KnotSet4 read_knots_csv(const std::filesystem::path& path, double trim_height) {
  const auto rows = read_rows(path);
  std::vector<Ball> balls;
  std::vector<double> w;
  for (const auto& r : rows) {
    if (!(r.r > 0.0)) throw IoError(path.string() + ": knot radius must be positive");
    balls.push_back({r.x, r.r});
    w.push_back(r.c);
  }
  return KnotSet4(std::move(balls), trim_height, std::move(w));
}

KnotSet3 read_knots3_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw IoError(path.string() + ": no knots");
  std::vector<Vec3> pts;
  std::vector<double> w;
  for (const auto& r : rows) {
    if (r.r != rows.front().r) throw IoError(path.string() + ": radii differ; not an equiradius set");
    pts.push_back(r.x);
    w.push_back(r.c);
  }
  if (!(rows.front().r > 0.0)) throw IoError(path.string() + ": knot radius must be positive");
  return KnotSet3(std::move(pts), rows.front().r, std::move(w));
}

void write_scalar_field(const std::filesystem::path& path, const ScalarField& f) {
  auto out = open_out(path);
  write_header(out, f.grid);
  char buf[64];
  for (double v : f.values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
  finish(out, path);
}

ScalarField read_scalar_field(const std::filesystem::path& path) {
  auto in = open_in(path);
  ScalarField f(read_header(in, path));
  for (auto& v : f.values)
    if (!(in >> v)) throw IoError(path.string() + ": too few values");
  std::string extra;
  if (in >> extra) throw IoError(path.string() + ": trailing data");
  return f;
}

void write_spectral_field(const std::filesystem::path& path, const SpectralField& f) {
  auto out = open_out(path);
  write_header(out, f.grid);
  char buf[96];
  for (const auto& c : f.coeffs) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", c.real(), c.imag());
    out << buf;
  }
  finish(out, path);
}

SpectralField read_spectral_field(const std::filesystem::path& path) {
  auto in = open_in(path);
  SpectralField f(read_header(in, path));
  for (auto& c : f.coeffs) {
    double re, im;
    if (!(in >> re >> im)) throw IoError(path.string() + ": too few values");
    c = {re, im};
  }
  std::string extra;
  if (in >> extra) throw IoError(path.string() + ": trailing data");
  return f;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

}  // namespace sphereconv
