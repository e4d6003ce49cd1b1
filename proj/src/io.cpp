#include "tsol/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace tsol {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("CSV row width differs from header");
  rows.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
  const auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out << ',';
      out << csv_field(cells[i]);
    }
    out << "\r\n";
  };
  line(columns);
  for (const auto& r : rows) line(r);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  close_out(out, path);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  auto out = open_out(path);
  table.write(out);
  close_out(out, path);
}

CsvTable sample_table(const SurfaceSample& s) {
  CsvTable t;
  const Index m = s.ambient_dim();
  for (Index k = 0; k < m; ++k) t.columns.push_back("x" + std::to_string(k));
  for (Index k = 0; k < m; ++k) t.columns.push_back("nu" + std::to_string(k));
  t.columns.insert(t.columns.end(), {"H", "interior", "boundary"});
  for (Index i = 0; i < s.size(); ++i) {
    std::vector<std::string> row;
    for (Index k = 0; k < m; ++k) row.push_back(format_real(s.points(i, k)));
    for (Index k = 0; k < m; ++k) row.push_back(format_real(s.normals(i, k)));
    row.push_back(format_real(s.mean_curvature(i)));
    const auto flag = [](const std::vector<char>& v, Index i) {
      return std::string(static_cast<std::size_t>(i) < v.size() && v[static_cast<std::size_t>(i)] ? "1" : "0");
    };
    row.push_back(flag(s.interior, i));
    row.push_back(flag(s.boundary, i));
    t.add(std::move(row));
  }
  return t;
}

CsvTable profile_table(const RotProfile& p) {
  CsvTable t{{"s", "r", "z", "alpha"}, {}};
  for (std::size_t i = 0; i < p.samples.size(); ++i) {
    const auto& q = p.samples[i];
    t.add({format_real(p.step * static_cast<double>(i)), format_real(q.r), format_real(q.z), format_real(q.alpha)});
  }
  return t;
}

CsvTable patch_table(const GraphPatch& p) {
  CsvTable t;
  for (Index k = 0; k < p.domain_dim(); ++k) t.columns.push_back("y" + std::to_string(k));
  t.columns.push_back("u");
  for (Index node = 0; node < p.grid.size(); ++node) {
    if (!p.active(node)) continue;
    const Vector y = p.grid.coordinate(node);
    std::vector<std::string> row;
    for (Index k = 0; k < y.size(); ++k) row.push_back(format_real(y(k)));
    row.push_back(format_real(p.values(node)));
    t.add(std::move(row));
  }
  return t;
}

void write_obj(std::ostream& out, const GraphPatch& patch) {
  if (patch.domain_dim() != 2) throw std::invalid_argument("OBJ export needs a surface in R^3");
  std::vector<Index> index(static_cast<std::size_t>(patch.grid.size()), 0);
  Index next = 1;
  for (Index node = 0; node < patch.grid.size(); ++node) {
    if (!patch.active(node)) continue;
    const LocalVector p = patch.point(node);
    out << "v " << format_real(p(0)) << ' ' << format_real(p(1)) << ' ' << format_real(p(2)) << '\n';
    index[static_cast<std::size_t>(node)] = next++;
  }
  for (Index node = 0; node < patch.grid.size(); ++node) {
    const auto a = patch.grid.shifted(node, 0, 1);
    const auto b = patch.grid.shifted(node, 1, 1);
    if (!a || !b) continue;
    const auto c = patch.grid.shifted(*a, 1, 1);
    const Index i0 = index[static_cast<std::size_t>(node)], i1 = index[static_cast<std::size_t>(*a)];
    const Index i2 = index[static_cast<std::size_t>(*c)], i3 = index[static_cast<std::size_t>(*b)];
    if (i0 == 0 || i1 == 0 || i2 == 0 || i3 == 0) continue;
    out << "f " << i0 << ' ' << i1 << ' ' << i2 << '\n' << "f " << i0 << ' ' << i2 << ' ' << i3 << '\n';
  }
}

void write_obj(std::ostream& out, const RotProfile& profile, Index angular) {
  if (profile.dim != 2) throw std::invalid_argument("OBJ export needs a surface in R^3");
  if (angular < 3) throw std::invalid_argument("OBJ export needs at least 3 angular samples");
  const auto rows = static_cast<Index>(profile.samples.size());
  for (const auto& q : profile.samples) {
    for (Index j = 0; j < angular; ++j) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(angular);
      out << "v " << format_real(q.r * std::cos(phi)) << ' ' << format_real(q.r * std::sin(phi)) << ' '
          << format_real(q.z) << '\n';
    }
  }
  for (Index i = 0; i + 1 < rows; ++i) {
    for (Index j = 0; j < angular; ++j) {
      const Index a = i * angular + j + 1, b = i * angular + (j + 1) % angular + 1;
      const Index c = b + angular, d = a + angular;
      out << "f " << a << ' ' << b << ' ' << c << '\n' << "f " << a << ' ' << c << ' ' << d << '\n';
    }
  }
}

void write_obj(const std::filesystem::path& path, const GraphPatch& patch) {
  std::ostringstream buf;
  write_obj(buf, patch);
  write_text(path, buf.str());
}

void write_obj(const std::filesystem::path& path, const RotProfile& profile, Index angular) {
  std::ostringstream buf;
  write_obj(buf, profile, angular);
  write_text(path, buf.str());
}

}  // namespace tsol
