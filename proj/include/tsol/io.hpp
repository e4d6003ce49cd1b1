#pragma once

#include "tsol/geometry.hpp"

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tsol {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// %.17g, locale independent.
std::string format_real(double v);
/// RFC-4180: quoted when the field holds a comma, quote, CR or LF; quotes doubled.
std::string csv_field(std::string_view s);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Throws std::invalid_argument when the row width differs from the header.
  void add(std::vector<std::string> row);
  void write(std::ostream& out) const;  ///< CRLF line ends
};

/// Throws IoError when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Columns x0..xn, nu0..nun, H, interior, boundary.
CsvTable sample_table(const SurfaceSample& s);
/// Columns s, r, z, alpha.
CsvTable profile_table(const RotProfile& p);
/// Columns y0..y{n-1}, u over the active nodes.
CsvTable patch_table(const GraphPatch& p);

/// Triangulated graph over the active grid quads; 2D charts only.
/// Throws std::invalid_argument for other dimensions.
void write_obj(std::ostream& out, const GraphPatch& patch);
/// Surface of revolution of a profile in R^3 (dim 2 only).
void write_obj(std::ostream& out, const RotProfile& profile, Index angular);
void write_obj(const std::filesystem::path& path, const GraphPatch& patch);
void write_obj(const std::filesystem::path& path, const RotProfile& profile, Index angular);

}  // namespace tsol
