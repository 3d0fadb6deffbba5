#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fracgs/grid.hpp"

namespace fracgs {

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// CSV with header "x,u", one row per grid point.
void write_field_csv(std::ostream& out, const Field& u);
void write_field_csv(const std::filesystem::path& path, const Field& u);

/// Reads a field CSV and reconstructs its grid (L = -x_0, N = rows). Rows
/// must be uniformly spaced with an even count.
Field read_field_csv(std::istream& in, Boundary boundary = Boundary::whole_line);
Field read_field_csv(const std::filesystem::path& path, Boundary boundary = Boundary::whole_line);

}  // namespace fracgs
