#include "fracgs/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fracgs {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(std::ostream& out, const Field& u) {
  out << "x,u\n";
  for (std::size_t j = 0; j < u.size(); ++j) out << format_double(u.grid().x(j)) << ',' << format_double(u[j]) << '\n';
}

void write_field_csv(const std::filesystem::path& path, const Field& u) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_field_csv(out, u);
}

Field read_field_csv(std::istream& in, Boundary boundary) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("field csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,u") throw std::runtime_error("field csv: expected header \"x,u\", got \"" + line + "\"");
  std::vector<double> xs, us;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("field csv: missing comma on line " + std::to_string(row));
    try {
      xs.push_back(std::stod(line.substr(0, comma)));
      us.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw std::runtime_error("field csv: unparsable number on line " + std::to_string(row));
    }
  }
  if (xs.size() < 2) throw std::runtime_error("field csv: too few rows");
  const double half_width = -xs.front();
  GridSpec grid(half_width, xs.size(), boundary);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (std::abs(xs[j] - grid.x(j)) > 1e-9 * grid.spacing())
      throw std::runtime_error("field csv: non-uniform or non-symmetric x at row " + std::to_string(j + 2));
  }
  return Field(grid, std::move(us));
}

Field read_field_csv(const std::filesystem::path& path, Boundary boundary) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_field_csv(in, boundary);
}

}  // namespace fracgs
