#include "igesim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "igesim/errors.hpp"

namespace igesim {

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string CsvTable::render() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::filesystem::path write_csv(const std::filesystem::path& dir,
                                const std::string& prefix, const CsvTable& table) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (prefix + "_" + table.name + ".csv");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << table.render();
  return path;
}

}  // namespace igesim
