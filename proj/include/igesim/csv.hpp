#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace igesim {

// Deterministic float formatting shared by every emitter, so identical runs
// produce byte-identical files.
std::string fmt_num(double v);

struct CsvTable {
  std::string name;  // artifact stem, e.g. "error_cdf"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
  std::string render() const;  // header + rows, '\n' line endings
};

// Writes <dir>/<prefix>_<table.name>.csv, creating the directory if needed.
std::filesystem::path write_csv(const std::filesystem::path& dir,
                                const std::string& prefix, const CsvTable& table);

}  // namespace igesim
