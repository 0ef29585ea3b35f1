#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace cfmm {

struct CsvRow {
    std::string path;
    std::size_t line = 0;
    std::vector<std::string> fields;

    /// Field `i` as a finite double; throws ParseError naming the line.
    double number(std::size_t i) const;
    /// Field `i` verbatim.
    const std::string& text(std::size_t i) const { return fields.at(i); }
};

struct CsvTable {
    std::vector<CsvRow> rows;
};

/// Minimal comma-separated reader for the simulator's own formats: the first
/// line must equal `header` exactly; blank lines are skipped; every data row
/// must have header.size() fields.
CsvTable read_csv(const std::filesystem::path& path, const std::vector<std::string>& header);

/// Shortest round-trip decimal form, stable across runs.
std::string format_double(double v);

}  // namespace cfmm
