#pragma once

#include <string>
#include <vector>

namespace coreset {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a named column; throws ConfigError if absent.
    std::size_t column(const std::string& name) const;
};

// Delimited text with a header row. Handles double-quoted fields and
// trims surrounding whitespace from unquoted cells.
CsvTable read_csv(const std::string& path, char separator = ',');

}  // namespace coreset
