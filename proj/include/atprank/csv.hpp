#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace atprank {

/// Comma-separated text with a header row. Fields may be double-quoted,
/// with "" as an escaped quote. CRLF line endings and a UTF-8 BOM are
/// tolerated.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable parse_csv(std::istream& in, const std::string& source_name = "<stream>");
CsvTable read_csv(const std::filesystem::path& path);

std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace atprank
