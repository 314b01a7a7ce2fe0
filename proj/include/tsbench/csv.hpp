#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tsbench {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column, or -1.
    int column(std::string_view name) const;
};

/// Splits one CSV record. Double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv_record(std::string_view line);

/// First non-empty line is the header. Blank lines are skipped; ragged rows are kept as-is.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace tsbench
