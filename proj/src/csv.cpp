#include "tsbench/csv.hpp"

#include <fstream>
#include <sstream>

#include "tsbench/common.hpp"

namespace tsbench {

int CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return static_cast<int>(i);
    return -1;
}

std::vector<std::string> split_csv_record(std::string_view line)
{
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);

    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

CsvTable parse_csv(std::string_view text)
{
    CsvTable table;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto next = text.find('\n', pos);
        if (next == std::string_view::npos)
            next = text.size();
        auto line = text.substr(pos, next - pos);
        pos = next + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos)
            continue;
        auto fields = split_csv_record(line);
        if (!have_header) {
            for (auto& f : fields) {
                const auto b = f.find_first_not_of(" \t");
                const auto e = f.find_last_not_of(" \t");
                f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
            }
            table.header = std::move(fields);
            have_header = true;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw InputError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

CsvTable read_csv(const std::filesystem::path& path)
{
    return parse_csv(read_text_file(path));
}

} // namespace tsbench
