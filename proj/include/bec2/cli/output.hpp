#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bec2::cli
{

/// Shortest decimal that parses back to v; "-0" prints as "0".
std::string format_double(double v);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

struct FileRecord
{
    std::string name;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

/// Comma-separated rows with LF line ends, kept in memory until written.
class CsvWriter
{
public:
    explicit CsvWriter(const std::vector<std::string>& header);

    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
    CsvWriter& cell(std::string_view v);
    void end_row();

    const std::string& text() const { return text_; }

private:
    std::string text_;
    bool row_open_ = false;
};

/// Writes dir/name and returns its checksum record. Throws std::runtime_error.
FileRecord write_file(const std::filesystem::path& dir, const std::string& name,
                      std::string_view bytes);

struct Series
{
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::string svg_line_plot(const std::string& title, const std::string& xlabel,
                          const std::string& ylabel, const std::vector<Series>& series);

/// values[row][col] over y[row], x[col]; drawn as a grid of cells.
std::string svg_heatmap(const std::string& title, const std::string& xlabel,
                        const std::string& ylabel, const std::vector<double>& x,
                        const std::vector<double>& y,
                        const std::vector<std::vector<double>>& values);

} // namespace bec2::cli
