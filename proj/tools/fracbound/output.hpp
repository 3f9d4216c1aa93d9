#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fracbound::app {

/// File could not be created or written. Maps to exit status 1.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest representation that round-trips to the same double; never depends
/// on the locale. Non-finite values print as nan, inf, -inf.
std::string format_number(double v);

/// Comma-separated table with a fixed header. Cells are written in order and
/// each row must supply exactly one cell per column.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& file, std::vector<std::string> header);

    CsvWriter& operator<<(double v);
    CsvWriter& operator<<(std::uint64_t v);
    CsvWriter& operator<<(std::string_view v);
    void end_row();

    const std::filesystem::path& file() const noexcept { return file_; }

private:
    void cell(std::string_view text);

    std::filesystem::path file_;
    std::ofstream out_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

void write_text(const std::filesystem::path& file, const std::string& text);

}  // namespace fracbound::app
