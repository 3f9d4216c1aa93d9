#include "output.hpp"

#include <charconv>
#include <cmath>

namespace fracbound::app {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& file, std::vector<std::string> header)
    : file_(file), out_(file, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) throw IoError("cannot write '" + file.string() + "'");
    for (const auto& h : header) cell(h);
    end_row();
}

void CsvWriter::cell(std::string_view text) {
    if (filled_ == columns_) throw std::logic_error("csv row has too many cells");
    if (filled_ > 0) out_ << ',';
    if (text.find_first_of(",\"\n") == std::string_view::npos) {
        out_ << text;
    } else {
        out_ << '"';
        for (char ch : text) {
            if (ch == '"') out_ << '"';
            out_ << ch;
        }
        out_ << '"';
    }
    ++filled_;
}

CsvWriter& CsvWriter::operator<<(double v) {
    cell(format_number(v));
    return *this;
}

CsvWriter& CsvWriter::operator<<(std::uint64_t v) {
    cell(std::to_string(v));
    return *this;
}

CsvWriter& CsvWriter::operator<<(std::string_view v) {
    cell(v);
    return *this;
}

void CsvWriter::end_row() {
    if (filled_ != columns_) throw std::logic_error("csv row has too few cells");
    out_ << '\n';
    filled_ = 0;
    if (!out_) throw IoError("write to '" + file_.string() + "' failed");
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + file.string() + "'");
    out << text;
    if (!out) throw IoError("write to '" + file.string() + "' failed");
}

}  // namespace fracbound::app
