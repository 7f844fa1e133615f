#include "mildsim/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace mildsim {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvFile::CsvFile(const std::filesystem::path& path, const std::string& header)
    : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out_ << header << "\n";
}

void CsvFile::raw_row(const std::string& line) { out_ << line << "\n"; }

void CsvFile::append_cell(std::string& line, bool& first, double v) {
    if (!first) line += ',';
    first = false;
    line += format_g17(v);
}

void CsvFile::append_cell(std::string& line, bool& first, int v) {
    if (!first) line += ',';
    first = false;
    line += std::to_string(v);
}

void CsvFile::append_cell(std::string& line, bool& first, long v) {
    if (!first) line += ',';
    first = false;
    line += std::to_string(v);
}

void CsvFile::append_cell(std::string& line, bool& first, const std::string& v) {
    if (!first) line += ',';
    first = false;
    line += v;
}

void CsvFile::append_cell(std::string& line, bool& first, const char* v) {
    if (!first) line += ',';
    first = false;
    line += v;
}

} // namespace mildsim
