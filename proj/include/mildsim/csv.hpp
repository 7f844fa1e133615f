#pragma once

#include <filesystem>
#include <fstream>
#include <string>

namespace mildsim {

/// Shortest exact decimal for a double (%.17g); keeps CSV output bit-stable.
std::string format_g17(double v);

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const std::string& header);

    void raw_row(const std::string& line);

    template <typename... Ts>
    void row(Ts... vals) {
        std::string line;
        bool first = true;
        (append_cell(line, first, vals), ...);
        raw_row(line);
    }

private:
    static void append_cell(std::string& line, bool& first, double v);
    static void append_cell(std::string& line, bool& first, int v);
    static void append_cell(std::string& line, bool& first, long v);
    static void append_cell(std::string& line, bool& first, const std::string& v);
    static void append_cell(std::string& line, bool& first, const char* v);
    std::ofstream out_;
};

} // namespace mildsim
