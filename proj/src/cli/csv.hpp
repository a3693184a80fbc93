#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace ringpair {
namespace cli {

// 9 significant digits, '.' decimal separator, locale independent.
std::string format_number(double value);

// CSV with LF line endings regardless of platform.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);

private:
    std::ofstream out_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace cli
} // namespace ringpair
