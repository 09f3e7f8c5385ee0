#pragma once

#include <string>
#include <vector>

namespace sigmalab {

/// %.12g with "-0" normalized to "0".
std::string fmt12(double v);

/// Header plus rows, comma separated, newline terminated.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<std::string>& cells);
    void add_numeric_row(const std::vector<double>& values);

    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes to path + ".tmp" and renames over path.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace sigmalab
