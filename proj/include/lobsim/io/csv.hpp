#pragma once
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace lobsim::io {

/// Shortest-round-trip decimal rendering (std::to_chars); locale-free and
/// parses back to the identical double.
std::string format_double(double v);
std::string format_int(std::int64_t v);

/// Buffered CSV writer with a mandatory header row.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();

    void begin_row();
    void field(double v);
    void field(std::int64_t v);
    void field(std::uint64_t v);
    void field(const std::string& v);
    void field(char c);
    void end_row();
    void flush();

private:
    std::ofstream out_;
    std::string buf_;
    bool first_field_ = true;
};

/// Whole-file CSV reader: header plus rows of string fields. Rejects rows
/// whose field count differs from the header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws integrity_error when missing.
    std::size_t col(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

double parse_double(const std::string& s, std::size_t lineno);
std::int64_t parse_int(const std::string& s, std::size_t lineno);

} // namespace lobsim::io
