#include "lobsim/io/csv.hpp"

#include <charconv>

#include "lobsim/errors.hpp"

namespace lobsim::io {

std::string format_double(double v) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

std::string format_int(std::int64_t v) {
    char buf[24];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary) {
    if (!out_) throw error("cannot open for writing: " + path);
    buf_.reserve(1 << 20);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += header[i];
    }
    buf_ += '\n';
}

CsvWriter::~CsvWriter() { flush(); }

void CsvWriter::begin_row() { first_field_ = true; }

void CsvWriter::field(double v) {
    if (!first_field_) buf_ += ',';
    first_field_ = false;
    char tmp[32];
    const auto [p, ec] = std::to_chars(tmp, tmp + sizeof tmp, v);
    (void)ec;
    buf_.append(tmp, p);
}

void CsvWriter::field(std::int64_t v) {
    if (!first_field_) buf_ += ',';
    first_field_ = false;
    char tmp[24];
    const auto [p, ec] = std::to_chars(tmp, tmp + sizeof tmp, v);
    (void)ec;
    buf_.append(tmp, p);
}

void CsvWriter::field(std::uint64_t v) {
    if (!first_field_) buf_ += ',';
    first_field_ = false;
    char tmp[24];
    const auto [p, ec] = std::to_chars(tmp, tmp + sizeof tmp, v);
    (void)ec;
    buf_.append(tmp, p);
}

void CsvWriter::field(const std::string& v) {
    if (!first_field_) buf_ += ',';
    first_field_ = false;
    buf_ += v;
}

void CsvWriter::field(char c) {
    if (!first_field_) buf_ += ',';
    first_field_ = false;
    buf_ += c;
}

void CsvWriter::end_row() {
    buf_ += '\n';
    if (buf_.size() > (1 << 20) - 256) flush();
}

void CsvWriter::flush() {
    if (!buf_.empty()) {
        out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        buf_.clear();
    }
    out_.flush();
}

std::size_t CsvTable::col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw integrity_error("csv: missing column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw integrity_error("cannot open csv: " + path);
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (lineno == 1) {
            table.header = std::move(fields);
        } else {
            if (fields.size() != table.header.size())
                throw integrity_error("csv line " + std::to_string(lineno) +
                                      ": expected " + std::to_string(table.header.size()) +
                                      " fields, got " + std::to_string(fields.size()));
            table.rows.push_back(std::move(fields));
        }
    }
    if (table.header.empty()) throw integrity_error("csv: missing header: " + path);
    return table;
}

double parse_double(const std::string& s, std::size_t lineno) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw integrity_error("csv line " + std::to_string(lineno) + ": bad number '" + s + "'");
    return out;
}

std::int64_t parse_int(const std::string& s, std::size_t lineno) {
    std::int64_t out = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw integrity_error("csv line " + std::to_string(lineno) + ": bad integer '" + s + "'");
    return out;
}

} // namespace lobsim::io
