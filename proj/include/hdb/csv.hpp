#pragma once

#include "hdb/errors.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace hdb::csv {

// Minimal RFC 4180-style reader: comma separated, optional double-quote
// escaping, tolerant of CRLF line endings. Rows keep their 1-based line
// number for diagnostics.
class Reader {
  public:
    Reader(std::istream &in, std::string file_name)
        : in_(in), file_(std::move(file_name)) {}

    const std::string &file() const { return file_; }
    std::size_t line() const { return line_; }

    std::optional<std::vector<std::string>> next_row() {
        std::string raw;
        if (!std::getline(in_, raw)) return std::nullopt;
        ++line_;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            char c = raw[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < raw.size() && raw[i + 1] == '"') {
                        cur += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    cur += c;
                }
            } else if (c == '"' && cur.empty()) {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (quoted) throw CsvError(file_, line_, "unterminated quoted field");
        fields.push_back(std::move(cur));
        return fields;
    }

  private:
    std::istream &in_;
    std::string file_;
    std::size_t line_ = 0;
};

inline double parse_double(std::string_view s, const std::string &file, std::size_t line,
                           std::string_view column) {
    double value = 0.0;
    const char *first = s.data();
    const char *last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw CsvError(file, line, "column " + std::string(column) + ": not a number: '" +
                                       std::string(s) + "'");
    return value;
}

inline long parse_long(std::string_view s, const std::string &file, std::size_t line,
                       std::string_view column) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw CsvError(file, line, "column " + std::string(column) + ": not an integer: '" +
                                       std::string(s) + "'");
    return value;
}

// Shortest round-trip decimal representation. Used for every numeric output
// so identical values always serialize to identical bytes.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline bool needs_quoting(std::string_view field) {
    return field.find_first_of(",\"\n\r") != std::string_view::npos;
}

inline std::string quote(std::string_view field) {
    if (!needs_quoting(field)) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string join_row(const std::vector<std::string> &fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out += ',';
        out += quote(fields[i]);
    }
    out += '\n';
    return out;
}

// Buffered writer; content is assembled in memory and flushed once so a
// failed run never leaves a truncated file behind.
class Writer {
  public:
    explicit Writer(std::vector<std::string> header) { row(header); }

    void row(const std::vector<std::string> &fields) { body_ += join_row(fields); }
    const std::string &content() const { return body_; }

    void write_to(const std::string &path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot open for writing: " + path);
        out << body_;
    }

  private:
    std::string body_;
};

} // namespace hdb::csv
