// SPDX-License-Identifier: Apache-2.0
#include "jumpsde/format.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>

#include "jumpsde/error.hpp"

namespace jumpsde {

std::string format_short(double v) {
    if (!std::isfinite(v)) {
        return format_real(v);
    }
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string format_real(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_real(std::string_view text, std::string_view what) {
    const std::string s(trim(text));
    if (s.empty()) {
        throw ValidationError("empty value for " + std::string(what));
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        throw ValidationError("invalid " + std::string(what) + " '" + s + "'");
    }
    return v;
}

std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string> split_top_level(std::string_view s, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') {
            ++depth;
        } else if (s[i] == ')') {
            --depth;
        } else if (s[i] == sep && depth == 0) {
            parts.emplace_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    parts.emplace_back(trim(s.substr(start)));
    return parts;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw ValidationError("csv has no column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::string_view name) const {
    return parse_real(rows.at(row).at(column(name)), name);
}

CsvTable read_csv_table(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') {
            continue;
        }
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = view.find(',', start);
            cells.emplace_back(trim(view.substr(start, comma - start)));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (table.header.empty()) {
            table.header = std::move(cells);
        } else if (cells.size() != table.header.size()) {
            throw ValidationError("csv line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(table.header.size()) + " columns, got " +
                                  std::to_string(cells.size()));
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    if (table.header.empty()) {
        throw ValidationError("csv: missing header");
    }
    return table;
}

}  // namespace jumpsde
