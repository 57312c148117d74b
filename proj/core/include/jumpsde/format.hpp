// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace jumpsde {

/// `%.17g`: enough digits that parse_real returns the identical double.
std::string format_real(double v);

/// Shortest decimal that round-trips (for labels and config echoes).
std::string format_short(double v);

/// Whole-string decimal parse. Throws ValidationError naming `what`.
double parse_real(std::string_view text, std::string_view what = "number");

std::string_view trim(std::string_view s) noexcept;

/// Split on `sep`, ignoring separators nested inside parentheses.
std::vector<std::string> split_top_level(std::string_view s, char sep);

/// Comma-separated table with a header row; cells are kept as text.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of `name` in the header. Throws ValidationError if absent.
    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
};

/// Lines starting with '#' and blank lines are skipped. Throws
/// ValidationError with a line number on a ragged row.
CsvTable read_csv_table(std::istream& in);

}  // namespace jumpsde
