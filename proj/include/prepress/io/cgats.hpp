#pragma once

// CGATS-style measurement text, restricted subset:
//
//   - Lines end in LF or CRLF; '#' starts a comment outside quotes.
//   - Outside blocks, each line is `KEYWORD [value...]`, kept as metadata.
//   - BEGIN_DATA_FORMAT ... END_DATA_FORMAT lists column names. RGB_R, RGB_G,
//     RGB_B (0-255) and LAB_L, LAB_A, LAB_B are required; other columns are
//     kept per entry as extras.
//   - BEGIN_DATA ... END_DATA holds one sample per line, whitespace separated,
//     fields optionally double-quoted.
//
// See docs/formats.md for the grammar.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "prepress/errors.hpp"
#include "prepress/testchart.hpp"

namespace prepress::io {

inline constexpr std::array<std::string_view, 6> kCgatsRequiredColumns{"RGB_R", "RGB_G", "RGB_B",
                                                                       "LAB_L", "LAB_A", "LAB_B"};

namespace detail {

/// Splits a line into whitespace-separated tokens; double quotes group and
/// are stripped; an unquoted '#' ends the line.
inline std::vector<std::string> cgats_tokens(std::string_view line, std::size_t lineNo) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (c == ' ' || c == '\t') {
            ++i;
        } else if (c == '#') {
            break;
        } else if (c == '"') {
            const auto close = line.find('"', i + 1);
            if (close == std::string_view::npos) throw ParseError::at_line(lineNo, "unterminated quoted string");
            tokens.emplace_back(line.substr(i + 1, close - i - 1));
            i = close + 1;
        } else {
            const auto end = line.find_first_of(" \t#\"", i);
            tokens.emplace_back(line.substr(i, end == std::string_view::npos ? std::string_view::npos : end - i));
            i = end == std::string_view::npos ? line.size() : end;
        }
    }
    return tokens;
}

inline double cgats_number(const std::string& field, const std::string& column, std::size_t lineNo) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ParseError::at_line(lineNo, "non-numeric value '" + field + "' in column " + column);
    return v;
}

}  // namespace detail

inline MeasurementSet parse_cgats(std::string_view text) {
    enum class State { Header, Format, Data, Done };
    State state = State::Header;
    std::vector<std::string> columns;
    bool sawFormat = false;
    std::array<std::size_t, 6> required{};
    MeasurementSet ms;
    std::size_t lineNo = 0;
    std::size_t formatLine = 0;

    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        start = end + 1;
        ++lineNo;
        if (line.find('\r') != std::string_view::npos) throw ParseError::at_line(lineNo, "stray carriage return");

        const auto tokens = detail::cgats_tokens(line, lineNo);
        if (tokens.empty()) {
            if (end == text.size()) break;
            continue;
        }
        const std::string& head = tokens.front();

        switch (state) {
            case State::Header:
                if (head == "BEGIN_DATA_FORMAT") {
                    if (sawFormat) throw ParseError::at_line(lineNo, "duplicate BEGIN_DATA_FORMAT");
                    state = State::Format;
                    formatLine = lineNo;
                    columns.assign(tokens.begin() + 1, tokens.end());
                } else if (head == "BEGIN_DATA") {
                    if (!sawFormat) throw ParseError::at_line(lineNo, "BEGIN_DATA before BEGIN_DATA_FORMAT");
                    state = State::Data;
                } else if (head == "END_DATA_FORMAT" || head == "END_DATA") {
                    throw ParseError::at_line(lineNo, head + " without matching BEGIN");
                } else {
                    std::string value;
                    for (std::size_t t = 1; t < tokens.size(); ++t) value += (t > 1 ? " " : "") + tokens[t];
                    ms.metadata.emplace_back(head, value);
                }
                break;

            case State::Format: {
                bool closed = false;
                for (const auto& tok : tokens) {
                    if (closed) throw ParseError::at_line(lineNo, "unexpected text after END_DATA_FORMAT");
                    if (tok == "END_DATA_FORMAT")
                        closed = true;
                    else
                        columns.push_back(tok);
                }
                if (!closed) break;
                state = State::Header;
                sawFormat = true;
                for (std::size_t r = 0; r < kCgatsRequiredColumns.size(); ++r) {
                    std::optional<std::size_t> found;
                    for (std::size_t c = 0; c < columns.size(); ++c)
                        if (columns[c] == kCgatsRequiredColumns[r]) {
                            if (found) throw ParseError::at_line(lineNo, "duplicate column " + columns[c]);
                            found = c;
                        }
                    if (!found)
                        throw ParseError::at_line(formatLine,
                                                  "missing required column " + std::string(kCgatsRequiredColumns[r]));
                    required[r] = *found;
                }
                break;
            }

            case State::Data: {
                if (head == "END_DATA") {
                    if (tokens.size() > 1) throw ParseError::at_line(lineNo, "unexpected text after END_DATA");
                    state = State::Done;
                    break;
                }
                if (tokens.size() != columns.size())
                    throw ParseError::at_line(lineNo, "row has " + std::to_string(tokens.size()) + " fields, expected " +
                                                          std::to_string(columns.size()));
                std::array<double, 6> v{};
                for (std::size_t r = 0; r < required.size(); ++r)
                    v[r] = detail::cgats_number(tokens[required[r]], columns[required[r]], lineNo);
                for (std::size_t r = 0; r < 3; ++r)
                    if (v[r] < 0.0 || v[r] > 255.0)
                        throw ParseError::at_line(lineNo, columns[required[r]] + " outside 0-255");
                MeasurementEntry entry;
                entry.device = {v[0] / 255.0, v[1] / 255.0, v[2] / 255.0};
                entry.measured = {v[3], v[4], v[5]};
                for (std::size_t c = 0; c < columns.size(); ++c)
                    if (std::find(required.begin(), required.end(), c) == required.end())
                        entry.extras.emplace_back(columns[c], tokens[c]);
                ms.entries.push_back(std::move(entry));
                break;
            }

            case State::Done:
                if (head == "BEGIN_DATA" || head == "BEGIN_DATA_FORMAT")
                    throw ParseError::at_line(lineNo, "only one data table per file is supported");
                {
                    std::string value;
                    for (std::size_t t = 1; t < tokens.size(); ++t) value += (t > 1 ? " " : "") + tokens[t];
                    ms.metadata.emplace_back(head, value);
                }
                break;
        }
        if (end == text.size()) break;
    }

    if (state == State::Format) throw ParseError::at_line(lineNo, "missing END_DATA_FORMAT");
    if (state == State::Data) throw ParseError::at_line(lineNo, "missing END_DATA");
    if (!sawFormat) throw ParseError::at_line(lineNo, "missing BEGIN_DATA_FORMAT");
    if (state != State::Done) throw ParseError::at_line(lineNo, "missing BEGIN_DATA");
    if (ms.entries.empty()) throw ParseError::at_line(lineNo, "data table has no rows");
    return ms;
}

/// Writes the subset back out (LF line endings, RGB on 0-255, extras after
/// the required columns when every entry carries the same extra columns).
inline std::string format_cgats(const MeasurementSet& ms) {
    std::ostringstream out;
    out.precision(17);
    out << "CGATS.17\n";
    for (const auto& [key, value] : ms.metadata) {
        if (key == "CGATS.17" || key == "NUMBER_OF_FIELDS" || key == "NUMBER_OF_SETS") continue;
        out << key;
        if (!value.empty()) out << " \"" << value << "\"";
        out << "\n";
    }
    std::vector<std::string> extraCols;
    if (!ms.entries.empty())
        for (const auto& [col, _] : ms.entries.front().extras) extraCols.push_back(col);
    out << "NUMBER_OF_FIELDS " << 6 + extraCols.size() << "\nBEGIN_DATA_FORMAT\n";
    for (const auto& col : kCgatsRequiredColumns) out << col << " ";
    for (const auto& col : extraCols) out << col << " ";
    out << "\nEND_DATA_FORMAT\nNUMBER_OF_SETS " << ms.entries.size() << "\nBEGIN_DATA\n";
    for (const auto& e : ms.entries) {
        out << e.device.r * 255.0 << " " << e.device.g * 255.0 << " " << e.device.b * 255.0 << " " << e.measured.l
            << " " << e.measured.a << " " << e.measured.b;
        for (std::size_t c = 0; c < extraCols.size(); ++c)
            out << " \"" << (c < e.extras.size() ? e.extras[c].second : std::string()) << "\"";
        out << "\n";
    }
    out << "END_DATA\n";
    return out.str();
}

}  // namespace prepress::io
