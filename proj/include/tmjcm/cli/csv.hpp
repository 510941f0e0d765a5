#pragma once

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace tmjcm::cli {

/// Up to 17 significant digits, '.' decimal separator, independent of locale.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (res.ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
    return {buf, res.ptr};
}

/// Shortest text that parses back to the same double (used in file names and
/// emitted config files).
inline std::string format_shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{}) throw std::runtime_error("format_shortest: conversion failed");
    return {buf, res.ptr};
}

/// Accumulates a CSV body in memory; rows are written with '\n' endings and no
/// trailing delimiter.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
        if (header_.empty()) throw std::domain_error("CsvTable: empty header");
        append_line(header_);
    }

    void add_row(std::string_view label, std::initializer_list<double> values) {
        if (values.size() + 1 != header_.size()) throw std::domain_error("CsvTable: row width mismatch");
        text_ += label;
        for (double v : values) {
            text_ += ',';
            text_ += format_number(v);
        }
        text_ += '\n';
        ++rows_;
    }

    std::size_t rows() const noexcept { return rows_; }
    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::string& text() const noexcept { return text_; }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + path + " for writing");
        out << text_;
        if (!out) throw std::runtime_error("write failed for " + path);
    }

private:
    void append_line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
    }

    std::vector<std::string> header_;
    std::string text_;
    std::size_t rows_ = 0;
};

}  // namespace tmjcm::cli
