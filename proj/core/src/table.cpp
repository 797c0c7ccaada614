#include "rectent/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "rectent/error.hpp"

namespace rectent {

std::string format_number(double value, int digits) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

std::string to_text(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    return std::get<std::string>(cell);
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw InvalidArgument("table: row width does not match the header");
    rows_.push_back(std::move(row));
}

void Table::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << to_text(row[i]);
        os << '\n';
    }
}

void Table::write_text(std::ostream& os) const {
    std::vector<std::size_t> width(columns_.size());
    for (std::size_t i = 0; i < columns_.size(); ++i) width[i] = columns_[i].size();
    std::vector<std::vector<std::string>> text;
    for (const auto& row : rows_) {
        text.emplace_back();
        for (std::size_t i = 0; i < row.size(); ++i) {
            text.back().push_back(to_text(row[i]));
            width[i] = std::max(width[i], text.back().back().size());
        }
    }
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << "  ";
            os << cells[i];
            if (i + 1 < cells.size()) os << std::string(width[i] - cells[i].size(), ' ');
        }
        os << '\n';
    };
    line(columns_);
    for (const auto& t : text) line(t);
}

}  // namespace rectent
