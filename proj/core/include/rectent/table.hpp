#pragma once

// Result tables written as CSV (12 significant digits, '.' decimal point) or
// as aligned text.

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace rectent {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Shortest-round-trip style formatting with `digits` significant digits,
/// independent of the global locale. Negative zero prints as 0.
std::string format_number(double value, int digits = 12);

class Table {
public:
    explicit Table(std::vector<std::string> columns);

    void add_row(std::vector<Cell> row);
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

    void write_csv(std::ostream& os) const;
    void write_text(std::ostream& os) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

std::string to_text(const Cell& cell);

}  // namespace rectent
